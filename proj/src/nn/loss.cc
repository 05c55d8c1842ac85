// Copyright (c) 2026 The vaed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vaed/nn/loss.h"

#include <algorithm>
#include <cmath>

#include "vaed/common/error.h"

namespace vaed::nn {

template <typename T>
T BinaryCrossEntropy(const Tensor<T>& pred, const Tensor<T>& target, Tensor<T>* grad) {
  ExpectShape(target.shape(), pred.shape(), "BinaryCrossEntropy");
  const T lo = static_cast<T>(kBceClamp), hi = T(1) - static_cast<T>(kBceClamp);
  const T count = static_cast<T>(pred.size());
  if (grad) *grad = Tensor<T>(pred.shape());
  double total = 0.0;
  for (size_t i = 0; i < pred.size(); ++i) {
    const T p = std::clamp(pred[i], lo, hi);
    const T t = target[i];
    total -= static_cast<double>(t * std::log(p) + (T(1) - t) * std::log(T(1) - p));
    if (grad) (*grad)[i] = (p - t) / (p * (T(1) - p)) / count;
  }
  return static_cast<T>(total / static_cast<double>(pred.size()));
}

template <typename T>
T CrossEntropy(const Tensor<T>& logits, std::span<const int> labels, Tensor<T>* grad) {
  if (logits.ndim() != 2 || static_cast<size_t>(logits.dim(0)) != labels.size()) {
    throw DimensionError("CrossEntropy: logits must be [N, K] with N labels");
  }
  const int n = logits.dim(0), k = logits.dim(1);
  if (grad) *grad = Tensor<T>(logits.shape());
  double total = 0.0;
  for (int b = 0; b < n; ++b) {
    const T* row = logits.data() + static_cast<size_t>(b) * k;
    const int label = labels[static_cast<size_t>(b)];
    if (label < 0 || label >= k) throw DimensionError("CrossEntropy: label out of range");
    const T mx = *std::max_element(row, row + k);
    double z = 0.0;
    for (int j = 0; j < k; ++j) z += std::exp(static_cast<double>(row[j] - mx));
    const double log_z = std::log(z) + mx;
    total += log_z - row[label];
    if (grad) {
      T* g = grad->data() + static_cast<size_t>(b) * k;
      for (int j = 0; j < k; ++j) {
        const double sm = std::exp(static_cast<double>(row[j]) - log_z);
        g[j] = static_cast<T>((sm - (j == label ? 1.0 : 0.0)) / n);
      }
    }
  }
  return static_cast<T>(total / n);
}

template float BinaryCrossEntropy(const Tensor<float>&, const Tensor<float>&, Tensor<float>*);
template double BinaryCrossEntropy(const Tensor<double>&, const Tensor<double>&, Tensor<double>*);
template float CrossEntropy(const Tensor<float>&, std::span<const int>, Tensor<float>*);
template double CrossEntropy(const Tensor<double>&, std::span<const int>, Tensor<double>*);

}  // namespace vaed::nn
