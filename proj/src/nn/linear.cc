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

#include "vaed/nn/linear.h"

#include "vaed/common/error.h"
#include "vaed/nn/gemm.h"

namespace vaed::nn {

template <typename T>
Linear<T>::Linear(std::string name, int in_features, int out_features)
    : name_(std::move(name)),
      in_(in_features),
      out_(out_features),
      weight_(name_ + ".weight", {in_features, out_features}),
      bias_(name_ + ".bias", {out_features}) {}

template <typename T>
Tensor<T> Linear<T>::Forward(const Tensor<T>& x, Mode) {
  if (x.ndim() < 1 || x.dim(-1) != in_) {
    throw DimensionError(name_ + ": trailing dimension must be " + std::to_string(in_) +
                         ", got shape " + ShapeToString(x.shape()));
  }
  input_ = x;
  const int rows = static_cast<int>(x.size() / in_);
  Shape shape = x.shape();
  shape.back() = out_;
  Tensor<T> y(shape);
  for (int r = 0; r < rows; ++r) {
    std::copy(bias_.value.data(), bias_.value.data() + out_, y.data() + static_cast<size_t>(r) * out_);
  }
  Gemm<T>(false, false, rows, out_, in_, x.data(), weight_.value.data(), T(1), y.data());
  return y;
}

template <typename T>
Tensor<T> Linear<T>::Backward(const Tensor<T>& dy) {
  const int rows = static_cast<int>(input_.size() / in_);
  if (dy.size() != static_cast<size_t>(rows) * out_) {
    throw DimensionError(name_ + ": gradient shape mismatch");
  }
  Gemm<T>(true, false, in_, out_, rows, input_.data(), dy.data(), T(1), weight_.grad.data());
  for (int r = 0; r < rows; ++r) {
    const T* row = dy.data() + static_cast<size_t>(r) * out_;
    for (int j = 0; j < out_; ++j) bias_.grad[j] += row[j];
  }
  Tensor<T> dx(input_.shape());
  Gemm<T>(false, true, rows, in_, out_, dy.data(), weight_.value.data(), T(0), dx.data());
  return dx;
}

template <typename T>
void Linear<T>::CollectParams(ParamList<T>* out) {
  out->push_back(&weight_);
  out->push_back(&bias_);
}

template class Linear<float>;
template class Linear<double>;

}  // namespace vaed::nn
