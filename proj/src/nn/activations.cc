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

#include "vaed/nn/activations.h"

#include <cmath>

#include "vaed/common/error.h"

namespace vaed::nn {

template <typename T>
Tensor<T> Relu<T>::Forward(const Tensor<T>& x, Mode) {
  output_ = x;
  for (T& v : output_.storage()) v = v > T(0) ? v : T(0);
  return output_;
}

template <typename T>
Tensor<T> Relu<T>::Backward(const Tensor<T>& dy) {
  Tensor<T> dx = dy;
  for (size_t i = 0; i < dx.size(); ++i) {
    if (!(output_[i] > T(0))) dx[i] = T(0);
  }
  return dx;
}

template <typename T>
Tensor<T> Sigmoid<T>::Forward(const Tensor<T>& x, Mode) {
  output_ = x;
  for (T& v : output_.storage()) v = SigmoidScalar(v);
  return output_;
}

template <typename T>
Tensor<T> Sigmoid<T>::Backward(const Tensor<T>& dy) {
  Tensor<T> dx = dy;
  for (size_t i = 0; i < dx.size(); ++i) dx[i] *= output_[i] * (T(1) - output_[i]);
  return dx;
}

template <typename T>
Dropout<T>::Dropout(std::string name, double p, uint64_t seed)
    : name_(std::move(name)), p_(0.0), rng_(seed) {
  set_rate(p);
}

template <typename T>
void Dropout<T>::set_rate(double p) {
  if (!(p >= 0.0 && p < 1.0)) {
    throw ValidationError(name_ + ": dropout probability must lie in [0, 1)");
  }
  p_ = p;
}

template <typename T>
Tensor<T> Dropout<T>::Forward(const Tensor<T>& x, Mode mode) {
  if (mode == Mode::kEval || p_ == 0.0) {
    mask_ = Tensor<T>();
    return x;
  }
  const T scale = static_cast<T>(1.0 / (1.0 - p_));
  mask_ = Tensor<T>(x.shape());
  Tensor<T> y = x;
  for (size_t i = 0; i < y.size(); ++i) {
    const T m = UniformReal(rng_, 0.0, 1.0) < p_ ? T(0) : scale;
    mask_[i] = m;
    y[i] *= m;
  }
  return y;
}

template <typename T>
Tensor<T> Dropout<T>::Backward(const Tensor<T>& dy) {
  if (mask_.empty()) return dy;
  Tensor<T> dx = dy;
  for (size_t i = 0; i < dx.size(); ++i) dx[i] *= mask_[i];
  return dx;
}

template class Relu<float>;
template class Relu<double>;
template class Sigmoid<float>;
template class Sigmoid<double>;
template class Dropout<float>;
template class Dropout<double>;

}  // namespace vaed::nn
