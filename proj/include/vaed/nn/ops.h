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

#ifndef VAED_NN_OPS_H_
#define VAED_NN_OPS_H_

#include <string>
#include <utility>

#include "vaed/nn/layer.h"

namespace vaed::nn {

// [N, C, T, F] -> [N, T, C*F] with feature index c*F + f, i.e. each time step
// gets its channel-major stack of frequency bins.
template <typename T>
class FlattenToFrames : public Layer<T> {
 public:
  explicit FlattenToFrames(std::string name = "flatten") : name_(std::move(name)) {}
  Tensor<T> Forward(const Tensor<T>& x, Mode mode) override;
  Tensor<T> Backward(const Tensor<T>& dy) override;
  std::string name() const override { return name_; }

 private:
  std::string name_;
  Shape input_shape_;
};

// [N, A, B] -> [N, B, A].
template <typename T>
class SwapLastAxes : public Layer<T> {
 public:
  explicit SwapLastAxes(std::string name = "swap") : name_(std::move(name)) {}
  Tensor<T> Forward(const Tensor<T>& x, Mode mode) override;
  Tensor<T> Backward(const Tensor<T>& dy) override;
  std::string name() const override { return name_; }

 private:
  std::string name_;
};

template <typename T>
Tensor<T> SwapLast2(const Tensor<T>& x);

// [N, T, A] ++ [N, T, B] -> [N, T, A+B].
template <typename T>
Tensor<T> ConcatFeatures(const Tensor<T>& a, const Tensor<T>& b);
// Inverse of ConcatFeatures for the gradient; `left` is A.
template <typename T>
std::pair<Tensor<T>, Tensor<T>> SplitFeatures(const Tensor<T>& x, int left);

}  // namespace vaed::nn

#endif  // VAED_NN_OPS_H_
