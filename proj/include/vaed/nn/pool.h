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

#ifndef VAED_NN_POOL_H_
#define VAED_NN_POOL_H_

#include <string>
#include <vector>

#include "vaed/nn/layer.h"

namespace vaed::nn {

// Non-overlapping max pooling over [N, C, H, W] with stride == kernel. In
// ceil mode the trailing partial window is kept (out = ceil(H / kh)); in
// floor mode it is dropped. The gradient goes to the first maximum of each
// window in row-major order.
template <typename T>
class MaxPool2d : public Layer<T> {
 public:
  MaxPool2d(std::string name, int kernel_h, int kernel_w, bool ceil_mode = true);

  Tensor<T> Forward(const Tensor<T>& x, Mode mode) override;
  Tensor<T> Backward(const Tensor<T>& dy) override;
  std::string name() const override { return name_; }

  static int OutputSize(int in, int kernel, bool ceil_mode);

 private:
  std::string name_;
  int kh_, kw_;
  bool ceil_;
  Shape input_shape_;
  std::vector<size_t> argmax_;
};

// Clip-level aggregation of frame probabilities [N, T, C] -> [N, C]:
// y_c = sum_t p_tc^2 / sum_t p_tc, and y_c = 0 (zero gradient) when the
// column sums to zero.
template <typename T>
class LinearSoftmaxPool : public Layer<T> {
 public:
  explicit LinearSoftmaxPool(std::string name = "lin_softmax_pool") : name_(std::move(name)) {}

  Tensor<T> Forward(const Tensor<T>& x, Mode mode) override;
  Tensor<T> Backward(const Tensor<T>& dy) override;
  std::string name() const override { return name_; }

 private:
  std::string name_;
  Tensor<T> input_;
};

// Average over the time axis: [N, T, D] -> [N, D].
template <typename T>
class TimeMean : public Layer<T> {
 public:
  explicit TimeMean(std::string name = "time_mean") : name_(std::move(name)) {}

  Tensor<T> Forward(const Tensor<T>& x, Mode mode) override;
  Tensor<T> Backward(const Tensor<T>& dy) override;
  std::string name() const override { return name_; }

 private:
  std::string name_;
  Shape input_shape_;
};

}  // namespace vaed::nn

#endif  // VAED_NN_POOL_H_
