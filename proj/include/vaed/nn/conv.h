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

#ifndef VAED_NN_CONV_H_
#define VAED_NN_CONV_H_

#include <string>

#include "vaed/nn/layer.h"

namespace vaed::nn {

struct Conv2dOptions {
  int in_channels = 1;
  int out_channels = 1;
  int kernel_h = 3;
  int kernel_w = 3;
  int stride_h = 1;
  int stride_w = 1;
  int pad_h = 0;
  int pad_w = 0;
};

// Output extent of a strided, zero-padded window sweep. Throws DimensionError
// when the padded input is smaller than the kernel.
int ConvOutputSize(int in, int kernel, int stride, int pad);

// Cross-correlation over [N, C_in, H, W] producing [N, C_out, H', W'],
// lowered to a patch matrix and one GEMM per example.
// weight: [C_out, C_in, kh, kw], bias: [C_out].
template <typename T>
class Conv2d : public Layer<T> {
 public:
  Conv2d(std::string name, Conv2dOptions opt);

  Tensor<T> Forward(const Tensor<T>& x, Mode mode) override;
  Tensor<T> Backward(const Tensor<T>& dy) override;
  void CollectParams(ParamList<T>* out) override;
  std::string name() const override { return name_; }

  Param<T>& weight() { return weight_; }
  Param<T>& bias() { return bias_; }
  const Conv2dOptions& options() const { return opt_; }

 private:
  std::string name_;
  Conv2dOptions opt_;
  Param<T> weight_;
  Param<T> bias_;
  Tensor<T> input_;
};

// Temporal convolution over [N, C_in, T] -> [N, C_out, T'].
// weight: [C_out, C_in, k], bias: [C_out].
template <typename T>
class Conv1d : public Layer<T> {
 public:
  Conv1d(std::string name, int in_channels, int out_channels, int kernel = 3,
         int stride = 1, int pad = 1);

  Tensor<T> Forward(const Tensor<T>& x, Mode mode) override;
  Tensor<T> Backward(const Tensor<T>& dy) override;
  void CollectParams(ParamList<T>* out) override;
  std::string name() const override { return name_; }

  Param<T>& weight() { return weight_; }
  Param<T>& bias() { return bias_; }

 private:
  std::string name_;
  Conv2dOptions opt_;
  Param<T> weight_;
  Param<T> bias_;
  Tensor<T> input_;
};

}  // namespace vaed::nn

#endif  // VAED_NN_CONV_H_
