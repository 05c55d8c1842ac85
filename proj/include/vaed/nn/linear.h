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

#ifndef VAED_NN_LINEAR_H_
#define VAED_NN_LINEAR_H_

#include <string>

#include "vaed/nn/layer.h"

namespace vaed::nn {

// y = x W + b over the trailing axis, so [..., D_in] -> [..., D_out] and a
// time axis, if present, is handled frame by frame.
// weight: [D_in, D_out], bias: [D_out].
template <typename T>
class Linear : public Layer<T> {
 public:
  Linear(std::string name, int in_features, int out_features);

  Tensor<T> Forward(const Tensor<T>& x, Mode mode) override;
  Tensor<T> Backward(const Tensor<T>& dy) override;
  void CollectParams(ParamList<T>* out) override;
  std::string name() const override { return name_; }

  Param<T>& weight() { return weight_; }
  Param<T>& bias() { return bias_; }
  int in_features() const { return in_; }
  int out_features() const { return out_; }

 private:
  std::string name_;
  int in_, out_;
  Param<T> weight_, bias_;
  Tensor<T> input_;
};

}  // namespace vaed::nn

#endif  // VAED_NN_LINEAR_H_
