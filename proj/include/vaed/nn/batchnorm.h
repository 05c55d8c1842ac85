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

#ifndef VAED_NN_BATCHNORM_H_
#define VAED_NN_BATCHNORM_H_

#include <string>

#include "vaed/nn/layer.h"

namespace vaed::nn {

// Per-channel normalization over [N, C, ...]; statistics pool the batch axis
// and every trailing axis. Train mode normalizes with the biased batch
// variance and folds the unbiased variance into the running estimate with
// momentum 0.1; eval mode uses the running estimates. A channel must see at
// least two values in train mode, otherwise DegenerateBatchError.
template <typename T>
class BatchNorm : public Layer<T> {
 public:
  BatchNorm(std::string name, int channels, T eps = T(1e-5), T momentum = T(0.1));

  Tensor<T> Forward(const Tensor<T>& x, Mode mode) override;
  Tensor<T> Backward(const Tensor<T>& dy) override;
  void CollectParams(ParamList<T>* out) override;
  std::string name() const override { return name_; }

  Param<T>& gamma() { return gamma_; }
  Param<T>& beta() { return beta_; }
  Param<T>& running_mean() { return running_mean_; }
  Param<T>& running_var() { return running_var_; }

 private:
  std::string name_;
  int channels_;
  T eps_, momentum_;
  Param<T> gamma_, beta_, running_mean_, running_var_;
  // Backward cache.
  Mode mode_ = Mode::kEval;
  Tensor<T> xhat_;
  std::vector<T> inv_std_;
};

}  // namespace vaed::nn

#endif  // VAED_NN_BATCHNORM_H_
