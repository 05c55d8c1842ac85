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

#ifndef VAED_NN_ADAM_H_
#define VAED_NN_ADAM_H_

#include <cstdint>
#include <vector>

#include "vaed/nn/layer.h"

namespace vaed::nn {

struct AdamOptions {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Adam with bias correction over the trainable subset of a parameter list.
// The moment tensors are ordered like the trainable params.
template <typename T>
class Adam {
 public:
  explicit Adam(const ParamList<T>& params, AdamOptions options = {});

  // Throws NonFiniteError without touching any parameter or moment when a
  // gradient contains NaN or Inf; the step counter does not advance.
  void Step(double lr);

  int64_t step() const { return step_; }
  void set_step(int64_t s) { step_ = s; }
  const AdamOptions& options() const { return options_; }
  const ParamList<T>& params() const { return params_; }
  std::vector<Tensor<T>>& first_moments() { return m_; }
  std::vector<Tensor<T>>& second_moments() { return v_; }
  const std::vector<Tensor<T>>& first_moments() const { return m_; }
  const std::vector<Tensor<T>>& second_moments() const { return v_; }

 private:
  ParamList<T> params_;
  AdamOptions options_;
  std::vector<Tensor<T>> m_, v_;
  int64_t step_ = 0;
};

}  // namespace vaed::nn

#endif  // VAED_NN_ADAM_H_
