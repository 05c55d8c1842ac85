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

#include "vaed/nn/adam.h"

#include <cmath>

#include "vaed/common/error.h"

namespace vaed::nn {

template <typename T>
Adam<T>::Adam(const ParamList<T>& params, AdamOptions options) : options_(options) {
  for (Param<T>* p : params) {
    if (!p->trainable) continue;
    params_.push_back(p);
    m_.emplace_back(p->value.shape());
    v_.emplace_back(p->value.shape());
  }
}

template <typename T>
void Adam<T>::Step(double lr) {
  for (Param<T>* p : params_) {
    if (!p->grad.AllFinite()) {
      throw NonFiniteError("non-finite gradient in " + p->name + "; step skipped");
    }
  }
  ++step_;
  const double b1 = options_.beta1, b2 = options_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(step_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(step_));
  for (size_t i = 0; i < params_.size(); ++i) {
    Param<T>& p = *params_[i];
    Tensor<T>& m = m_[i];
    Tensor<T>& v = v_[i];
    for (size_t j = 0; j < p.value.size(); ++j) {
      const double g = p.grad[j];
      const double mj = b1 * m[j] + (1.0 - b1) * g;
      const double vj = b2 * v[j] + (1.0 - b2) * g * g;
      m[j] = static_cast<T>(mj);
      v[j] = static_cast<T>(vj);
      const double update = lr * (mj / c1) / (std::sqrt(vj / c2) + options_.eps);
      p.value[j] = static_cast<T>(p.value[j] - update);
    }
  }
}

template class Adam<float>;
template class Adam<double>;

}  // namespace vaed::nn
