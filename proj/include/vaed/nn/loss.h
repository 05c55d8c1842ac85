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

#ifndef VAED_NN_LOSS_H_
#define VAED_NN_LOSS_H_

#include <span>

#include "vaed/common/tensor.h"

namespace vaed::nn {

inline constexpr double kBceClamp = 1e-7;

// Mean over every element of -[t ln p + (1-t) ln(1-p)], p clamped to
// [1e-7, 1-1e-7]. Targets may be fractional. When `grad` is non-null it
// receives dLoss/dpred; the derivative is evaluated at the clamped value and
// passed straight through the clamp, so saturated predictions still learn.
template <typename T>
T BinaryCrossEntropy(const Tensor<T>& pred, const Tensor<T>& target, Tensor<T>* grad);

// Mean over the batch of -ln softmax(logits[b])[labels[b]] for logits [N, K].
template <typename T>
T CrossEntropy(const Tensor<T>& logits, std::span<const int> labels, Tensor<T>* grad);

}  // namespace vaed::nn

#endif  // VAED_NN_LOSS_H_
