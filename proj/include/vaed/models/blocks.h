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

#ifndef VAED_MODELS_BLOCKS_H_
#define VAED_MODELS_BLOCKS_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "vaed/nn/layer.h"

namespace vaed::models {

using nn::Mode;
using LayerShapes = std::vector<std::pair<std::string, Shape>>;

// conv (stride 1) + batch norm + ReLU.
void AddConvBnRelu(nn::Sequential<float>* seq, const std::string& name, int in, int out,
                   int kernel_h = 3, int kernel_w = 3, int pad_h = 1, int pad_w = 1);

// Runs `seq` one layer at a time in eval mode and records each output shape.
LayerShapes TraceShapes(nn::Sequential<float>& seq, const TensorF& x, TensorF* out = nullptr);

// Checks a log-mel batch [N, 400, 64] (or [N, 1, 400, 64]) and returns it as
// the single-channel image [N, 1, 400, 64].
TensorF AsImageBatch(const TensorF& logmel);

// Deterministic initialization keyed by parameter name: conv and fc weights
// He-uniform over their fan-in, GRU matrices U(-1/sqrt(H), 1/sqrt(H)), biases
// and BN shifts zero, BN scales one, running statistics reset to (0, 1).
void InitParams(const nn::ParamList<float>& params, uint64_t seed);

size_t CountTrainable(const nn::ParamList<float>& params);

}  // namespace vaed::models

#endif  // VAED_MODELS_BLOCKS_H_
