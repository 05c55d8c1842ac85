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

#ifndef VAED_MODELS_CHECKPOINT_H_
#define VAED_MODELS_CHECKPOINT_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "vaed/nn/adam.h"
#include "vaed/nn/layer.h"

namespace vaed::models {

using NamedTensors = std::vector<std::pair<std::string, TensorF>>;

// Binary layout: "CKPT", u32 version, u32 metadata length, metadata JSON,
// u32 parameter count, parameter entries, u32 optimizer count, optimizer
// entries. An entry is u32 name length, name, u32 ndim, u32 dims, f32 data.
// Metadata carries at least "fingerprint", "spec", "epoch", "metric", "rng".
struct Checkpoint {
  nlohmann::json meta = nlohmann::json::object();
  NamedTensors params;
  NamedTensors optimizer;
};

inline constexpr uint32_t kCheckpointVersion = 1;

std::string EncodeCheckpoint(const Checkpoint& ckpt);
Checkpoint DecodeCheckpoint(std::string_view bytes, const std::string& source);
void SaveCheckpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint LoadCheckpoint(const std::filesystem::path& path);

// Snapshot of every parameter (including running statistics) and, when given,
// the Adam moments as "adam.m.<name>" / "adam.v.<name>" plus the step count
// in meta["adam_step"].
Checkpoint CaptureCheckpoint(const nn::ParamList<float>& params,
                             const nn::Adam<float>* adam = nullptr);

// Copies tensors back by name. The checkpoint must carry `fingerprint` and
// exactly the parameter names and shapes of `params`; otherwise
// ModelSpecError and nothing is modified.
void RestoreParams(const Checkpoint& ckpt, const std::string& fingerprint,
                   const nn::ParamList<float>& params);
void RestoreOptimizer(const Checkpoint& ckpt, nn::Adam<float>* adam);

}  // namespace vaed::models

#endif  // VAED_MODELS_CHECKPOINT_H_
