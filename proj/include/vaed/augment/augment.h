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

#ifndef VAED_AUGMENT_AUGMENT_H_
#define VAED_AUGMENT_AUGMENT_H_

#include <optional>
#include <string>
#include <vector>

#include "vaed/common/random.h"
#include "vaed/common/tensor.h"
#include "vaed/nn/layer.h"

namespace vaed::augment {

struct AugmentConfig {
  bool mixup = false;
  bool time_mask = false;
  bool voice_dropout = false;
  int time_mask_width = 40;
  // Mask `time_mask_width` distinct frames drawn at random instead of one
  // contiguous block.
  bool independent_frames = false;
  double mixup_alpha = 1.0;
  double voice_dropout_p = 0.5;

  bool any() const { return mixup || time_mask || voice_dropout; }
  void Validate() const;
  // "none", "all", or a comma list of mixup, tmask, dropout.
  static AugmentConfig Parse(const std::string& enable);
  std::string EnableString() const;
};

// Zeroes `width` frames of every example of an [N, T, E] (or [T, E])
// embedding batch; each example draws its own block start uniformly in
// [0, T - width]. Other frames are left bit-identical.
void TimeMask(TensorF* embedding, int width, Rng& rng, bool independent_frames = false);

// In-place element-wise inverted dropout; identity in eval mode or p == 0.
void VoiceDropout(TensorF* embedding, double p, nn::Mode mode, Rng& rng);

struct MixupDraw {
  std::vector<int> partner;     // the permutation π
  std::vector<double> lambda;   // per-example weights
};

// x'_i = λ_i x_i + (1 - λ_i) x_π(i), with the same λ_i for every tensor of the
// batch (log-mels, embeddings, multi-hot labels). `embedding` may be null.
// A batch of one is returned unchanged with a warning. `forced_lambda`
// overrides the Beta(α, α) draws.
MixupDraw Mixup(TensorF* logmel, TensorF* embedding, TensorF* labels, double alpha, Rng& rng,
                std::optional<double> forced_lambda = std::nullopt);

}  // namespace vaed::augment

#endif  // VAED_AUGMENT_AUGMENT_H_
