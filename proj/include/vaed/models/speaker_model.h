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

#ifndef VAED_MODELS_SPEAKER_MODEL_H_
#define VAED_MODELS_SPEAKER_MODEL_H_

#include <cstdint>

#include "vaed/models/blocks.h"
#include "vaed/models/model_spec.h"

namespace vaed::models {

// Speaker classifier split at the embedding tap: `trunk` maps log-mels to the
// [N, 100, E] embedding sequence, `head` maps it to [N, speakers] logits.
class SpeakerModel {
 public:
  explicit SpeakerModel(const SpeakerSpec& spec, uint64_t seed = 0);

  struct Output {
    TensorF logits;     // [N, speakers]
    TensorF embedding;  // [N, 100, E]
  };
  Output Forward(const TensorF& logmel, Mode mode);
  // Gradient of the loss w.r.t. the logits; accumulates parameter gradients.
  void Backward(const TensorF& dlogits);
  // Frozen extraction: eval-mode trunk only.
  TensorF Embed(const TensorF& logmel);

  LayerShapes TraceTrunk(const TensorF& logmel);
  nn::ParamList<float> Params();
  const SpeakerSpec& spec() const { return spec_; }

 private:
  SpeakerSpec spec_;
  nn::Sequential<float> trunk_{"trunk"};
  nn::Sequential<float> head_{"head"};
};

}  // namespace vaed::models

#endif  // VAED_MODELS_SPEAKER_MODEL_H_
