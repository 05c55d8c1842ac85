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

#ifndef VAED_MODELS_AED_MODEL_H_
#define VAED_MODELS_AED_MODEL_H_

#include <cstdint>

#include "vaed/models/blocks.h"
#include "vaed/models/model_spec.h"
#include "vaed/nn/activations.h"
#include "vaed/nn/linear.h"
#include "vaed/nn/pool.h"

namespace vaed::models {

// Late-fusion event classifier. The audio branch maps [N, 400, 64] log-mels
// to [N, 100, A]; in dual mode the voice branch maps [N, 100, E] embeddings to
// [N, 100, V]; the head concatenates, applies a frame-wise fc + sigmoid and
// pools over time.
class AedModel {
 public:
  explicit AedModel(const AedSpec& spec, uint64_t seed = 0);

  struct Output {
    TensorF frame_probs;  // [N, 100, C]
    TensorF clip_probs;   // [N, C]
  };
  // `embedding` is required in dual mode and ignored in audio-only mode.
  Output Forward(const TensorF& logmel, const TensorF* embedding, Mode mode);
  // Gradient of the loss w.r.t. clip_probs.
  void Backward(const TensorF& dclip);

  nn::ParamList<float> Params();
  nn::ParamList<float> AudioParams();
  nn::ParamList<float> VoiceParams();
  nn::ParamList<float> HeadParams();
  LayerShapes TraceAudio(const TensorF& logmel);
  LayerShapes TraceVoice(const TensorF& embedding);
  // Fused [N, 100, fused] features from the last Forward.
  const TensorF& fused() const { return fused_; }
  const AedSpec& spec() const { return spec_; }

 private:
  void BuildCnn();
  void BuildRecurrent();
  void BuildVoice();

  AedSpec spec_;
  nn::Sequential<float> audio_{"audio"};
  nn::Sequential<float> voice_{"voice"};
  nn::Linear<float> fc_;
  nn::Sigmoid<float> sigmoid_;
  nn::LinearSoftmaxPool<float> pool_;
  TensorF fused_;
};

}  // namespace vaed::models

#endif  // VAED_MODELS_AED_MODEL_H_
