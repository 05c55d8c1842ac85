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

#include "vaed/models/aed_model.h"

#include "vaed/common/error.h"
#include "vaed/nn/conv.h"
#include "vaed/nn/batchnorm.h"
#include "vaed/nn/gru.h"
#include "vaed/nn/ops.h"

namespace vaed::models {

AedModel::AedModel(const AedSpec& spec, uint64_t seed)
    : spec_((spec.Validate(), spec)), fc_("head.fc", spec.fused_width(), spec.num_classes) {
  if (spec_.audio == AudioBranch::kCnn) {
    BuildCnn();
  } else {
    BuildRecurrent();
  }
  if (spec_.mode == BranchMode::kDual) BuildVoice();
  InitParams(Params(), seed);
}

void AedModel::BuildCnn() {
  const std::vector<int>& c = spec_.cnn_channels;
  AddConvBnRelu(&audio_, "audio.conv1", 1, c[0]);
  audio_.Add<nn::MaxPool2d<float>>("audio.pool1", 2, 2);
  AddConvBnRelu(&audio_, "audio.conv2", c[0], c[1]);
  audio_.Add<nn::MaxPool2d<float>>("audio.pool2", 2, 2);
  AddConvBnRelu(&audio_, "audio.conv3", c[1], c[2]);
  if (spec_.mode == BranchMode::kDual) {
    // Conv4 removed; project channels x 16 bins to the stated audio width.
    audio_.Add<nn::FlattenToFrames<float>>("audio.flatten");
    audio_.Add<nn::Linear<float>>("audio.proj", c[2] * 16, spec_.audio_width);
    return;
  }
  AddConvBnRelu(&audio_, "audio.conv4", c[2], c[3]);
  audio_.Add<nn::MaxPool2d<float>>("audio.pool4", 1, 2);
  audio_.Add<nn::FlattenToFrames<float>>("audio.flatten");
  audio_.Add<nn::Linear<float>>("audio.fc1", c[3] * 8, spec_.baseline_fc[0]);
  audio_.Add<nn::Relu<float>>();
  audio_.Add<nn::Linear<float>>("audio.fc2", spec_.baseline_fc[0], spec_.baseline_fc[1]);
  audio_.Add<nn::Relu<float>>();
}

void AedModel::BuildRecurrent() {
  const std::vector<int>& c = spec_.recurrent_channels;
  AddConvBnRelu(&audio_, "audio.conv1", 1, c[0]);
  audio_.Add<nn::MaxPool2d<float>>("audio.pool1", 2, 2);
  AddConvBnRelu(&audio_, "audio.conv2", c[0], c[1]);
  AddConvBnRelu(&audio_, "audio.conv3", c[1], c[2]);
  audio_.Add<nn::MaxPool2d<float>>("audio.pool2", 2, 2);
  AddConvBnRelu(&audio_, "audio.conv4", c[2], c[3]);
  audio_.Add<nn::FlattenToFrames<float>>("audio.flatten");
  audio_.Add<nn::Gru<float>>("audio.bigru", c[3] * 16, spec_.audio_width / 2,
                             nn::GruDirection::kBidirectional);
}

void AedModel::BuildVoice() {
  const std::vector<int>& c = spec_.voice_channels;
  voice_.Add<nn::SwapLastAxes<float>>("voice.to_channels");
  voice_.Add<nn::Conv1d<float>>("voice.conv1", spec_.embedding_width, c[0], 3, 1, 1);
  voice_.Add<nn::BatchNorm<float>>("voice.conv1_bn", c[0]);
  voice_.Add<nn::Relu<float>>();
  voice_.Add<nn::Conv1d<float>>("voice.conv2", c[0], c[1], 3, 1, 1);
  voice_.Add<nn::BatchNorm<float>>("voice.conv2_bn", c[1]);
  voice_.Add<nn::Relu<float>>();
  voice_.Add<nn::SwapLastAxes<float>>("voice.to_frames");
  voice_.Add<nn::Gru<float>>("voice.gru", c[1], spec_.voice_width);
}

AedModel::Output AedModel::Forward(const TensorF& logmel, const TensorF* embedding, Mode mode) {
  TensorF audio = audio_.Forward(AsImageBatch(logmel), mode);
  if (spec_.mode == BranchMode::kDual) {
    if (embedding == nullptr) throw FusionError("dual-branch model needs voice embeddings");
    const Shape& es = embedding->shape();
    if (es.size() != 3 || es[0] != audio.dim(0) || es[2] != spec_.embedding_width) {
      throw DimensionError("voice embedding batch " + ShapeToString(es) +
                           " does not match [" + std::to_string(audio.dim(0)) + ", 100, " +
                           std::to_string(spec_.embedding_width) + "]");
    }
    TensorF voice = voice_.Forward(*embedding, mode);
    fused_ = nn::ConcatFeatures(audio, voice);
  } else {
    fused_ = std::move(audio);
  }
  Output out;
  out.frame_probs = sigmoid_.Forward(fc_.Forward(fused_, mode), mode);
  out.clip_probs = pool_.Forward(out.frame_probs, mode);
  return out;
}

void AedModel::Backward(const TensorF& dclip) {
  TensorF dfused = fc_.Backward(sigmoid_.Backward(pool_.Backward(dclip)));
  if (spec_.mode == BranchMode::kDual) {
    auto [daudio, dvoice] = nn::SplitFeatures(dfused, spec_.audio_output_width());
    voice_.Backward(dvoice);
    audio_.Backward(daudio);
  } else {
    audio_.Backward(dfused);
  }
}

nn::ParamList<float> AedModel::AudioParams() {
  nn::ParamList<float> ps;
  audio_.CollectParams(&ps);
  return ps;
}

nn::ParamList<float> AedModel::VoiceParams() {
  nn::ParamList<float> ps;
  voice_.CollectParams(&ps);
  return ps;
}

nn::ParamList<float> AedModel::HeadParams() {
  nn::ParamList<float> ps;
  fc_.CollectParams(&ps);
  return ps;
}

nn::ParamList<float> AedModel::Params() {
  nn::ParamList<float> ps = AudioParams();
  for (auto* p : VoiceParams()) ps.push_back(p);
  for (auto* p : HeadParams()) ps.push_back(p);
  return ps;
}

LayerShapes AedModel::TraceAudio(const TensorF& logmel) {
  return TraceShapes(audio_, AsImageBatch(logmel));
}

LayerShapes AedModel::TraceVoice(const TensorF& embedding) {
  return TraceShapes(voice_, embedding);
}

}  // namespace vaed::models
