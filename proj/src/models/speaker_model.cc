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

#include "vaed/models/speaker_model.h"

#include "vaed/nn/activations.h"
#include "vaed/nn/batchnorm.h"
#include "vaed/nn/gru.h"
#include "vaed/nn/linear.h"
#include "vaed/nn/ops.h"
#include "vaed/nn/pool.h"

namespace vaed::models {

SpeakerModel::SpeakerModel(const SpeakerSpec& spec, uint64_t seed) : spec_(spec) {
  spec_.Validate();
  const std::vector<int>& c = spec_.channels;
  const int e = spec_.embedding_width;
  if (spec_.arch == VoiceArch::kArch1) {
    // 400x64 -> 200x32 -> 100x16 -> 100x8 -> (1x8 valid conv) 100x1.
    AddConvBnRelu(&trunk_, "conv1", 1, c[0]);
    trunk_.Add<nn::MaxPool2d<float>>("pool1", 2, 2);
    AddConvBnRelu(&trunk_, "conv2", c[0], c[1]);
    trunk_.Add<nn::MaxPool2d<float>>("pool2", 2, 2);
    AddConvBnRelu(&trunk_, "conv3", c[1], c[2]);
    AddConvBnRelu(&trunk_, "conv4", c[2], c[3]);
    AddConvBnRelu(&trunk_, "conv5", c[3], c[4]);
    trunk_.Add<nn::MaxPool2d<float>>("pool3", 1, 2);
    AddConvBnRelu(&trunk_, "conv6", c[4], e, 1, 8, 0, 0);
    trunk_.Add<nn::FlattenToFrames<float>>("to_frames");

    head_.Add<nn::TimeMean<float>>();
    head_.Add<nn::Linear<float>>("fc1", e, spec_.fc_width);
    head_.Add<nn::BatchNorm<float>>("fc1_bn", spec_.fc_width);
    head_.Add<nn::Relu<float>>();
    head_.Add<nn::Linear<float>>("fc2", spec_.fc_width, spec_.num_speakers);
  } else {
    // 400x64 -> 200x32 -> 100x16, then channels x 16 bins per frame.
    AddConvBnRelu(&trunk_, "conv1", 1, c[0]);
    trunk_.Add<nn::MaxPool2d<float>>("pool1", 2, 2);
    AddConvBnRelu(&trunk_, "conv2", c[0], c[1]);
    AddConvBnRelu(&trunk_, "conv3", c[1], c[2]);
    trunk_.Add<nn::MaxPool2d<float>>("pool2", 2, 2);
    AddConvBnRelu(&trunk_, "conv4", c[2], c[3]);
    trunk_.Add<nn::FlattenToFrames<float>>("flatten");
    trunk_.Add<nn::Gru<float>>("bigru", c[3] * 16, e / 2, nn::GruDirection::kBidirectional);

    head_.Add<nn::Linear<float>>("fc", e, spec_.num_speakers);
    head_.Add<nn::TimeMean<float>>();
  }
  InitParams(Params(), seed);
}

SpeakerModel::Output SpeakerModel::Forward(const TensorF& logmel, Mode mode) {
  Output out;
  out.embedding = trunk_.Forward(AsImageBatch(logmel), mode);
  out.logits = head_.Forward(out.embedding, mode);
  return out;
}

void SpeakerModel::Backward(const TensorF& dlogits) { trunk_.Backward(head_.Backward(dlogits)); }

TensorF SpeakerModel::Embed(const TensorF& logmel) {
  return trunk_.Forward(AsImageBatch(logmel), Mode::kEval);
}

LayerShapes SpeakerModel::TraceTrunk(const TensorF& logmel) {
  return TraceShapes(trunk_, AsImageBatch(logmel));
}

nn::ParamList<float> SpeakerModel::Params() {
  nn::ParamList<float> ps;
  trunk_.CollectParams(&ps);
  head_.CollectParams(&ps);
  return ps;
}

}  // namespace vaed::models
