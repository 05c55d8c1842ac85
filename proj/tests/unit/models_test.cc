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

#include <cmath>
#include <filesystem>

#include "gtest/gtest.h"
#include "vaed/common/error.h"
#include "vaed/common/faed.h"
#include "vaed/common/random.h"
#include "vaed/models/aed_model.h"
#include "vaed/models/checkpoint.h"
#include "vaed/models/speaker_model.h"
#include "vaed/nn/loss.h"

namespace vaed::models {
namespace {

TensorF RandomBatch(Shape s, uint64_t seed) {
  Rng rng(seed);
  TensorF t(std::move(s));
  for (float& v : t.storage()) v = static_cast<float>(StandardNormal(rng));
  return t;
}

void ZeroAll(const nn::ParamList<float>& ps) {
  for (auto* p : ps)
    if (p->trainable) p->value.SetZero();
}

Shape FindShape(const LayerShapes& trace, const std::string& name) {
  for (const auto& [n, s] : trace)
    if (n == name) return s;
  ADD_FAILURE() << "no layer " << name;
  return {};
}

TEST(SpeakerModelTest, Arch1FullScaleShapeTrace) {
  SpeakerModel m(SpeakerSpec::Full(VoiceArch::kArch1), 1);
  TensorF x({1, 400, 64});
  LayerShapes trace = m.TraceTrunk(x);
  EXPECT_EQ(FindShape(trace, "pool1"), (Shape{1, 96, 200, 32}));
  EXPECT_EQ(FindShape(trace, "pool2"), (Shape{1, 256, 100, 16}));
  EXPECT_EQ(FindShape(trace, "pool3"), (Shape{1, 256, 100, 8}));
  EXPECT_EQ(FindShape(trace, "conv6"), (Shape{1, 1024, 100, 1}));
  EXPECT_EQ(trace.back().second, (Shape{1, 100, 1024}));
  SpeakerModel::Output out = m.Forward(x, Mode::kEval);
  EXPECT_EQ(out.embedding.shape(), (Shape{1, 100, 1024}));
  EXPECT_EQ(out.logits.shape(), (Shape{1, 1211}));
}

TEST(SpeakerModelTest, Arch2FullScaleShapesAndZeroWeightLoss) {
  SpeakerModel m(SpeakerSpec::Full(VoiceArch::kArch2), 1);
  TensorF x = RandomBatch({1, 400, 64}, 2);
  LayerShapes trace = m.TraceTrunk(x);
  EXPECT_EQ(FindShape(trace, "conv4"), (Shape{1, 64, 100, 16}));
  EXPECT_EQ(FindShape(trace, "flatten"), (Shape{1, 100, 1024}));
  EXPECT_EQ(FindShape(trace, "bigru"), (Shape{1, 100, 1024}));
  ZeroAll(m.Params());
  SpeakerModel::Output out = m.Forward(x, Mode::kEval);
  EXPECT_EQ(out.logits.shape(), (Shape{1, 1211}));
  std::vector<int> label = {5};
  EXPECT_NEAR(nn::CrossEntropy<float>(out.logits, label, nullptr), std::log(1211.0), 1e-4);
}

TEST(SpeakerModelTest, RejectsWrongInputShape) {
  SpeakerModel m(SpeakerSpec::Desk(VoiceArch::kArch1), 1);
  EXPECT_THROW(m.Forward(TensorF({1, 400, 63}), Mode::kEval), ModelSpecError);
  EXPECT_THROW(m.Forward(TensorF({1, 300, 64}), Mode::kEval), ModelSpecError);
}

TEST(SpeakerModelTest, DeskModelsTapEmbeddings) {
  for (VoiceArch arch : {VoiceArch::kArch1, VoiceArch::kArch2}) {
    SpeakerModel m(SpeakerSpec::Desk(arch, 24), 3);
    TensorF x = RandomBatch({2, 400, 64}, 4);
    SpeakerModel::Output out = m.Forward(x, Mode::kTrain);
    EXPECT_EQ(out.embedding.shape(), (Shape{2, 100, 128}));
    EXPECT_EQ(out.logits.shape(), (Shape{2, 24}));
    EXPECT_TRUE(out.logits.AllFinite());
    EXPECT_EQ(m.Embed(x).shape(), (Shape{2, 100, 128}));
  }
}

TEST(AedModelTest, FullScaleCnnDualShapes) {
  AedModel m(AedSpec::Full(BranchMode::kDual, AudioBranch::kCnn), 1);
  TensorF x = RandomBatch({1, 400, 64}, 5);
  TensorF e = RandomBatch({1, 100, 1024}, 6);
  LayerShapes audio = m.TraceAudio(x);
  EXPECT_EQ(FindShape(audio, "audio.pool1"), (Shape{1, 64, 200, 32}));
  EXPECT_EQ(FindShape(audio, "audio.pool2"), (Shape{1, 128, 100, 16}));
  EXPECT_EQ(FindShape(audio, "audio.flatten"), (Shape{1, 100, 4096}));
  EXPECT_EQ(audio.back().second, (Shape{1, 100, 768}));
  EXPECT_EQ(m.TraceVoice(e).back().second, (Shape{1, 100, 64}));
  AedModel::Output out = m.Forward(x, &e, Mode::kEval);
  EXPECT_EQ(m.fused().shape(), (Shape{1, 100, 832}));
  EXPECT_EQ(out.frame_probs.shape(), (Shape{1, 100, 527}));
  EXPECT_EQ(out.clip_probs.shape(), (Shape{1, 527}));
  for (float p : out.clip_probs.values()) {
    ASSERT_GE(p, 0.0f);
    ASSERT_LE(p, 1.0f);
  }
}

TEST(AedModelTest, FullScaleBaselineCnnTrace) {
  AedModel m(AedSpec::Full(BranchMode::kAudioOnly, AudioBranch::kCnn), 1);
  TensorF x = RandomBatch({1, 400, 64}, 7);
  LayerShapes audio = m.TraceAudio(x);
  EXPECT_EQ(FindShape(audio, "audio.pool4"), (Shape{1, 256, 100, 8}));
  EXPECT_EQ(FindShape(audio, "audio.flatten"), (Shape{1, 100, 2048}));
  EXPECT_EQ(FindShape(audio, "audio.fc1"), (Shape{1, 100, 2048}));
  EXPECT_EQ(FindShape(audio, "audio.fc2"), (Shape{1, 100, 1024}));
  EXPECT_EQ(m.Forward(x, nullptr, Mode::kEval).clip_probs.shape(), (Shape{1, 527}));
}

TEST(AedModelTest, FullScaleRecurrentBranchShapeAndZeroFixedPoint) {
  AedModel m(AedSpec::Full(BranchMode::kAudioOnly, AudioBranch::kRecurrent), 1);
  TensorF x = RandomBatch({1, 400, 64}, 8);
  LayerShapes audio = m.TraceAudio(x);
  EXPECT_EQ(FindShape(audio, "audio.pool2"), (Shape{1, 64, 100, 16}));
  EXPECT_EQ(audio.back().second, (Shape{1, 100, 768}));
  ZeroAll(m.AudioParams());
  m.Forward(x, nullptr, Mode::kEval);
  for (float v : m.fused().values()) ASSERT_EQ(v, 0.0f);
}

TEST(AedModelTest, VoiceBranchParameterCountMatchesLayerShapes) {
  AedModel m(AedSpec::Full(BranchMode::kDual, AudioBranch::kCnn), 1);
  // conv1d weights + biases, BN scale/shift, GRU input/recurrent matrices and biases.
  const size_t conv = (1024 * 256 * 3 + 256) + (256 * 64 * 3 + 64);
  const size_t bn = 2 * 256 + 2 * 64;
  const size_t gru = 3 * (64 * 64 + 64 * 64 + 64);
  EXPECT_EQ(CountTrainable(m.VoiceParams()), conv + bn + gru);
  EXPECT_LT(CountTrainable(m.VoiceParams()), 1000000u);
  EXPECT_NEAR(static_cast<double>(conv + gru), 0.86e6, 0.01e6);
}

TEST(AedModelTest, ZeroEmbeddingAndZeroGruGiveZeroVoiceOutput) {
  AedModel m(AedSpec::Desk(BranchMode::kDual, AudioBranch::kCnn, 12, 128), 1);
  for (auto* p : m.VoiceParams())
    if (p->name.find("gru") != std::string::npos) p->value.SetZero();
  TensorF e({2, 100, 128});
  m.Forward(RandomBatch({2, 400, 64}, 9), &e, Mode::kEval);
  const TensorF& fused = m.fused();
  const int a = m.spec().audio_output_width();
  for (int b = 0; b < 2; ++b)
    for (int t = 0; t < 100; ++t)
      for (int v = a; v < fused.dim(2); ++v) ASSERT_EQ(fused.at({b, t, v}), 0.0f);
}

TEST(AedModelTest, FusionRequiresMatchingEmbeddings) {
  AedModel m(AedSpec::Desk(BranchMode::kDual, AudioBranch::kCnn, 12, 128), 1);
  TensorF x = RandomBatch({2, 400, 64}, 10);
  EXPECT_THROW(m.Forward(x, nullptr, Mode::kEval), FusionError);
  TensorF wrong_width({2, 100, 64});
  EXPECT_THROW(m.Forward(x, &wrong_width, Mode::kEval), DimensionError);
  TensorF wrong_batch({3, 100, 128});
  EXPECT_THROW(m.Forward(x, &wrong_batch, Mode::kEval), DimensionError);
}

TEST(AedModelTest, FusedWidthIsSumOfBranches) {
  for (AudioBranch b : {AudioBranch::kCnn, AudioBranch::kRecurrent}) {
    AedSpec s = AedSpec::Full(BranchMode::kDual, b);
    EXPECT_EQ(s.fused_width(), 832);
    AedSpec d = AedSpec::Desk(BranchMode::kDual, b, 12, 128);
    EXPECT_EQ(d.fused_width(), d.audio_width + d.voice_width);
  }
}

TEST(AedModelTest, GradientReachesBothBranches) {
  AedModel m(AedSpec::Desk(BranchMode::kDual, AudioBranch::kCnn, 12, 128), 11);
  TensorF x = RandomBatch({3, 400, 64}, 12);
  TensorF e = RandomBatch({3, 100, 128}, 13);
  TensorF target({3, 12});
  target.at({0, 1}) = target.at({1, 4}) = target.at({2, 7}) = 1.0f;
  nn::ZeroGrads(m.Params());
  AedModel::Output out = m.Forward(x, &e, Mode::kTrain);
  TensorF grad;
  nn::BinaryCrossEntropy(out.clip_probs, target, &grad);
  m.Backward(grad);
  auto norm = [](const nn::ParamList<float>& ps) {
    double s = 0;
    for (auto* p : ps)
      if (p->trainable)
        for (float g : p->grad.values()) s += static_cast<double>(g) * g;
    return std::sqrt(s);
  };
  EXPECT_GT(norm(m.AudioParams()), 0.0);
  EXPECT_GT(norm(m.VoiceParams()), 0.0);
  EXPECT_GT(norm(m.HeadParams()), 0.0);
}

TEST(InitTest, DeterministicZeroBiasesAndHeVariance) {
  AedSpec spec = AedSpec::Full(BranchMode::kDual, AudioBranch::kCnn, 10);
  AedModel a(spec, 42), b(spec, 42), c(spec, 43);
  auto pa = a.Params(), pb = b.Params(), pc = c.Params();
  ASSERT_EQ(pa.size(), pb.size());
  bool any_diff = false;
  for (size_t i = 0; i < pa.size(); ++i) {
    ASSERT_EQ(pa[i]->value, pb[i]->value) << pa[i]->name;
    if (!(pa[i]->value == pc[i]->value)) any_diff = true;
    const std::string& n = pa[i]->name;
    if (n.size() > 5 && n.compare(n.size() - 5, 5, ".bias") == 0) {
      for (float v : pa[i]->value.values()) ASSERT_EQ(v, 0.0f) << n;
    }
    if (n == "audio.proj.weight") {
      const int fan_in = pa[i]->value.dim(0);
      ASSERT_GE(fan_in, 512);
      double s = 0;
      for (float v : pa[i]->value.values()) s += static_cast<double>(v) * v;
      const double var = s / static_cast<double>(pa[i]->value.size());
      EXPECT_NEAR(var / (2.0 / fan_in), 1.0, 0.2);
    }
  }
  EXPECT_TRUE(any_diff);
}

TEST(InitTest, GruMatricesWithinInverseSqrtHidden) {
  AedModel m(AedSpec::Full(BranchMode::kDual, AudioBranch::kCnn), 7);
  for (auto* p : m.VoiceParams()) {
    if (p->name.find("weight_hh") == std::string::npos) continue;
    float mx = 0;
    for (float v : p->value.values()) mx = std::max(mx, std::abs(v));
    EXPECT_LE(mx, 1.0f / 8.0f);
    EXPECT_GT(mx, 0.9f / 8.0f);
  }
}

TEST(AedModelTest, ForwardIsDeterministic) {
  AedSpec spec = AedSpec::Desk(BranchMode::kDual, AudioBranch::kRecurrent, 12, 128);
  AedModel a(spec, 5), b(spec, 5);
  TensorF x = RandomBatch({2, 400, 64}, 14), e = RandomBatch({2, 100, 128}, 15);
  EXPECT_EQ(a.Forward(x, &e, Mode::kEval).clip_probs, b.Forward(x, &e, Mode::kEval).clip_probs);
}

TEST(ModelSpecTest, JsonRoundTripAndValidation) {
  AedSpec s = AedSpec::Desk(BranchMode::kAudioOnly, AudioBranch::kRecurrent, 9, 128);
  AedSpec r = AedSpec::FromJson(s.ToJson());
  EXPECT_EQ(r.Fingerprint(), s.Fingerprint());
  EXPECT_NE(s.Fingerprint(), AedSpec::Desk(BranchMode::kDual, AudioBranch::kRecurrent, 9, 128).Fingerprint());
  SpeakerSpec sp = SpeakerSpec::Desk(VoiceArch::kArch2);
  EXPECT_EQ(SpeakerSpec::FromJson(sp.ToJson()).Fingerprint(), sp.Fingerprint());
  sp.channels.pop_back();
  EXPECT_THROW(sp.Validate(), ModelSpecError);
  EXPECT_THROW(ParseVoiceArch("arch3"), ValidationError);
}

class CheckpointTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() / ("vaed_ckpt_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::filesystem::path dir_;
};

TEST_F(CheckpointTest, RoundTripRestoresParamsAndOptimizer) {
  SpeakerSpec spec = SpeakerSpec::Desk(VoiceArch::kArch1, 6);
  SpeakerModel a(spec, 1), b(spec, 2);
  auto pa = a.Params();
  nn::Adam<float> adam(pa);
  for (auto* p : pa)
    if (p->trainable) p->grad.Fill(0.5f);
  adam.Step(1e-3);
  Checkpoint ck = CaptureCheckpoint(pa, &adam);
  ck.meta["fingerprint"] = spec.Fingerprint();
  ck.meta["epoch"] = 3;
  SaveCheckpoint(dir_ / "a.ckpt", ck);

  Checkpoint loaded = LoadCheckpoint(dir_ / "a.ckpt");
  EXPECT_EQ(loaded.meta["epoch"], 3);
  auto pb = b.Params();
  RestoreParams(loaded, spec.Fingerprint(), pb);
  for (size_t i = 0; i < pa.size(); ++i) ASSERT_EQ(pa[i]->value, pb[i]->value);
  nn::Adam<float> adam_b(pb);
  RestoreOptimizer(loaded, &adam_b);
  EXPECT_EQ(adam_b.step(), 1);
  EXPECT_EQ(adam_b.first_moments()[0], adam.first_moments()[0]);
  EXPECT_EQ(EncodeCheckpoint(loaded), EncodeCheckpoint(ck));
}

TEST_F(CheckpointTest, MismatchesAreRejected) {
  SpeakerSpec spec = SpeakerSpec::Desk(VoiceArch::kArch1, 6);
  SpeakerModel a(spec, 1);
  Checkpoint ck = CaptureCheckpoint(a.Params());
  ck.meta["fingerprint"] = spec.Fingerprint();
  SpeakerModel other(SpeakerSpec::Desk(VoiceArch::kArch1, 7), 1);
  auto po = other.Params();
  EXPECT_THROW(RestoreParams(ck, spec.Fingerprint(), po), ModelSpecError);
  EXPECT_THROW(RestoreParams(ck, "0000", a.Params()), ModelSpecError);
}

TEST_F(CheckpointTest, CorruptFileNamesThePath) {
  WriteFileBytes(dir_ / "bad.ckpt", "CKPX\1\0\0\0");
  try {
    LoadCheckpoint(dir_ / "bad.ckpt");
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("bad.ckpt"), std::string::npos);
  }
  SpeakerModel a(SpeakerSpec::Desk(VoiceArch::kArch2, 3), 1);
  std::string bytes = EncodeCheckpoint(CaptureCheckpoint(a.Params()));
  bytes.resize(bytes.size() - 7);
  EXPECT_THROW(DecodeCheckpoint(bytes, "trunc.ckpt"), FormatError);
}

}  // namespace
}  // namespace vaed::models
