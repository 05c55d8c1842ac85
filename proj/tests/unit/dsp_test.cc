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
#include <vector>

#include "gtest/gtest.h"
#include "oracles/oracles.h"
#include "vaed/common/error.h"
#include "vaed/common/faed.h"
#include "vaed/common/random.h"
#include "vaed/dsp/log_mel.h"
#include "vaed/dsp/waveform.h"

namespace vaed::dsp {
namespace {

Waveform Tone(double hz, double amp) {
  std::vector<float> s(kClipSamples);
  for (int i = 0; i < kClipSamples; ++i) {
    s[i] = static_cast<float>(amp * std::sin(2 * M_PI * hz * i / kSampleRate));
  }
  return PrepareWaveform(s, kSampleRate);
}

Waveform Noise(uint64_t seed, double amp) {
  Rng rng(seed);
  std::vector<float> s(kClipSamples);
  for (float& v : s) v = static_cast<float>(UniformReal(rng, -amp, amp));
  return PrepareWaveform(s, kSampleRate);
}

TEST(PrepareWaveformTest, TruncatesPadsAndKeeps) {
  std::vector<float> longer(200000);
  for (size_t i = 0; i < longer.size(); ++i) longer[i] = static_cast<float>(i % 7) * 0.1f;
  Waveform a = PrepareWaveform(longer, 16000);
  ASSERT_EQ(a.samples.size(), 160000u);
  EXPECT_TRUE(std::equal(a.samples.begin(), a.samples.end(), longer.begin()));

  std::vector<float> shorter(80000, 0.25f);
  Waveform b = PrepareWaveform(shorter, 16000);
  ASSERT_EQ(b.samples.size(), 160000u);
  for (int i = 0; i < 80000; ++i) ASSERT_EQ(b.samples[i], 0.25f);
  for (int i = 80000; i < 160000; ++i) ASSERT_EQ(b.samples[i], 0.0f);

  std::vector<float> exact(160000, -0.5f);
  EXPECT_EQ(PrepareWaveform(exact, 16000).samples, exact);
}

TEST(PrepareWaveformTest, RejectsOtherRatesAndEmptyInput) {
  std::vector<float> s(1000, 0.0f);
  EXPECT_THROW(PrepareWaveform(s, 44100), UnsupportedRateError);
  EXPECT_THROW(PrepareWaveform({}, 16000), ValidationError);
}

TEST(FrameSignalTest, ZeroWaveformGivesZeroFrames) {
  Waveform w = PrepareWaveform(std::vector<float>(kClipSamples, 0.0f), kSampleRate);
  TensorF f = FrameSignal(w);
  ASSERT_EQ(f.shape(), (Shape{400, 1024}));
  for (float v : f.values()) ASSERT_EQ(v, 0.0f);
}

TEST(FrameSignalTest, ImpulseLandsWhereIndexArithmeticSays) {
  std::vector<float> s(kClipSamples, 0.0f);
  const int pos = 400;
  s[pos] = 1.0f;
  TensorF f = FrameSignal(PrepareWaveform(s, kSampleRate));
  for (int t = 0; t < 400; ++t) {
    for (int i = 0; i < 1024; ++i) {
      const bool covers = t * 400 + i == pos;
      ASSERT_EQ(f.at({t, i}), covers ? 1.0f : 0.0f) << t << "," << i;
    }
  }
  EXPECT_EQ(f.at({0, 400}), 1.0f);
  EXPECT_EQ(f.at({1, 0}), 1.0f);
}

TEST(FrameSignalTest, IsLinearAndZeroPadsTail) {
  Waveform x = Noise(1, 0.5), y = Noise(2, 0.5);
  Waveform mix = x;
  const float a = 0.75f, b = -0.5f;
  for (int i = 0; i < kClipSamples; ++i) mix.samples[i] = a * x.samples[i] + b * y.samples[i];
  TensorF fx = FrameSignal(x), fy = FrameSignal(y), fm = FrameSignal(mix);
  for (size_t i = 0; i < fm.size(); ++i) ASSERT_NEAR(fm[i], a * fx[i] + b * fy[i], 1e-6);
  // Last frame starts at 159600 and only 400 samples exist.
  for (int i = 400; i < 1024; ++i) ASSERT_EQ(fx.at({399, i}), 0.0f);
}

TEST(MelFilterbankTest, FiltersAreTriangularWithIncreasingCenters) {
  const MelFilterbank& bank = DefaultFilterbank();
  for (int m = 0; m < kNumMels; ++m) {
    int nonzero = 0;
    int k_peak = 0;
    for (int k = 0; k < kNumBins; ++k) {
      const float w = bank.weight(m, k);
      ASSERT_GE(w, 0.0f);
      if (w > 0) ++nonzero;
      if (w > bank.weight(m, k_peak)) k_peak = k;
    }
    EXPECT_GT(nonzero, 0) << m;
    for (int k = 1; k <= k_peak; ++k) ASSERT_GE(bank.weight(m, k), bank.weight(m, k - 1));
    for (int k = k_peak + 1; k < kNumBins; ++k) ASSERT_LE(bank.weight(m, k), bank.weight(m, k - 1));
    ASSERT_LE(bank.weight(m, k_peak), 1.0f);
    if (m > 0) {
      EXPECT_GT(bank.center_hz(m), bank.center_hz(m - 1));
    }
  }
}

TEST(LogMelTest, SilenceHitsTheLogFloor) {
  Waveform w = PrepareWaveform(std::vector<float>(kClipSamples, 0.0f), kSampleRate);
  LogMelFeature f = LogMel(w);
  ASSERT_EQ(f.values.shape(), (Shape{400, 64}));
  for (float v : f.values.values()) ASSERT_FLOAT_EQ(v, static_cast<float>(std::log(1e-6)));
  EXPECT_NEAR(f.values[0], -13.8155, 1e-4);
}

TEST(LogMelTest, ToneArgmaxIsTheFilterNearestOneKilohertz) {
  // Independent reconstruction of the HTK centers.
  const double top = 2595.0 * std::log10(1.0 + 8000.0 / 700.0);
  int expected = 0;
  double best = 1e9;
  for (int m = 0; m < 64; ++m) {
    const double center = 700.0 * (std::pow(10.0, top * (m + 1) / 65.0 / 2595.0) - 1.0);
    if (std::abs(center - 1000.0) < best) {
      best = std::abs(center - 1000.0);
      expected = m;
    }
  }
  LogMelFeature f = LogMel(Tone(1000.0, 0.5));
  for (int t = 1; t < 398; ++t) {
    const float* row = f.values.data() + t * 64;
    ASSERT_EQ(std::max_element(row, row + 64) - row, expected) << "frame " << t;
  }
}

TEST(LogMelTest, MatchesDirectDftOracle) {
  Waveform w = Noise(5, 0.8);
  LogMelFeature f = LogMel(w);
  const MelFilterbank& bank = DefaultFilterbank();
  for (int t : {0, 17, 399}) {
    std::vector<double> frame(1024, 0.0);
    for (int i = 0; i < 1024; ++i) {
      const int idx = t * 400 + i;
      const double hann = 0.5 - 0.5 * std::cos(2 * M_PI * i / 1024.0);
      frame[i] = idx < kClipSamples ? w.samples[idx] * hann : 0.0;
    }
    std::vector<double> power = testing::DirectPowerSpectrum(frame);
    for (int m = 0; m < 64; ++m) {
      double e = 0;
      for (int k = 0; k < 513; ++k) e += power[k] * bank.weight(m, k);
      ASSERT_NEAR(f.values.at({t, m}), std::log(e + 1e-6), 2e-4) << t << "," << m;
    }
  }
}

TEST(LogMelTest, FiniteBoundedAndDeterministic) {
  Waveform w = Noise(9, 1.0);
  w.samples[100] = 1.0f;
  w.samples[101] = -1.0f;
  LogMelFeature a = LogMel(w), b = LogMel(w);
  EXPECT_EQ(a.values, b.values);
  const float floor = static_cast<float>(std::log(1e-6));
  for (float v : a.values.values()) {
    ASSERT_TRUE(std::isfinite(v));
    ASSERT_GE(v, floor);
  }
}

LogMelFeature Ramp() {
  LogMelFeature f{TensorF({400, 64})};
  for (int t = 0; t < 400; ++t)
    for (int m = 0; m < 64; ++m) f.values.at({t, m}) = static_cast<float>(std::sin(0.1 * t + m) + 0.01 * m);
  return f;
}

TEST(NormStatsTest, MatchesTwoPassOracle) {
  LogMelFeature f = Ramp();
  for (int t = 0; t < 400; ++t) f.values.at({t, 0}) = 2.0f;
  f.values.at({123, 0}) = 4.0f;
  NormStats s = ComputeNormStats(std::span<const LogMelFeature>(&f, 1));
  for (int m = 0; m < 64; ++m) {
    double mean = 0;
    for (int t = 0; t < 400; ++t) mean += f.values.at({t, m});
    mean /= 400;
    double var = 0;
    for (int t = 0; t < 400; ++t) var += (f.values.at({t, m}) - mean) * (f.values.at({t, m}) - mean);
    var /= 400;
    EXPECT_NEAR(s.mean[m], mean, 1e-5);
    EXPECT_NEAR(s.std[m], std::sqrt(var), 1e-5);
  }
  EXPECT_NEAR(s.mean[0], 2.005, 1e-6);
  EXPECT_NEAR(s.std[0], std::sqrt(0.009975), 1e-6);
}

TEST(NormStatsTest, ConstantFeatureIsDegenerate) {
  LogMelFeature f{TensorF({400, 64}, 3.0f)};
  EXPECT_THROW(ComputeNormStats(std::span<const LogMelFeature>(&f, 1)), DegenerateStatsError);
  EXPECT_THROW(ComputeNormStats({}), DegenerateStatsError);
}

TEST(NormStatsTest, MergedShardsEqualSinglePass) {
  std::vector<LogMelFeature> set = {LogMel(Noise(1, 0.3)), LogMel(Noise(2, 0.6)), LogMel(Tone(440, 0.4))};
  NormStats whole = ComputeNormStats(set);
  NormStatsAccumulator a, b;
  a.Add(set[0]);
  b.Add(set[1]);
  b.Add(set[2]);
  a.Merge(b);
  NormStats merged = a.Finish();
  for (int m = 0; m < 64; ++m) {
    EXPECT_NEAR(merged.mean[m], whole.mean[m], 1e-5);
    EXPECT_NEAR(merged.std[m], whole.std[m], 1e-5);
  }
}

TEST(NormalizeTest, ArithmeticAndIdempotence) {
  NormStats s{std::vector<float>(64, 1.0f), std::vector<float>(64, 2.0f)};
  LogMelFeature f{TensorF({400, 64}, 3.0f)};
  for (float v : Normalize(f, s).values.values()) ASSERT_FLOAT_EQ(v, 1.0f);

  LogMelFeature mean_bc{TensorF({400, 64}, 1.0f)};
  for (float v : Normalize(mean_bc, s).values.values()) ASSERT_EQ(v, 0.0f);

  NormStats unit{std::vector<float>(64, 0.0f), std::vector<float>(64, 1.0f)};
  LogMelFeature r = Ramp();
  EXPECT_EQ(Normalize(r, unit).values, r.values);

  std::vector<LogMelFeature> set = {LogMel(Noise(3, 0.5)), LogMel(Tone(700, 0.3))};
  NormStats st = ComputeNormStats(set);
  std::vector<LogMelFeature> normed = {Normalize(set[0], st), Normalize(set[1], st)};
  NormStats again = ComputeNormStats(normed);
  for (int m = 0; m < 64; ++m) {
    EXPECT_LT(std::abs(again.mean[m]), 1e-5);
    EXPECT_LT(std::abs(again.std[m] - 1.0f), 1e-5);
  }
}

TEST(FaedTest, StatsRoundTripAndCorruptHeaderNamesFile) {
  NormStats s{std::vector<float>(64, 0.5f), std::vector<float>(64, 1.5f)};
  TensorF t = NormStatsToTensor(s);
  std::string bytes = EncodeFaed(t.shape(), t.values());
  ASSERT_EQ(bytes.substr(0, 4), "FAED");
  FaedArray back = DecodeFaed(bytes, "stats.faed");
  EXPECT_EQ(back.dims, (std::vector<int>{2, 64}));
  NormStats s2 = NormStatsFromTensor(TensorF(back.dims, back.values), "stats.faed");
  EXPECT_EQ(s2.mean, s.mean);
  EXPECT_EQ(s2.std, s.std);

  std::string bad = bytes;
  bad[0] = 'X';
  try {
    DecodeFaed(bad, "features/clip7.faed");
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("features/clip7.faed"), std::string::npos);
  }
  EXPECT_THROW(DecodeFaed(bytes.substr(0, bytes.size() - 3), "x"), FormatError);
}

TEST(WavTest, RoundTripsSixteenBitPcm) {
  std::vector<float> s = {0.0f, 0.5f, -0.5f, 1.0f, -1.0f, 0.25f};
  WavData d = DecodeWav(EncodeWav(s, 16000), "mem");
  EXPECT_EQ(d.sample_rate, 16000);
  ASSERT_EQ(d.samples.size(), s.size());
  EXPECT_FLOAT_EQ(d.samples[1], 0.5f);
  EXPECT_FLOAT_EQ(d.samples[2], -0.5f);
  EXPECT_FLOAT_EQ(d.samples[3], 32767.0f / 32768.0f);
  EXPECT_FLOAT_EQ(d.samples[4], -1.0f);
  EXPECT_THROW(DecodeWav("RIFFxxxxWAVX", "bad.wav"), FormatError);
}

}  // namespace
}  // namespace vaed::dsp
