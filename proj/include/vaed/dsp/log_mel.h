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

#ifndef VAED_DSP_LOG_MEL_H_
#define VAED_DSP_LOG_MEL_H_

#include <span>
#include <vector>

#include "vaed/common/tensor.h"
#include "vaed/dsp/waveform.h"

namespace vaed::dsp {

inline constexpr int kFrameLength = 1024;  // 64 ms
inline constexpr int kFrameHop = 400;      // 25 ms
inline constexpr int kNumFrames = kClipSamples / kFrameHop;  // 400
inline constexpr int kFftSize = 1024;
inline constexpr int kNumBins = kFftSize / 2 + 1;  // 513
inline constexpr int kNumMels = 64;
inline constexpr double kMelFmin = 0.0;
inline constexpr double kMelFmax = 8000.0;
inline constexpr double kLogFloor = 1e-6;

// (kNumFrames, frame_len) matrix; frame t holds samples [t*hop, t*hop+len),
// zero past the end of the signal. No centering.
TensorF FrameSignal(const Waveform& w, int frame_len = kFrameLength,
                    int hop = kFrameHop);

double HzToMel(double hz);
double MelToHz(double mel);

// Unnormalized triangular filters (peak 1) on the HTK mel scale with edges
// equally spaced between fmin and fmax.
class MelFilterbank {
 public:
  MelFilterbank(int num_mels = kNumMels, int fft_size = kFftSize,
                int sample_rate = kSampleRate, double fmin = kMelFmin,
                double fmax = kMelFmax);

  int num_mels() const { return num_mels_; }
  int num_bins() const { return num_bins_; }
  double center_hz(int m) const { return centers_hz_[static_cast<size_t>(m)]; }
  // Dense weight of filter m at FFT bin k.
  float weight(int m, int k) const;
  // Index of the filter whose center is nearest to `hz`.
  int NearestFilter(double hz) const;

  // mel[m] = sum_k power[k] * weight(m, k)
  void Apply(std::span<const float> power, std::span<float> mel) const;

 private:
  struct Filter {
    int first_bin = 0;
    std::vector<float> weights;
  };
  int num_mels_;
  int num_bins_;
  std::vector<double> centers_hz_;
  std::vector<Filter> filters_;
};

const MelFilterbank& DefaultFilterbank();

// 400x64 natural-log mel energies, ln(energy + 1e-6).
struct LogMelFeature {
  TensorF values;  // (kNumFrames, kNumMels)
};

// Hann window -> |FFT|^2 (513 bins) -> 64 mel filters -> ln(x + 1e-6).
LogMelFeature LogMel(const Waveform& w);

// Per-mel-bin mean and population standard deviation.
struct NormStats {
  std::vector<float> mean;
  std::vector<float> std;
};

// Streaming accumulator so shards can be reduced independently and merged.
class NormStatsAccumulator {
 public:
  NormStatsAccumulator();
  void Add(const LogMelFeature& f);
  void Merge(const NormStatsAccumulator& other);
  // Throws DegenerateStatsError on an empty set or a zero-variance bin.
  NormStats Finish() const;

 private:
  // Exact two-pass results on finish are not possible from a stream, so the
  // shifted sums are kept in double.
  long long count_ = 0;
  std::vector<double> shift_;
  std::vector<double> sum_;
  std::vector<double> sum_sq_;
};

NormStats ComputeNormStats(std::span<const LogMelFeature> features);
LogMelFeature Normalize(const LogMelFeature& f, const NormStats& s);

// Stats are stored as a (2, 64) FAED array: row 0 mean, row 1 std.
TensorF NormStatsToTensor(const NormStats& s);
NormStats NormStatsFromTensor(const TensorF& t, const std::string& source);

}  // namespace vaed::dsp

#endif  // VAED_DSP_LOG_MEL_H_
