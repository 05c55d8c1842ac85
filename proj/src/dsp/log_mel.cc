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

#include "vaed/dsp/log_mel.h"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

#include "vaed/common/error.h"

namespace vaed::dsp {

TensorF FrameSignal(const Waveform& w, int frame_len, int hop) {
  if (w.samples.size() != static_cast<size_t>(kClipSamples)) {
    throw DimensionError("FrameSignal expects a prepared 160000-sample waveform");
  }
  const int num_frames = kClipSamples / hop;
  TensorF frames({num_frames, frame_len});
  const size_t n = w.samples.size();
  for (int t = 0; t < num_frames; ++t) {
    size_t start = static_cast<size_t>(t) * static_cast<size_t>(hop);
    size_t len = std::min<size_t>(static_cast<size_t>(frame_len), n - start);
    std::copy_n(w.samples.begin() + static_cast<std::ptrdiff_t>(start), len,
                frames.data() + static_cast<size_t>(t) * frame_len);
  }
  return frames;
}

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double MelToHz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

MelFilterbank::MelFilterbank(int num_mels, int fft_size, int sample_rate,
                             double fmin, double fmax)
    : num_mels_(num_mels), num_bins_(fft_size / 2 + 1) {
  const double mel_lo = HzToMel(fmin);
  const double mel_hi = HzToMel(fmax);
  std::vector<double> edges(static_cast<size_t>(num_mels + 2));
  for (int i = 0; i < num_mels + 2; ++i) {
    edges[static_cast<size_t>(i)] =
        MelToHz(mel_lo + (mel_hi - mel_lo) * i / (num_mels + 1));
  }
  const double bin_hz = static_cast<double>(sample_rate) / fft_size;
  filters_.resize(static_cast<size_t>(num_mels));
  centers_hz_.resize(static_cast<size_t>(num_mels));
  for (int m = 0; m < num_mels; ++m) {
    const double lo = edges[static_cast<size_t>(m)];
    const double mid = edges[static_cast<size_t>(m) + 1];
    const double hi = edges[static_cast<size_t>(m) + 2];
    centers_hz_[static_cast<size_t>(m)] = mid;
    Filter& f = filters_[static_cast<size_t>(m)];
    f.first_bin = -1;
    for (int k = 0; k < num_bins_; ++k) {
      const double hz = k * bin_hz;
      double wt = 0.0;
      if (hz > lo && hz < hi) {
        wt = hz <= mid ? (hz - lo) / (mid - lo) : (hi - hz) / (hi - mid);
      }
      if (wt > 0.0) {
        if (f.first_bin < 0) f.first_bin = k;
        f.weights.resize(static_cast<size_t>(k - f.first_bin + 1), 0.0f);
        f.weights.back() = static_cast<float>(wt);
      }
    }
    if (f.first_bin < 0) {
      throw DimensionError("mel filter " + std::to_string(m) +
                           " has no FFT bin inside its support");
    }
  }
}

float MelFilterbank::weight(int m, int k) const {
  const Filter& f = filters_[static_cast<size_t>(m)];
  int off = k - f.first_bin;
  if (off < 0 || off >= static_cast<int>(f.weights.size())) return 0.0f;
  return f.weights[static_cast<size_t>(off)];
}

int MelFilterbank::NearestFilter(double hz) const {
  int best = 0;
  for (int m = 1; m < num_mels_; ++m) {
    if (std::abs(centers_hz_[static_cast<size_t>(m)] - hz) <
        std::abs(centers_hz_[static_cast<size_t>(best)] - hz)) {
      best = m;
    }
  }
  return best;
}

void MelFilterbank::Apply(std::span<const float> power, std::span<float> mel) const {
  for (int m = 0; m < num_mels_; ++m) {
    const Filter& f = filters_[static_cast<size_t>(m)];
    double acc = 0.0;
    for (size_t j = 0; j < f.weights.size(); ++j) {
      acc += static_cast<double>(power[static_cast<size_t>(f.first_bin) + j]) * f.weights[j];
    }
    mel[static_cast<size_t>(m)] = static_cast<float>(acc);
  }
}

const MelFilterbank& DefaultFilterbank() {
  static const MelFilterbank bank;
  return bank;
}

namespace {

// The planner is not thread-safe; execution on new arrays is.
class RealFft {
 public:
  static const RealFft& Get() {
    static const RealFft fft;
    return fft;
  }
  void Forward(float* in, fftwf_complex* out) const {
    fftwf_execute_dft_r2c(plan_, in, out);
  }

 private:
  RealFft() {
    float* in = fftwf_alloc_real(kFftSize);
    fftwf_complex* out = fftwf_alloc_complex(kNumBins);
    plan_ = fftwf_plan_dft_r2c_1d(kFftSize, in, out, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftwf_free(in);
    fftwf_free(out);
  }
  fftwf_plan plan_;
};

const std::vector<float>& HannWindow() {
  // Periodic Hann.
  static const std::vector<float> window = [] {
    std::vector<float> w(kFrameLength);
    for (int n = 0; n < kFrameLength; ++n) {
      w[static_cast<size_t>(n)] =
          static_cast<float>(0.5 - 0.5 * std::cos(2.0 * M_PI * n / kFrameLength));
    }
    return w;
  }();
  return window;
}

}  // namespace

LogMelFeature LogMel(const Waveform& w) {
  TensorF frames = FrameSignal(w);
  const RealFft& fft = RealFft::Get();
  const MelFilterbank& bank = DefaultFilterbank();
  const std::vector<float>& window = HannWindow();

  LogMelFeature out{TensorF({kNumFrames, kNumMels})};
  std::vector<float> buf(kFftSize);
  std::vector<fftwf_complex> spec(kNumBins);
  std::vector<float> power(kNumBins);
  std::vector<float> mel(kNumMels);
  for (int t = 0; t < kNumFrames; ++t) {
    const float* frame = frames.data() + static_cast<size_t>(t) * kFrameLength;
    for (int n = 0; n < kFftSize; ++n) buf[static_cast<size_t>(n)] = frame[n] * window[static_cast<size_t>(n)];
    fft.Forward(buf.data(), spec.data());
    for (int k = 0; k < kNumBins; ++k) {
      const float re = spec[static_cast<size_t>(k)][0];
      const float im = spec[static_cast<size_t>(k)][1];
      power[static_cast<size_t>(k)] = re * re + im * im;
    }
    bank.Apply(power, mel);
    float* row = out.values.data() + static_cast<size_t>(t) * kNumMels;
    for (int m = 0; m < kNumMels; ++m) {
      row[m] = static_cast<float>(std::log(static_cast<double>(mel[static_cast<size_t>(m)]) + kLogFloor));
    }
  }
  return out;
}

NormStatsAccumulator::NormStatsAccumulator()
    : shift_(kNumMels, 0.0), sum_(kNumMels, 0.0), sum_sq_(kNumMels, 0.0) {}

void NormStatsAccumulator::Add(const LogMelFeature& f) {
  ExpectShape(f.values.shape(), {kNumFrames, kNumMels}, "NormStatsAccumulator::Add");
  if (count_ == 0) {
    for (int m = 0; m < kNumMels; ++m) shift_[static_cast<size_t>(m)] = f.values[static_cast<size_t>(m)];
  }
  for (int t = 0; t < kNumFrames; ++t) {
    for (int m = 0; m < kNumMels; ++m) {
      const double d = f.values[static_cast<size_t>(t) * kNumMels + m] - shift_[static_cast<size_t>(m)];
      sum_[static_cast<size_t>(m)] += d;
      sum_sq_[static_cast<size_t>(m)] += d * d;
    }
  }
  count_ += kNumFrames;
}

void NormStatsAccumulator::Merge(const NormStatsAccumulator& other) {
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  for (int m = 0; m < kNumMels; ++m) {
    const size_t i = static_cast<size_t>(m);
    // Re-express the other shard's sums around this shard's shift.
    const double delta = other.shift_[i] - shift_[i];
    const double n = static_cast<double>(other.count_);
    sum_sq_[i] += other.sum_sq_[i] + 2.0 * delta * other.sum_[i] + n * delta * delta;
    sum_[i] += other.sum_[i] + n * delta;
  }
  count_ += other.count_;
}

NormStats NormStatsAccumulator::Finish() const {
  if (count_ == 0) throw DegenerateStatsError("no features to compute statistics from");
  NormStats s;
  s.mean.resize(kNumMels);
  s.std.resize(kNumMels);
  const double n = static_cast<double>(count_);
  for (int m = 0; m < kNumMels; ++m) {
    const size_t i = static_cast<size_t>(m);
    const double mean_shifted = sum_[i] / n;
    const double var = std::max(0.0, sum_sq_[i] / n - mean_shifted * mean_shifted);
    if (!(var > 0.0)) {
      throw DegenerateStatsError("mel bin " + std::to_string(m) +
                                 " has zero variance over the training set");
    }
    s.mean[i] = static_cast<float>(shift_[i] + mean_shifted);
    s.std[i] = static_cast<float>(std::sqrt(var));
  }
  return s;
}

NormStats ComputeNormStats(std::span<const LogMelFeature> features) {
  NormStatsAccumulator acc;
  for (const LogMelFeature& f : features) acc.Add(f);
  return acc.Finish();
}

LogMelFeature Normalize(const LogMelFeature& f, const NormStats& s) {
  ExpectShape(f.values.shape(), {kNumFrames, kNumMels}, "Normalize");
  LogMelFeature out{TensorF({kNumFrames, kNumMels})};
  for (int t = 0; t < kNumFrames; ++t) {
    for (int m = 0; m < kNumMels; ++m) {
      const size_t idx = static_cast<size_t>(t) * kNumMels + m;
      out.values[idx] = (f.values[idx] - s.mean[static_cast<size_t>(m)]) / s.std[static_cast<size_t>(m)];
    }
  }
  return out;
}

TensorF NormStatsToTensor(const NormStats& s) {
  TensorF t({2, kNumMels});
  std::copy(s.mean.begin(), s.mean.end(), t.data());
  std::copy(s.std.begin(), s.std.end(), t.data() + kNumMels);
  return t;
}

NormStats NormStatsFromTensor(const TensorF& t, const std::string& source) {
  if (t.shape() != Shape{2, kNumMels}) {
    throw FormatError(source + ": normalization stats must have shape (2, 64), got " +
                      ShapeToString(t.shape()));
  }
  NormStats s;
  s.mean.assign(t.data(), t.data() + kNumMels);
  s.std.assign(t.data() + kNumMels, t.data() + 2 * kNumMels);
  for (float v : s.std) {
    if (!(v > 0.0f)) throw FormatError(source + ": non-positive standard deviation");
  }
  return s;
}

}  // namespace vaed::dsp
