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

#include "vaed/data/synth.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "vaed/common/error.h"

namespace vaed::data {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSr = dsp::kSampleRate;
constexpr double kMaxHarmonicHz = 7000.0;
constexpr double kUtterancePeak = 0.7;

size_t Samples(double seconds) { return static_cast<size_t>(std::lround(seconds * kSr)); }

void PeakNormalize(std::vector<float>* x, double peak) {
  float m = 0;
  for (float v : *x) m = std::max(m, std::abs(v));
  if (m == 0) return;
  const float g = static_cast<float>(peak / m);
  for (float& v : *x) v *= g;
}

// Raised-cosine fade in/out over `ramp` samples at each end.
void ApplyRamps(float* x, size_t n, size_t ramp) {
  ramp = std::min(ramp, n / 2);
  for (size_t i = 0; i < ramp; ++i) {
    const float g = static_cast<float>(0.5 - 0.5 * std::cos(std::numbers::pi * i / ramp));
    x[i] *= g;
    x[n - 1 - i] *= g;
  }
}

double FormantGain(double hz, const std::vector<double>& formants) {
  double g = 0.05;
  for (double f : formants) {
    const double bw = 80.0 + 0.08 * f;
    const double d = (hz - f) / bw;
    g += 1.0 / (1.0 + d * d);
  }
  return g;
}

// RBJ band-pass biquad (constant 0 dB peak gain).
class BandPass {
 public:
  BandPass(double center, double q) {
    const double w = kTwoPi * center / kSr;
    const double alpha = std::sin(w) / (2 * q);
    const double a0 = 1 + alpha;
    b0_ = alpha / a0;
    b2_ = -alpha / a0;
    a1_ = -2 * std::cos(w) / a0;
    a2_ = (1 - alpha) / a0;
  }
  void Run(std::vector<float>* x) {
    double x1 = 0, x2 = 0, y1 = 0, y2 = 0;
    for (float& v : *x) {
      const double y = b0_ * v + b2_ * x2 - a1_ * y1 - a2_ * y2;
      x2 = x1;
      x1 = v;
      y2 = y1;
      y1 = y;
      v = static_cast<float>(y);
    }
  }

 private:
  double b0_, b2_, a1_, a2_;
};

std::vector<float> Tone(double hz, size_t n) {
  std::vector<float> x(n);
  for (size_t i = 0; i < n; ++i) x[i] = static_cast<float>(std::sin(kTwoPi * hz * i / kSr));
  return x;
}

std::vector<float> Chirp(double f0, double f1, size_t n) {
  std::vector<float> x(n);
  const double dur = n / kSr, k = std::log(f1 / f0);
  for (size_t i = 0; i < n; ++i) {
    const double t = i / kSr;
    x[i] = static_cast<float>(std::sin(kTwoPi * f0 * dur / k * (std::exp(t * k / dur) - 1)));
  }
  return x;
}

std::vector<float> NoiseBand(double lo, double hi, size_t n, Rng& rng) {
  std::vector<float> x(n);
  for (float& v : x) v = static_cast<float>(StandardNormal(rng));
  const double center = std::sqrt(lo * hi);
  for (int pass = 0; pass < 2; ++pass) BandPass(center, center / (hi - lo)).Run(&x);
  return x;
}

// Each click is a damped 2.5 kHz resonance, so its energy stands clear of the
// broadband background within a band.
std::vector<float> Clicks(double rate, size_t n, Rng& rng) {
  std::vector<float> x(n, 0.0f);
  const size_t period = Samples(1.0 / rate);
  const size_t click = Samples(0.012);
  const double decay = 0.002 * kSr;
  for (size_t start = static_cast<size_t>(UniformInt(rng, 0, static_cast<int64_t>(period) - 1));
       start < n; start += period) {
    const double phase = UniformReal(rng, 0.0, kTwoPi);
    for (size_t i = 0; i < click && start + i < n; ++i) {
      x[start + i] = static_cast<float>(std::exp(-static_cast<double>(i) / decay) *
                                        std::sin(kTwoPi * 2500.0 * i / kSr + phase));
    }
  }
  return x;
}

std::vector<float> Chord(const std::vector<double>& params, size_t n) {
  std::vector<float> x(n, 0.0f);
  const double base = params[0];
  for (size_t p = 0; p < params.size(); ++p) {
    const double hz = p == 0 ? base : base * params[p];
    for (size_t i = 0; i < n; ++i) x[i] += static_cast<float>(std::sin(kTwoPi * hz * i / kSr));
  }
  return x;
}

// Harmonic stack at a slowly gliding fundamental; sin(k phi) for all k from
// the Chebyshev recurrence s_k = 2 cos(phi) s_{k-1} - s_{k-2}.
void VoicedSegment(const SpeakerProfile& p, float* out, size_t n, Rng& rng) {
  const double f_start = p.f0_base * (1 + p.f0_jitter * UniformReal(rng, -1, 1));
  const double f_end = f_start * (1 + UniformReal(rng, -0.04, 0.04));
  const double level = UniformReal(rng, 0.6, 1.0);
  const double vowel = UniformReal(rng, 0.93, 1.07);
  std::vector<double> formants = p.formant_centers;
  for (double& f : formants) f *= vowel;
  const double vib_rate = UniformReal(rng, 4.0, 6.0), vib_depth = 0.004;
  const int max_k = static_cast<int>(kMaxHarmonicHz / std::min(f_start, f_end));
  std::vector<double> amp(static_cast<size_t>(max_k) + 1, 0.0);
  double phase = UniformReal(rng, 0, kTwoPi);
  constexpr size_t kBlock = 64;
  for (size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / n;
    const double f0 = (f_start + (f_end - f_start) * t) *
                      (1 + vib_depth * std::sin(kTwoPi * vib_rate * i / kSr));
    if (i % kBlock == 0) {
      for (int k = 1; k <= max_k; ++k) {
        const double hz = k * f0;
        amp[k] = hz < kMaxHarmonicHz ? std::pow(k, -p.harmonic_rolloff) * FormantGain(hz, formants) : 0.0;
      }
    }
    phase += kTwoPi * f0 / kSr;
    if (phase > kTwoPi) phase -= kTwoPi;
    const double s1 = std::sin(phase), c2 = 2 * std::cos(phase);
    double prev = 0, cur = s1, acc = amp[1] * s1;
    for (int k = 2; k <= max_k; ++k) {
      const double next = c2 * cur - prev;
      prev = cur;
      cur = next;
      acc += amp[k] * cur;
    }
    out[i] = static_cast<float>(level * acc);
  }
  ApplyRamps(out, n, Samples(0.015));
}

}  // namespace

void SpeakerProfile::Validate() const {
  if (!(f0_base >= 85 && f0_base <= 300)) {
    throw ValidationError("speaker " + std::to_string(speaker_id) + " f0 outside [85, 300] Hz");
  }
  if (formant_centers.size() < 2 || formant_centers.size() > 3) {
    throw ValidationError("speaker profile needs 2-3 formants");
  }
  for (double f : formant_centers) {
    if (!(f > 300 && f < 3500)) throw ValidationError("formant outside (300, 3500) Hz");
  }
}

nlohmann::json SpeakerProfile::ToJson() const {
  return {{"speaker_id", speaker_id},       {"f0_base", f0_base},
          {"f0_jitter", f0_jitter},         {"harmonic_rolloff", harmonic_rolloff},
          {"formant_centers", formant_centers}, {"seed", seed}};
}

SpeakerProfile SpeakerProfile::FromJson(const nlohmann::json& j) {
  SpeakerProfile p;
  p.speaker_id = j.at("speaker_id");
  p.f0_base = j.at("f0_base");
  p.f0_jitter = j.at("f0_jitter");
  p.harmonic_rolloff = j.at("harmonic_rolloff");
  p.formant_centers = j.at("formant_centers").get<std::vector<double>>();
  p.seed = j.at("seed");
  p.Validate();
  return p;
}

std::vector<SpeakerProfile> MakeSpeakerProfiles(int n, uint64_t seed) {
  if (n < 1) throw ValidationError("need at least one speaker");
  Rng rng = MakeRng(seed, "speakers");
  std::vector<int> slot(static_cast<size_t>(n));
  std::iota(slot.begin(), slot.end(), 0);
  for (int i = n - 1; i > 0; --i) std::swap(slot[i], slot[UniformInt(rng, 0, i)]);
  const double lo = std::log(90.0), hi = std::log(290.0);
  std::vector<SpeakerProfile> out;
  for (int s = 0; s < n; ++s) {
    SpeakerProfile p;
    p.speaker_id = s;
    const double u = (slot[s] + UniformReal(rng, 0.3, 0.7)) / n;
    p.f0_base = std::exp(lo + u * (hi - lo));
    p.f0_jitter = UniformReal(rng, 0.01, 0.03);
    p.harmonic_rolloff = UniformReal(rng, 0.6, 1.4);
    p.formant_centers = {UniformReal(rng, 350, 900), UniformReal(rng, 1000, 2300),
                         UniformReal(rng, 2400, 3400)};
    p.seed = DeriveSeed(seed, "speaker/" + std::to_string(s));
    p.Validate();
    out.push_back(std::move(p));
  }
  return out;
}

dsp::Waveform SynthSpeakerUtterance(const SpeakerProfile& profile, double duration_s, Rng& rng) {
  if (!(duration_s > 0 && duration_s <= 10)) {
    throw ValidationError("utterance duration must be in (0, 10] s");
  }
  dsp::Waveform w;
  w.samples.assign(Samples(duration_s), 0.0f);
  const size_t n = w.samples.size();
  size_t pos = Samples(UniformReal(rng, 0.02, 0.15));
  while (pos < n) {
    size_t seg = std::min(Samples(UniformReal(rng, 0.3, 1.0)), n - pos);
    if (seg < Samples(0.08)) break;
    VoicedSegment(profile, w.samples.data() + pos, seg, rng);
    pos += seg + Samples(UniformReal(rng, 0.05, 0.25));
  }
  PeakNormalize(&w.samples, kUtterancePeak);
  return w;
}

std::string ToString(GeneratorKind k) {
  switch (k) {
    case GeneratorKind::kPureTone: return "pure_tone";
    case GeneratorKind::kChirp: return "chirp";
    case GeneratorKind::kNoiseBurst: return "noise_burst";
    case GeneratorKind::kClickTrain: return "click_train";
    case GeneratorKind::kVoicedSpeechLike: return "voiced_speech_like";
    case GeneratorKind::kChord: return "chord";
  }
  return "unknown";
}

GeneratorKind ParseGeneratorKind(const std::string& s) {
  for (GeneratorKind k : {GeneratorKind::kPureTone, GeneratorKind::kChirp, GeneratorKind::kNoiseBurst,
                          GeneratorKind::kClickTrain, GeneratorKind::kVoicedSpeechLike,
                          GeneratorKind::kChord}) {
    if (ToString(k) == s) return k;
  }
  throw ValidationError("unknown event generator '" + s + "'");
}

nlohmann::json EventClass::ToJson() const {
  return {{"name", name},
          {"kind", ToString(kind)},
          {"params", params},
          {"voice_correlated", voice_correlated},
          {"speakers", speakers}};
}

EventClass EventClass::FromJson(const nlohmann::json& j) {
  EventClass c;
  c.name = j.at("name");
  c.kind = ParseGeneratorKind(j.at("kind"));
  c.params = j.at("params").get<std::vector<double>>();
  c.voice_correlated = j.at("voice_correlated");
  c.speakers = j.at("speakers").get<std::vector<int>>();
  return c;
}

std::vector<EventClass> DefaultEventClasses(int n_classes, int n_speakers, uint64_t seed) {
  if (n_classes < 2) throw ValidationError("need at least two event classes");
  const int n_voice = std::max(1, n_classes / 3);
  const int n_other = n_classes - n_voice;
  if (n_speakers < n_voice) throw ValidationError("fewer speakers than voice classes");
  std::vector<EventClass> base = {
      {"tone_1k", GeneratorKind::kPureTone, {1000}, false, {}},
      {"tone_3k", GeneratorKind::kPureTone, {3000}, false, {}},
      {"chirp_up", GeneratorKind::kChirp, {500, 4000}, false, {}},
      {"chirp_down", GeneratorKind::kChirp, {4000, 500}, false, {}},
      {"noise_low", GeneratorKind::kNoiseBurst, {300, 1200}, false, {}},
      {"noise_high", GeneratorKind::kNoiseBurst, {3000, 6000}, false, {}},
      {"clicks", GeneratorKind::kClickTrain, {4, 12}, false, {}},
      {"chord", GeneratorKind::kChord, {520, 1.37, 1.93, 2.71}, false, {}},
  };
  std::vector<EventClass> out;
  for (int i = 0; i < n_other; ++i) {
    if (i < static_cast<int>(base.size())) {
      out.push_back(base[i]);
    } else {
      const double hz = 600.0 * std::pow(1.3, i - static_cast<int>(base.size()) + 1);
      out.push_back({"tone_" + std::to_string(static_cast<int>(hz)), GeneratorKind::kPureTone,
                     {hz}, false, {}});
    }
  }
  // Disjoint speaker groups drawn from a shuffled roster.
  Rng rng = MakeRng(seed, "voice_groups");
  std::vector<int> roster(static_cast<size_t>(n_speakers));
  std::iota(roster.begin(), roster.end(), 0);
  for (int i = n_speakers - 1; i > 0; --i) std::swap(roster[i], roster[UniformInt(rng, 0, i)]);
  const int group = n_speakers / n_voice;
  for (int v = 0; v < n_voice; ++v) {
    EventClass c{"voice_" + std::to_string(v), GeneratorKind::kVoicedSpeechLike, {}, true, {}};
    c.speakers.assign(roster.begin() + v * group, roster.begin() + (v + 1) * group);
    std::sort(c.speakers.begin(), c.speakers.end());
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<float> SynthEvent(const EventClass& cls, const std::vector<SpeakerProfile>& speakers,
                              double duration_s, Rng& rng) {
  const size_t n = Samples(duration_s);
  std::vector<float> x;
  switch (cls.kind) {
    case GeneratorKind::kPureTone:
      x = Tone(cls.params.at(0), n);
      break;
    case GeneratorKind::kChirp:
      x = Chirp(cls.params.at(0), cls.params.at(1), n);
      break;
    case GeneratorKind::kNoiseBurst:
      x = NoiseBand(cls.params.at(0), cls.params.at(1), n, rng);
      break;
    case GeneratorKind::kClickTrain:
      x = Clicks(UniformReal(rng, cls.params.at(0), cls.params.at(1)), n, rng);
      break;
    case GeneratorKind::kChord:
      x = Chord(cls.params, n);
      break;
    case GeneratorKind::kVoicedSpeechLike: {
      if (cls.speakers.empty()) throw ValidationError("voice class " + cls.name + " has no speakers");
      const int id = cls.speakers[UniformInt(rng, 0, static_cast<int64_t>(cls.speakers.size()) - 1)];
      x = SynthSpeakerUtterance(speakers.at(static_cast<size_t>(id)), duration_s, rng).samples;
      break;
    }
  }
  if (cls.kind != GeneratorKind::kVoicedSpeechLike) ApplyRamps(x.data(), x.size(), Samples(0.01));
  PeakNormalize(&x, 1.0);
  return x;
}

AedClip SynthAedClipWithLabels(const std::vector<EventClass>& classes,
                               const std::vector<SpeakerProfile>& speakers,
                               std::vector<int> labels, Rng& rng) {
  AedClip clip;
  std::vector<float>& x = clip.wave.samples;
  x.resize(dsp::kClipSamples);
  const double noise_rms = std::pow(10.0, kBackgroundDbfs / 20.0);
  for (float& v : x) v = static_cast<float>(noise_rms * StandardNormal(rng));
  std::sort(labels.begin(), labels.end());
  for (int c : labels) {
    const double dur = UniformReal(rng, 1.0, 6.0);
    const size_t onset = Samples(UniformReal(rng, 0.0, 10.0 - dur));
    const double gain = UniformReal(rng, 0.25, 0.5);
    std::vector<float> ev = SynthEvent(classes.at(static_cast<size_t>(c)), speakers, dur, rng);
    for (size_t i = 0; i < ev.size() && onset + i < x.size(); ++i) {
      x[onset + i] += static_cast<float>(gain) * ev[i];
    }
  }
  float peak = 0;
  for (float v : x) peak = std::max(peak, std::abs(v));
  if (peak > 0.99f) {
    for (float& v : x) v *= 0.99f / peak;
  }
  clip.labels = std::move(labels);
  return clip;
}

AedClip SynthAedClip(const std::vector<EventClass>& classes,
                     const std::vector<SpeakerProfile>& speakers, Rng& rng,
                     std::optional<int> forced_count) {
  const int n = static_cast<int>(classes.size());
  const int count = forced_count ? *forced_count : static_cast<int>(UniformInt(rng, 1, std::min(3, n)));
  std::vector<int> pool(static_cast<size_t>(n));
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < count; ++i) std::swap(pool[i], pool[UniformInt(rng, i, n - 1)]);
  return SynthAedClipWithLabels(classes, speakers, {pool.begin(), pool.begin() + count}, rng);
}

}  // namespace vaed::data
