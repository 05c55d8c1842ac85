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

#ifndef VAED_DATA_SYNTH_H_
#define VAED_DATA_SYNTH_H_

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "vaed/common/random.h"
#include "vaed/dsp/waveform.h"

namespace vaed::data {

struct SpeakerProfile {
  int speaker_id = 0;
  double f0_base = 120;          // Hz, in [85, 300]
  double f0_jitter = 0.02;       // per-segment fractional f0 spread
  double harmonic_rolloff = 1.0;  // harmonic k has amplitude k^-rolloff
  std::vector<double> formant_centers;  // 2-3 values in (300, 3500) Hz
  uint64_t seed = 0;

  void Validate() const;
  nlohmann::json ToJson() const;
  static SpeakerProfile FromJson(const nlohmann::json& j);
};

// Speakers get log-spaced, shuffled fundamentals over [90, 290] Hz so that
// neighbouring speakers differ by at least a few percent in f0, plus random
// formants, rolloff and jitter.
std::vector<SpeakerProfile> MakeSpeakerProfiles(int n, uint64_t seed);

// Voiced harmonic segments separated by exact-zero silences, peak 0.7.
// Length is round(duration_s * 16000); duration_s must be in (0, 10].
dsp::Waveform SynthSpeakerUtterance(const SpeakerProfile& profile, double duration_s, Rng& rng);

enum class GeneratorKind { kPureTone, kChirp, kNoiseBurst, kClickTrain, kVoicedSpeechLike, kChord };
std::string ToString(GeneratorKind k);
GeneratorKind ParseGeneratorKind(const std::string& s);

// `params` by kind: tone {hz}; chirp {start_hz, end_hz}; noise {lo_hz, hi_hz};
// clicks {min_rate_hz, max_rate_hz}; chord {base_hz, ratio...}; voiced {}
// with the eligible speaker ids in `speakers`.
struct EventClass {
  std::string name;
  GeneratorKind kind = GeneratorKind::kPureTone;
  std::vector<double> params;
  bool voice_correlated = false;
  std::vector<int> speakers;

  nlohmann::json ToJson() const;
  static EventClass FromJson(const nlohmann::json& j);
};

// Non-voice templates first (tones, chirps, noise bands, clicks, chord, then
// extra tones if more are needed), followed by max(1, n/3) voice classes, each
// bound to a disjoint random group of speakers.
std::vector<EventClass> DefaultEventClasses(int n_classes, int n_speakers, uint64_t seed);

// One event of `duration_s` seconds with unit peak.
std::vector<float> SynthEvent(const EventClass& cls, const std::vector<SpeakerProfile>& speakers,
                              double duration_s, Rng& rng);

// RMS level of the white background noise under every clip.
inline constexpr double kBackgroundDbfs = -30.0;

struct AedClip {
  dsp::Waveform wave;
  std::vector<int> labels;  // sorted class indices
};

// 10 s of background noise plus 1-3 distinct classes (or `forced_count`),
// each placed at a random onset with a random 1-6 s duration.
AedClip SynthAedClip(const std::vector<EventClass>& classes,
                     const std::vector<SpeakerProfile>& speakers, Rng& rng,
                     std::optional<int> forced_count = std::nullopt);
// Same, with the class set already chosen.
AedClip SynthAedClipWithLabels(const std::vector<EventClass>& classes,
                               const std::vector<SpeakerProfile>& speakers,
                               std::vector<int> labels, Rng& rng);

}  // namespace vaed::data

#endif  // VAED_DATA_SYNTH_H_
