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

#ifndef VAED_DSP_WAVEFORM_H_
#define VAED_DSP_WAVEFORM_H_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace vaed::dsp {

inline constexpr int kSampleRate = 16000;
inline constexpr int kClipSamples = 160000;  // 10 s

// Mono clip at 16 kHz. After PrepareWaveform the length is exactly
// kClipSamples.
struct Waveform {
  std::vector<float> samples;
  int sample_rate = kSampleRate;
  std::string source_id;
};

// Truncates or zero-pads (both at the end) to 10 s. Throws
// UnsupportedRateError for anything but 16 kHz and ValidationError for an
// empty input.
Waveform PrepareWaveform(std::span<const float> raw, int sample_rate,
                         std::string source_id = {});

// 16-bit PCM mono WAV. Samples are scaled by 1/32768 on read and clipped to
// [-1, 1) on write.
struct WavData {
  std::vector<float> samples;
  int sample_rate = 0;
};
WavData ReadWav(const std::filesystem::path& path);
WavData DecodeWav(const std::string& bytes, const std::string& source);
std::string EncodeWav(std::span<const float> samples, int sample_rate);
void WriteWav(const std::filesystem::path& path, std::span<const float> samples,
              int sample_rate);

}  // namespace vaed::dsp

#endif  // VAED_DSP_WAVEFORM_H_
