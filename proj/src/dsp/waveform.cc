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

#include "vaed/dsp/waveform.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>

#include "vaed/common/bytes.h"
#include "vaed/common/error.h"
#include "vaed/common/faed.h"

namespace vaed::dsp {

Waveform PrepareWaveform(std::span<const float> raw, int sample_rate,
                         std::string source_id) {
  if (sample_rate != kSampleRate) {
    throw UnsupportedRateError("sample rate " + std::to_string(sample_rate) +
                               " Hz is not supported (expected 16000 Hz)");
  }
  if (raw.empty()) throw ValidationError("empty waveform " + source_id);
  Waveform w;
  w.sample_rate = sample_rate;
  w.source_id = std::move(source_id);
  w.samples.assign(kClipSamples, 0.0f);
  size_t n = std::min<size_t>(raw.size(), kClipSamples);
  std::copy_n(raw.begin(), n, w.samples.begin());
  return w;
}


WavData DecodeWav(const std::string& bytes, const std::string& source) {
  ByteReader r(bytes, source);
  if (r.Take(4) != "RIFF") throw FormatError(source + ": not a RIFF file");
  r.Get<uint32_t>();
  if (r.Take(4) != "WAVE") throw FormatError(source + ": not a WAVE file");
  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  bool have_fmt = false;
  while (r.remaining() >= 8) {
    std::string_view id = r.Take(4);
    uint32_t size = r.Get<uint32_t>();
    size_t padded = std::min<size_t>(size + (size & 1u), r.remaining());
    std::string_view body = r.Take(padded).substr(0, size);
    if (id == "fmt ") {
      ByteReader f(body, source);
      format = f.Get<uint16_t>();
      channels = f.Get<uint16_t>();
      rate = f.Get<uint32_t>();
      f.Get<uint32_t>();
      f.Get<uint16_t>();
      bits = f.Get<uint16_t>();
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) throw FormatError(source + ": data chunk before fmt chunk");
      if (format != 1 || bits != 16) {
        throw FormatError(source + ": only 16-bit PCM is supported");
      }
      if (channels != 1) throw FormatError(source + ": only mono audio is supported");
      WavData out;
      out.sample_rate = static_cast<int>(rate);
      size_t n = body.size() / 2;
      out.samples.resize(n);
      for (size_t i = 0; i < n; ++i) {
        int16_t s;
        std::memcpy(&s, body.data() + 2 * i, 2);
        out.samples[i] = static_cast<float>(s) / 32768.0f;
      }
      return out;
    }
  }
  throw FormatError(source + ": no data chunk");
}

WavData ReadWav(const std::filesystem::path& path) {
  return DecodeWav(ReadFileBytes(path), path.string());
}

std::string EncodeWav(std::span<const float> samples, int sample_rate) {
  ByteWriter w;
  uint32_t data_bytes = static_cast<uint32_t>(samples.size() * 2);
  w.PutBytes("RIFF");
  w.Put<uint32_t>(36 + data_bytes);
  w.PutBytes("WAVE");
  w.PutBytes("fmt ");
  w.Put<uint32_t>(16);
  w.Put<uint16_t>(1);
  w.Put<uint16_t>(1);
  w.Put<uint32_t>(static_cast<uint32_t>(sample_rate));
  w.Put<uint32_t>(static_cast<uint32_t>(sample_rate) * 2);
  w.Put<uint16_t>(2);
  w.Put<uint16_t>(16);
  w.PutBytes("data");
  w.Put<uint32_t>(data_bytes);
  for (float s : samples) {
    float scaled = std::round(s * 32768.0f);
    scaled = std::clamp(scaled, -32768.0f, 32767.0f);
    w.Put<int16_t>(static_cast<int16_t>(scaled));
  }
  return std::move(w.str());
}

void WriteWav(const std::filesystem::path& path, std::span<const float> samples,
              int sample_rate) {
  WriteFileBytes(path, EncodeWav(samples, sample_rate));
}

}  // namespace vaed::dsp
