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

#include "vaed/data/dataset.h"

#include <algorithm>

#include "vaed/common/error.h"
#include "vaed/data/cache.h"

namespace vaed::data {

SpeakerSet LoadSpeakerSet(const std::vector<ClipRecord>& records,
                          const std::filesystem::path& cache_dir, const dsp::NormStats& stats,
                          int num_speakers) {
  SpeakerSet s;
  s.num_speakers = num_speakers;
  for (const ClipRecord& r : records) {
    r.Validate(Task::kSpeaker);
    if (*r.speaker < 0 || *r.speaker >= num_speakers) {
      throw ValidationError("clip " + r.id + " speaker id outside [0, " +
                            std::to_string(num_speakers) + ")");
    }
    s.ids.push_back(r.id);
    s.logmel.push_back(dsp::Normalize({LoadFeature(cache_dir, r.id)}, stats).values);
    s.speaker.push_back(*r.speaker);
  }
  return s;
}

AedSet LoadAedSet(const std::vector<ClipRecord>& records, const std::filesystem::path& cache_dir,
                  const dsp::NormStats& stats, int num_classes,
                  const std::optional<std::string>& arch) {
  AedSet s;
  s.num_classes = num_classes;
  for (const ClipRecord& r : records) {
    r.Validate(Task::kAed);
    for (int c : r.labels) {
      if (c < 0 || c >= num_classes) {
        throw ValidationError("clip " + r.id + " label " + std::to_string(c) + " outside [0, " +
                              std::to_string(num_classes) + ")");
      }
    }
    s.ids.push_back(r.id);
    s.logmel.push_back(dsp::Normalize({LoadFeature(cache_dir, r.id)}, stats).values);
    if (arch) s.embedding.push_back(LoadEmbedding(cache_dir, *arch, r.id));
    s.labels.push_back(r.labels);
  }
  return s;
}

TensorF StackRows(const std::vector<TensorF>& items, const std::vector<size_t>& index) {
  if (index.empty()) throw ValidationError("cannot stack an empty batch");
  const Shape& one = items.at(index[0]).shape();
  Shape shape = {static_cast<int>(index.size())};
  shape.insert(shape.end(), one.begin(), one.end());
  TensorF out(shape);
  const size_t per = items[index[0]].size();
  for (size_t b = 0; b < index.size(); ++b) {
    const TensorF& t = items.at(index[b]);
    if (t.shape() != one) throw DimensionError("batch items disagree in shape");
    std::copy(t.data(), t.data() + per, out.data() + b * per);
  }
  return out;
}

TensorF MultiHot(const std::vector<std::vector<int>>& labels, const std::vector<size_t>& index,
                 int num_classes) {
  TensorF out({static_cast<int>(index.size()), num_classes});
  for (size_t b = 0; b < index.size(); ++b)
    for (int c : labels.at(index[b])) out.at({static_cast<int>(b), c}) = 1.0f;
  return out;
}

}  // namespace vaed::data
