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

#ifndef VAED_DATA_DATASET_H_
#define VAED_DATA_DATASET_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vaed/data/corpus.h"
#include "vaed/dsp/log_mel.h"

namespace vaed::data {

// In-memory normalized log-mels for the speaker task.
struct SpeakerSet {
  std::vector<std::string> ids;
  std::vector<TensorF> logmel;  // each [400, 64]
  std::vector<int> speaker;
  int num_speakers = 0;
  size_t size() const { return ids.size(); }
};

// In-memory AED examples; `embedding` is empty for audio-only training.
struct AedSet {
  std::vector<std::string> ids;
  std::vector<TensorF> logmel;     // each [400, 64]
  std::vector<TensorF> embedding;  // each [100, E]
  std::vector<std::vector<int>> labels;
  int num_classes = 0;
  size_t size() const { return ids.size(); }
};

SpeakerSet LoadSpeakerSet(const std::vector<ClipRecord>& records,
                          const std::filesystem::path& cache_dir, const dsp::NormStats& stats,
                          int num_speakers);

// Embeddings are read from <cache>/embeddings/<arch>/ when `arch` is given.
AedSet LoadAedSet(const std::vector<ClipRecord>& records, const std::filesystem::path& cache_dir,
                  const dsp::NormStats& stats, int num_classes,
                  const std::optional<std::string>& arch);

// Stacks the selected examples into a batch tensor [n, ...].
TensorF StackRows(const std::vector<TensorF>& items, const std::vector<size_t>& index);
// Multi-hot [n, C] targets.
TensorF MultiHot(const std::vector<std::vector<int>>& labels, const std::vector<size_t>& index,
                 int num_classes);

}  // namespace vaed::data

#endif  // VAED_DATA_DATASET_H_
