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

#ifndef VAED_DATA_CACHE_H_
#define VAED_DATA_CACHE_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "vaed/data/corpus.h"
#include "vaed/dsp/log_mel.h"

namespace vaed::data {

struct RecordError {
  std::string id;
  std::string message;
};

// Outcome of a caching pass. Per-record failures are collected rather than
// aborting the pass.
struct CacheReport {
  size_t written = 0;
  size_t skipped = 0;
  std::vector<RecordError> errors;
  nlohmann::json ToJson() const;
};

// Raw (unnormalized) 400x64 log-mels at <cache>/features/<id>.faed. An
// index of input and output content hashes at <cache>/features/index.json
// makes re-runs over unchanged audio a no-op. Audio paths resolve against
// `audio_root`.
CacheReport CacheFeatures(const std::vector<ClipRecord>& records,
                          const std::filesystem::path& audio_root,
                          const std::filesystem::path& cache_dir, int jobs = 1);

TensorF LoadFeature(const std::filesystem::path& cache_dir, const std::string& id);

// Stats over the given records' cached features, saved as
// <cache>/stats/<name>.faed.
dsp::NormStats ComputeNormStats(const std::vector<ClipRecord>& records,
                                const std::filesystem::path& cache_dir, const std::string& name);
dsp::NormStats LoadNormStats(const std::filesystem::path& cache_dir, const std::string& name);

// Runs the frozen speaker model of `checkpoint` in eval mode over normalized
// cached features and writes [100, E] arrays at
// <cache>/embeddings/<arch>/<id>.faed, with its own hash index. Each worker
// owns a private copy of the model.
CacheReport CacheEmbeddings(const std::vector<ClipRecord>& records,
                            const std::filesystem::path& cache_dir,
                            const std::filesystem::path& checkpoint, const std::string& arch,
                            const dsp::NormStats& stats, int jobs = 1);

// Lists every record whose cached feature (and embedding, when `arch` is
// given) is missing or unreadable, without stopping at the first one.
std::vector<RecordError> AuditCache(const std::vector<ClipRecord>& records,
                                    const std::filesystem::path& cache_dir,
                                    const std::optional<std::string>& arch);

TensorF LoadEmbedding(const std::filesystem::path& cache_dir, const std::string& arch,
                      const std::string& id);

}  // namespace vaed::data

#endif  // VAED_DATA_CACHE_H_
