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

#ifndef VAED_DATA_CORPUS_H_
#define VAED_DATA_CORPUS_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "vaed/data/synth.h"

namespace vaed::data {

enum class Task { kSpeaker, kAed };

// One manifest line. `path` is relative to the manifest's directory unless
// absolute.
struct ClipRecord {
  std::string id;
  std::string path;
  std::vector<int> labels;
  std::optional<int> speaker;
  std::string split;  // train | val | eval

  // Speaker records need a speaker id, AED records non-empty labels.
  void Validate(Task task) const;
  nlohmann::json ToJson() const;
  static ClipRecord FromJson(const nlohmann::json& j, const std::string& source);
};

void WriteManifest(const std::filesystem::path& path, const std::vector<ClipRecord>& records);
std::vector<ClipRecord> ReadManifest(const std::filesystem::path& path, Task task);
std::vector<ClipRecord> FilterSplit(const std::vector<ClipRecord>& records,
                                    const std::string& split);

struct CorpusConfig {
  int n_speakers = 24;
  int utterances_per_speaker = 40;
  int speaker_val_per_speaker = 5;
  double utterance_min_s = 4.0;
  double utterance_max_s = 8.0;
  int n_aed_clips = 2400;
  int n_event_classes = 12;
  double aed_val_fraction = 0.15;
  double aed_eval_fraction = 0.25;
  int min_eval_positives = 5;
  int max_attempts = 20;

  void Validate() const;
  nlohmann::json ToJson() const;
  static CorpusConfig FromJson(const nlohmann::json& j);
};

struct Corpus {
  CorpusConfig config;
  uint64_t seed = 0;
  int attempt = 0;  // AED label-plan regenerations needed for stratification
  std::vector<SpeakerProfile> speakers;
  std::vector<EventClass> classes;
  std::vector<ClipRecord> speaker_records;
  std::vector<ClipRecord> aed_records;
};

// Plans both corpora (ids, labels, splits) without synthesizing audio.
Corpus PlanCorpora(const CorpusConfig& config, uint64_t seed);

// Assigns train/val/eval so each class's clips are spread in proportion,
// keyed by each clip's rarest label. Returns false if some class ends with
// fewer than `min_eval_positives` eval clips.
bool StratifySplits(std::vector<ClipRecord>* records, int n_classes, double val_fraction,
                    double eval_fraction, int min_eval_positives, Rng& rng);

// Plans the corpora and writes <out>/audio/{speaker,aed}/<id>.wav,
// <out>/speaker.jsonl, <out>/aed.jsonl and <out>/corpus.json. Each clip is
// synthesized from its own stream derived from (seed, id).
Corpus BuildCorpora(const CorpusConfig& config, uint64_t seed, const std::filesystem::path& out,
                    int jobs = 1);

nlohmann::json CorpusToJson(const Corpus& c);
// Reads <dir>/corpus.json and both manifests.
Corpus LoadCorpus(const std::filesystem::path& dir);

}  // namespace vaed::data

#endif  // VAED_DATA_CORPUS_H_
