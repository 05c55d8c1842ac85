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

#ifndef VAED_PIPELINE_STAGES_H_
#define VAED_PIPELINE_STAGES_H_

#include <filesystem>
#include <optional>
#include <string>

#include "vaed/data/cache.h"
#include "vaed/metrics/evaluate.h"
#include "vaed/models/model_spec.h"
#include "vaed/train/train.h"

// The pipeline stages behind the command-line subcommands. Each stage checks
// that the artifacts of earlier stages exist and otherwise throws
// MissingPrerequisiteError naming the stage to run.
namespace vaed::pipeline {

enum class Preset { kDesk, kFull };
std::string ToString(Preset p);
Preset ParsePreset(const std::string& s);  // desk | full

struct Paths {
  std::filesystem::path corpus;
  std::filesystem::path cache;
};

// Log-mel cache for both corpora plus the "speaker" and "aed" training-split
// normalization statistics.
data::CacheReport Featurize(const Paths& paths, int jobs = 1);

models::SpeakerSpec SpeakerSpecFor(Preset preset, models::VoiceArch arch, int num_speakers);
train::FitResult PretrainSpeaker(const Paths& paths, models::VoiceArch arch, Preset preset,
                                 const train::TrainConfig& config,
                                 const std::filesystem::path& out_dir);

// Embeddings of every AED clip under <cache>/embeddings/<arch>/.
data::CacheReport Embed(const Paths& paths, const std::filesystem::path& checkpoint,
                        models::VoiceArch arch, int jobs = 1);

struct AedRun {
  models::BranchMode mode = models::BranchMode::kDual;
  models::AudioBranch audio = models::AudioBranch::kCnn;
  models::VoiceArch voice_arch = models::VoiceArch::kArch2;
  Preset preset = Preset::kDesk;

  // Voice-side augmentation has nothing to act on without the voice branch.
  void Validate(const augment::AugmentConfig& aug) const;
};
models::AedSpec AedSpecFor(const AedRun& run, int num_classes, int embedding_width);
train::FitResult TrainAed(const Paths& paths, const AedRun& run, const train::TrainConfig& config,
                          const std::filesystem::path& out_dir);

struct Evaluation {
  metrics::EvalReport report;
  metrics::AedScores scores;
};
// Scores the AED checkpoint on `split`. When `out_dir` is given the report
// files are written there; missing cache entries are listed in
// <out_dir>/errors.json before the stage fails.
Evaluation Evaluate(const Paths& paths, const std::filesystem::path& checkpoint,
                    const std::string& split = "eval",
                    const std::optional<std::filesystem::path>& out_dir = std::nullopt);

}  // namespace vaed::pipeline

#endif  // VAED_PIPELINE_STAGES_H_
