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

#include "vaed/pipeline/stages.h"

#include <glog/logging.h>

#include "vaed/common/error.h"
#include "vaed/common/faed.h"
#include "vaed/data/corpus.h"
#include "vaed/data/dataset.h"
#include "vaed/models/aed_model.h"
#include "vaed/models/checkpoint.h"

namespace vaed::pipeline {

namespace fs = std::filesystem;

std::string ToString(Preset p) { return p == Preset::kDesk ? "desk" : "full"; }

Preset ParsePreset(const std::string& s) {
  if (s == "desk") return Preset::kDesk;
  if (s == "full") return Preset::kFull;
  throw ValidationError("unknown preset '" + s + "' (expected desk or full)");
}

namespace {

std::vector<std::string> ClassNames(const data::Corpus& c) {
  std::vector<std::string> names;
  for (const auto& k : c.classes) names.push_back(k.name);
  return names;
}

void Append(data::CacheReport* total, const data::CacheReport& r) {
  total->written += r.written;
  total->skipped += r.skipped;
  total->errors.insert(total->errors.end(), r.errors.begin(), r.errors.end());
}

}  // namespace

data::CacheReport Featurize(const Paths& paths, int jobs) {
  const data::Corpus c = data::LoadCorpus(paths.corpus);
  data::CacheReport report = data::CacheFeatures(c.speaker_records, paths.corpus, paths.cache, jobs);
  Append(&report, data::CacheFeatures(c.aed_records, paths.corpus, paths.cache, jobs));
  if (!report.errors.empty()) return report;
  data::ComputeNormStats(data::FilterSplit(c.speaker_records, "train"), paths.cache, "speaker");
  data::ComputeNormStats(data::FilterSplit(c.aed_records, "train"), paths.cache, "aed");
  return report;
}

models::SpeakerSpec SpeakerSpecFor(Preset preset, models::VoiceArch arch, int num_speakers) {
  models::SpeakerSpec s = preset == Preset::kDesk ? models::SpeakerSpec::Desk(arch, num_speakers)
                                                  : models::SpeakerSpec::Full(arch);
  s.num_speakers = num_speakers;
  s.Validate();
  return s;
}

train::FitResult PretrainSpeaker(const Paths& paths, models::VoiceArch arch, Preset preset,
                                 const train::TrainConfig& config, const fs::path& out_dir) {
  config.Validate();
  const data::Corpus c = data::LoadCorpus(paths.corpus);
  const dsp::NormStats stats = data::LoadNormStats(paths.cache, "speaker");
  const int n = c.config.n_speakers;
  const auto train = data::LoadSpeakerSet(data::FilterSplit(c.speaker_records, "train"), paths.cache, stats, n);
  const auto val = data::LoadSpeakerSet(data::FilterSplit(c.speaker_records, "val"), paths.cache, stats, n);
  LOG(INFO) << "speaker pretraining (" << models::ToString(arch) << ") on " << train.size()
            << " utterances, validating on " << val.size();
  return train::FitSpeaker(train, val, SpeakerSpecFor(preset, arch, n), config, out_dir);
}

data::CacheReport Embed(const Paths& paths, const fs::path& checkpoint, models::VoiceArch arch,
                        int jobs) {
  const data::Corpus c = data::LoadCorpus(paths.corpus);
  const dsp::NormStats stats = data::LoadNormStats(paths.cache, "speaker");
  return data::CacheEmbeddings(c.aed_records, paths.cache, checkpoint, models::ToString(arch), stats, jobs);
}

void AedRun::Validate(const augment::AugmentConfig& aug) const {
  aug.Validate();
  if (mode == models::BranchMode::kAudioOnly && (aug.time_mask || aug.voice_dropout)) {
    throw ValidationError("time masking and voice dropout need the voice branch (--branch dual)");
  }
}

models::AedSpec AedSpecFor(const AedRun& run, int num_classes, int embedding_width) {
  models::AedSpec s = run.preset == Preset::kDesk
                          ? models::AedSpec::Desk(run.mode, run.audio, num_classes, embedding_width)
                          : models::AedSpec::Full(run.mode, run.audio, num_classes);
  s.embedding_width = embedding_width;
  s.Validate();
  return s;
}

train::FitResult TrainAed(const Paths& paths, const AedRun& run, const train::TrainConfig& config,
                          const fs::path& out_dir) {
  run.Validate(config.aug);
  config.Validate();
  const data::Corpus c = data::LoadCorpus(paths.corpus);
  const dsp::NormStats stats = data::LoadNormStats(paths.cache, "aed");
  const int C = c.config.n_event_classes;
  const bool dual = run.mode == models::BranchMode::kDual;
  std::optional<std::string> arch;
  if (dual) arch = models::ToString(run.voice_arch);
  const auto train = data::LoadAedSet(data::FilterSplit(c.aed_records, "train"), paths.cache, stats, C, arch);
  const auto val = data::LoadAedSet(data::FilterSplit(c.aed_records, "val"), paths.cache, stats, C, arch);
  const int E = dual ? train.embedding.at(0).dim(1) : 1;
  const models::AedSpec spec = AedSpecFor(run, C, E);
  LOG(INFO) << "AED training (" << models::ToString(run.mode) << ", " << models::ToString(run.audio)
            << ", aug " << config.aug.EnableString() << ") on " << train.size() << " clips";
  return train::FitAed(train, val, spec, config, arch.value_or(""), out_dir);
}

Evaluation Evaluate(const Paths& paths, const fs::path& checkpoint, const std::string& split,
                    const std::optional<fs::path>& out_dir) {
  if (!fs::exists(checkpoint)) {
    throw MissingPrerequisiteError("missing AED checkpoint " + checkpoint.string(), "train-aed");
  }
  const models::Checkpoint ckpt = models::LoadCheckpoint(checkpoint);
  if (ckpt.meta.value("task", "") != "aed") {
    throw ValidationError(checkpoint.string() + " is not an event-detection checkpoint");
  }
  const models::AedSpec spec = models::AedSpec::FromJson(ckpt.meta.at("spec"));
  const data::Corpus c = data::LoadCorpus(paths.corpus);
  const auto records = data::FilterSplit(c.aed_records, split);
  if (records.empty()) throw ValidationError("split '" + split + "' has no clips");
  std::optional<std::string> arch;
  if (spec.mode == models::BranchMode::kDual) arch = ckpt.meta.at("voice_arch").get<std::string>();

  const auto missing_features = data::AuditCache(records, paths.cache, std::nullopt);
  const auto missing = missing_features.empty() ? data::AuditCache(records, paths.cache, arch) : missing_features;
  if (!missing.empty()) {
    if (out_dir) {
      data::CacheReport r;
      r.errors = missing;
      WriteFileBytes(*out_dir / "errors.json", r.ToJson().dump(2) + "\n");
    }
    throw MissingPrerequisiteError(std::to_string(missing.size()) + " " + split +
                                       " clips lack cache entries, first " + missing.front().id +
                                       ": " + missing.front().message,
                                   missing_features.empty() ? "embed" : "featurize");
  }

  const dsp::NormStats stats = data::LoadNormStats(paths.cache, "aed");
  const auto set = data::LoadAedSet(records, paths.cache, stats, spec.num_classes, arch);
  models::AedModel model(spec);
  models::RestoreParams(ckpt, spec.Fingerprint(), model.Params());
  Evaluation e;
  e.scores = metrics::ScoreAed(model, set);
  e.report = metrics::BuildReport(e.scores.clip, e.scores.truth, ClassNames(c));
  e.report.meta = {{"checkpoint", checkpoint.string()},
                   {"split", split},
                   {"loss", e.scores.loss},
                   {"epoch", ckpt.meta.value("epoch", 0)},
                   {"spec", ckpt.meta.at("spec")}};
  if (arch) e.report.meta["voice_arch"] = *arch;
  if (out_dir) metrics::WriteReport(e.report, e.scores, *out_dir);
  return e;
}

}  // namespace vaed::pipeline
