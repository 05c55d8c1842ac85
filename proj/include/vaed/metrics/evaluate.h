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

#ifndef VAED_METRICS_EVALUATE_H_
#define VAED_METRICS_EVALUATE_H_

#include <filesystem>
#include <string>
#include <vector>

#include "vaed/data/dataset.h"
#include "vaed/metrics/metrics.h"
#include "vaed/models/aed_model.h"
#include "vaed/models/speaker_model.h"

namespace vaed::metrics {

// Eval-mode clip probabilities and mean BCE against the clean labels.
struct AedScores {
  std::vector<std::vector<double>> clip;  // [n][C]
  std::vector<std::vector<int>> truth;    // multi-hot [n][C]
  double loss = 0;
};
AedScores ScoreAed(models::AedModel& model, const data::AedSet& set, int batch_size = 25);

EvalReport EvaluateAed(models::AedModel& model, const data::AedSet& set,
                       const std::vector<std::string>& class_names, int batch_size = 25);

struct SpeakerScores {
  double accuracy = 0;
  double loss = 0;  // mean cross-entropy
};
SpeakerScores ScoreSpeaker(models::SpeakerModel& model, const data::SpeakerSet& set,
                           int batch_size = 25);

// Writes report.json, classes.csv and pr/<class>.csv (threshold, precision,
// recall) under `dir`.
void WriteReport(const EvalReport& report, const AedScores& scores,
                 const std::filesystem::path& dir);

}  // namespace vaed::metrics

#endif  // VAED_METRICS_EVALUATE_H_
