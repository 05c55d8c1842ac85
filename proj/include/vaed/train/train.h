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

#ifndef VAED_TRAIN_TRAIN_H_
#define VAED_TRAIN_TRAIN_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "vaed/augment/augment.h"
#include "vaed/data/dataset.h"
#include "vaed/models/checkpoint.h"
#include "vaed/models/model_spec.h"

namespace vaed::train {

struct TrainConfig {
  double lr_initial = 2e-4;
  int batch_size = 25;
  double lr_shrink = 0.9;
  double lr_min = 1e-6;
  int plateau_patience = 1;
  int max_epochs = 100;
  uint64_t seed = 0;
  // Class- or speaker-first sampling; otherwise a shuffled pass per epoch.
  bool balanced = true;
  augment::AugmentConfig aug;

  void Validate() const;
  nlohmann::json ToJson() const;
  static TrainConfig FromJson(const nlohmann::json& j);
};

struct EpochLog {
  int epoch = 0;  // 1-based
  double train_loss = 0;
  double val_loss = 0;
  double val_metric = 0;  // accuracy or mAP
  double lr = 0;          // rate used during this epoch
  double wall_time = 0;   // seconds
  bool improved = false;

  nlohmann::json ToJson() const;
};

struct FitResult {
  std::vector<EpochLog> epochs;
  int best_epoch = 0;
  double best_metric = 0;
  bool reached_lr_floor = false;
  models::Checkpoint best;  // parameters at best_epoch
  models::Checkpoint last;  // parameters and optimizer after the final epoch

  nlohmann::json SummaryJson() const;
};

// When `out_dir` is given the run writes epochs.jsonl (flushed each epoch),
// best.ckpt, last.ckpt and summary.json there. A non-finite loss or gradient
// aborts with NonFiniteError; the offending batch ids go to nonfinite.json.
FitResult FitSpeaker(const data::SpeakerSet& train, const data::SpeakerSet& val,
                     const models::SpeakerSpec& spec, const TrainConfig& config,
                     const std::optional<std::filesystem::path>& out_dir = std::nullopt);

// Needs embeddings on both sets in dual mode. `voice_arch` is recorded in the
// checkpoint metadata so evaluation can find the matching embedding cache.
FitResult FitAed(const data::AedSet& train, const data::AedSet& val, const models::AedSpec& spec,
                 const TrainConfig& config, const std::string& voice_arch = "",
                 const std::optional<std::filesystem::path>& out_dir = std::nullopt);

// Repeated Adam steps on one fixed batch in training mode. `losses[k]` is
// the loss of step k before its update; `metric` is the eval-mode accuracy
// (speaker) or clip mAP (AED) on the batch after the last step.
struct OverfitResult {
  std::vector<double> losses;
  double metric = 0;
  int steps = 0;  // steps taken until `loss_target` was met, or the budget
};
OverfitResult OverfitSpeaker(const data::SpeakerSet& batch, const models::SpeakerSpec& spec,
                             int max_steps, double lr, double loss_target, uint64_t seed = 0);
OverfitResult OverfitAed(const data::AedSet& batch, const models::AedSpec& spec, int max_steps,
                         double lr, double loss_target, uint64_t seed = 0);

}  // namespace vaed::train

#endif  // VAED_TRAIN_TRAIN_H_
