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

#include "vaed/train/scheduler.h"

#include "vaed/common/error.h"

namespace vaed::train {

PlateauScheduler::PlateauScheduler(PlateauOptions options)
    : options_(options), lr_(options.initial_lr) {
  if (!(options_.shrink > 0 && options_.shrink < 1)) {
    throw ValidationError("lr shrink factor must be in (0, 1)");
  }
  if (!(options_.min_lr > 0 && options_.min_lr < options_.initial_lr)) {
    throw ValidationError("lr floor must be positive and below the initial rate");
  }
  if (options_.patience < 1) throw ValidationError("plateau patience must be at least 1");
}

bool PlateauScheduler::Observe(double metric) {
  ++epochs_;
  if (metric > best_) {
    best_ = metric;
    best_epoch_ = epochs_;
    stale_ = 0;
    return true;
  }
  if (++stale_ >= options_.patience) {
    lr_ *= options_.shrink;
    ++shrinks_;
    stale_ = 0;
  }
  return false;
}

nlohmann::json PlateauScheduler::State() const {
  return {{"lr", lr_},         {"best", best_},   {"best_epoch", best_epoch_},
          {"epochs", epochs_}, {"stale", stale_}, {"shrinks", shrinks_}};
}

void PlateauScheduler::Restore(const nlohmann::json& s) {
  lr_ = s.at("lr");
  best_ = s.at("best");
  best_epoch_ = s.at("best_epoch");
  epochs_ = s.at("epochs");
  stale_ = s.at("stale");
  shrinks_ = s.at("shrinks");
}

}  // namespace vaed::train
