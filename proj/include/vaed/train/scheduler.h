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

#ifndef VAED_TRAIN_SCHEDULER_H_
#define VAED_TRAIN_SCHEDULER_H_

#include <limits>

#include "json.hpp"

namespace vaed::train {

struct PlateauOptions {
  double initial_lr = 2e-4;
  double shrink = 0.9;
  double min_lr = 1e-6;
  int patience = 1;
};

// Reduce-on-plateau for a higher-is-better validation metric. After
// `patience` consecutive epochs without a new best the rate is multiplied by
// `shrink` and the counter restarts; training should stop once the rate
// drops below `min_lr`. The first observation always sets the best.
class PlateauScheduler {
 public:
  explicit PlateauScheduler(PlateauOptions options = {});

  // Returns true when `metric` is a new best.
  bool Observe(double metric);

  double lr() const { return lr_; }
  bool stop() const { return lr_ < options_.min_lr; }
  int shrinks() const { return shrinks_; }
  double best() const { return best_; }
  int best_epoch() const { return best_epoch_; }  // 1-based; 0 before any epoch
  int epochs() const { return epochs_; }

  nlohmann::json State() const;
  void Restore(const nlohmann::json& state);

 private:
  PlateauOptions options_;
  double lr_;
  double best_ = -std::numeric_limits<double>::infinity();
  int best_epoch_ = 0;
  int epochs_ = 0;
  int stale_ = 0;
  int shrinks_ = 0;
};

}  // namespace vaed::train

#endif  // VAED_TRAIN_SCHEDULER_H_
