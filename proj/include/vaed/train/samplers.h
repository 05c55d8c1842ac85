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

#ifndef VAED_TRAIN_SAMPLERS_H_
#define VAED_TRAIN_SAMPLERS_H_

#include <vector>

#include "vaed/common/random.h"

namespace vaed::train {

// Speaker-first sampling: a speaker uniformly among those present, then one
// of that speaker's utterances uniformly.
class BalancedSpeakerSampler {
 public:
  explicit BalancedSpeakerSampler(const std::vector<int>& speaker_of_item);
  std::vector<size_t> Draw(size_t count, Rng& rng) const;

 private:
  std::vector<std::vector<size_t>> groups_;
};

// Class-first sampling for multi-label data: a class uniformly, then one of
// its positive clips uniformly. Every class needs a positive.
class BalancedClassSampler {
 public:
  BalancedClassSampler(const std::vector<std::vector<int>>& labels, int num_classes);
  std::vector<size_t> Draw(size_t count, Rng& rng) const;

 private:
  std::vector<std::vector<size_t>> positives_;
};

// A uniformly shuffled pass over [0, n).
std::vector<size_t> Shuffled(size_t n, Rng& rng);

}  // namespace vaed::train

#endif  // VAED_TRAIN_SAMPLERS_H_
