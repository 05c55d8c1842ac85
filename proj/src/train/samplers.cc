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

#include "vaed/train/samplers.h"

#include <map>
#include <numeric>

#include "vaed/common/error.h"

namespace vaed::train {

namespace {

size_t Pick(size_t n, Rng& rng) { return static_cast<size_t>(UniformInt(rng, 0, static_cast<int64_t>(n) - 1)); }

}  // namespace

BalancedSpeakerSampler::BalancedSpeakerSampler(const std::vector<int>& speaker_of_item) {
  std::map<int, std::vector<size_t>> by_speaker;
  for (size_t i = 0; i < speaker_of_item.size(); ++i) by_speaker[speaker_of_item[i]].push_back(i);
  for (auto& [s, items] : by_speaker) groups_.push_back(std::move(items));
  if (groups_.empty()) throw ValidationError("speaker sampler needs at least one utterance");
}

std::vector<size_t> BalancedSpeakerSampler::Draw(size_t count, Rng& rng) const {
  std::vector<size_t> out(count);
  for (size_t& i : out) {
    const auto& g = groups_[Pick(groups_.size(), rng)];
    i = g[Pick(g.size(), rng)];
  }
  return out;
}

BalancedClassSampler::BalancedClassSampler(const std::vector<std::vector<int>>& labels,
                                           int num_classes)
    : positives_(static_cast<size_t>(num_classes)) {
  for (size_t i = 0; i < labels.size(); ++i)
    for (int c : labels[i]) positives_.at(static_cast<size_t>(c)).push_back(i);
  for (size_t c = 0; c < positives_.size(); ++c) {
    if (positives_[c].empty()) {
      throw ValidationError("class " + std::to_string(c) + " has no training positives");
    }
  }
}

std::vector<size_t> BalancedClassSampler::Draw(size_t count, Rng& rng) const {
  std::vector<size_t> out(count);
  for (size_t& i : out) {
    const auto& p = positives_[Pick(positives_.size(), rng)];
    i = p[Pick(p.size(), rng)];
  }
  return out;
}

std::vector<size_t> Shuffled(size_t n, Rng& rng) {
  std::vector<size_t> out(n);
  std::iota(out.begin(), out.end(), 0);
  for (size_t i = n; i > 1; --i) std::swap(out[i - 1], out[Pick(i, rng)]);
  return out;
}

}  // namespace vaed::train
