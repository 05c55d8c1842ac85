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

#include "vaed/augment/augment.h"

#include <algorithm>
#include <numeric>
#include <sstream>

#include <glog/logging.h>

#include "vaed/common/error.h"

namespace vaed::augment {

void AugmentConfig::Validate() const {
  if (time_mask_width < 0 || time_mask_width > 100) {
    throw ValidationError("time mask width must be in [0, 100], got " +
                          std::to_string(time_mask_width));
  }
  if (!(mixup_alpha > 0)) throw ValidationError("mixup alpha must be positive");
  if (!(voice_dropout_p >= 0 && voice_dropout_p < 1)) {
    throw ValidationError("voice dropout probability must be in [0, 1)");
  }
}

AugmentConfig AugmentConfig::Parse(const std::string& enable) {
  AugmentConfig c;
  if (enable == "none" || enable.empty()) return c;
  if (enable == "all") {
    c.mixup = c.time_mask = c.voice_dropout = true;
    return c;
  }
  std::stringstream ss(enable);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "mixup") {
      c.mixup = true;
    } else if (item == "tmask") {
      c.time_mask = true;
    } else if (item == "dropout") {
      c.voice_dropout = true;
    } else {
      throw ValidationError("unknown augmentation '" + item +
                            "' (expected none, all, or a list of mixup,tmask,dropout)");
    }
  }
  return c;
}

std::string AugmentConfig::EnableString() const {
  if (!any()) return "none";
  if (mixup && time_mask && voice_dropout) return "all";
  std::string out;
  auto add = [&out](const char* s) { out += (out.empty() ? "" : ",") + std::string(s); };
  if (mixup) add("mixup");
  if (time_mask) add("tmask");
  if (voice_dropout) add("dropout");
  return out;
}

void TimeMask(TensorF* embedding, int width, Rng& rng, bool independent_frames) {
  const bool batched = embedding->ndim() == 3;
  const int n = batched ? embedding->dim(0) : 1;
  const int frames = embedding->dim(-2);
  const int dim = embedding->dim(-1);
  if (width < 0 || width > frames) {
    throw ValidationError("time mask width " + std::to_string(width) + " outside [0, " +
                          std::to_string(frames) + "]");
  }
  if (width == 0) return;
  std::vector<int> order(static_cast<size_t>(frames));
  for (int b = 0; b < n; ++b) {
    float* base = embedding->data() + static_cast<size_t>(b) * frames * dim;
    auto zero_row = [&](int t) { std::fill_n(base + static_cast<size_t>(t) * dim, dim, 0.0f); };
    if (independent_frames) {
      // Partial Fisher-Yates: the first `width` entries are a uniform subset.
      std::iota(order.begin(), order.end(), 0);
      for (int i = 0; i < width; ++i) {
        std::swap(order[i], order[UniformInt(rng, i, frames - 1)]);
        zero_row(order[i]);
      }
    } else {
      const int start = static_cast<int>(UniformInt(rng, 0, frames - width));
      for (int t = start; t < start + width; ++t) zero_row(t);
    }
  }
}

void VoiceDropout(TensorF* embedding, double p, nn::Mode mode, Rng& rng) {
  if (!(p >= 0 && p < 1)) throw ValidationError("voice dropout probability must be in [0, 1)");
  if (mode == nn::Mode::kEval || p == 0.0) return;
  const float scale = static_cast<float>(1.0 / (1.0 - p));
  for (float& v : embedding->storage()) v = UniformReal(rng, 0.0, 1.0) < p ? 0.0f : v * scale;
}

namespace {

void MixRows(TensorF* t, const MixupDraw& d) {
  if (t == nullptr) return;
  const int n = t->dim(0);
  const size_t row = t->size() / static_cast<size_t>(n);
  const TensorF src = *t;
  for (int i = 0; i < n; ++i) {
    const float l = static_cast<float>(d.lambda[i]);
    const float* a = src.data() + i * row;
    const float* b = src.data() + static_cast<size_t>(d.partner[i]) * row;
    float* out = t->data() + i * row;
    // Equal sources stay exact so doubly positive labels remain 1.
    for (size_t k = 0; k < row; ++k) out[k] = a[k] == b[k] ? a[k] : l * a[k] + (1.0f - l) * b[k];
  }
}

}  // namespace

MixupDraw Mixup(TensorF* logmel, TensorF* embedding, TensorF* labels, double alpha, Rng& rng,
                std::optional<double> forced_lambda) {
  if (!(alpha > 0)) throw ValidationError("mixup alpha must be positive");
  const int n = labels->dim(0);
  if (logmel->dim(0) != n || (embedding != nullptr && embedding->dim(0) != n)) {
    throw DimensionError("mixup batch tensors disagree on batch size");
  }
  MixupDraw d;
  d.partner.resize(static_cast<size_t>(n));
  std::iota(d.partner.begin(), d.partner.end(), 0);
  d.lambda.assign(static_cast<size_t>(n), 1.0);
  if (n < 2) {
    LOG(WARNING) << "mixup needs a batch of at least 2; batch of " << n << " left unchanged";
    return d;
  }
  for (int i = n - 1; i > 0; --i) std::swap(d.partner[i], d.partner[UniformInt(rng, 0, i)]);
  for (double& l : d.lambda) l = forced_lambda ? *forced_lambda : Beta(rng, alpha, alpha);
  MixRows(logmel, d);
  MixRows(embedding, d);
  MixRows(labels, d);
  return d;
}

}  // namespace vaed::augment
