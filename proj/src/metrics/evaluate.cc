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

#include "vaed/metrics/evaluate.h"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "vaed/common/error.h"
#include "vaed/common/faed.h"
#include "vaed/nn/loss.h"

namespace vaed::metrics {

namespace {

std::vector<size_t> Range(size_t begin, size_t end) {
  std::vector<size_t> idx(end - begin);
  std::iota(idx.begin(), idx.end(), begin);
  return idx;
}

}  // namespace

AedScores ScoreAed(models::AedModel& model, const data::AedSet& set, int batch_size) {
  if (set.size() == 0) throw ValidationError("evaluation set is empty");
  const bool dual = model.spec().mode == models::BranchMode::kDual;
  if (dual && set.embedding.size() != set.size()) {
    throw FusionError("dual-branch evaluation needs an embedding for every clip");
  }
  const int C = set.num_classes;
  AedScores out;
  double loss_sum = 0;
  for (size_t b = 0; b < set.size(); b += static_cast<size_t>(batch_size)) {
    const auto idx = Range(b, std::min(set.size(), b + static_cast<size_t>(batch_size)));
    const TensorF x = data::StackRows(set.logmel, idx);
    const TensorF target = data::MultiHot(set.labels, idx, C);
    TensorF e;
    if (dual) e = data::StackRows(set.embedding, idx);
    const auto o = model.Forward(x, dual ? &e : nullptr, nn::Mode::kEval);
    loss_sum += nn::BinaryCrossEntropy<float>(o.clip_probs, target, nullptr) * idx.size();
    for (size_t i = 0; i < idx.size(); ++i) {
      std::vector<double> row(C);
      std::vector<int> truth(C);
      for (int c = 0; c < C; ++c) {
        row[c] = o.clip_probs.data()[i * C + c];
        truth[c] = target.data()[i * C + c] > 0.5f ? 1 : 0;
      }
      out.clip.push_back(std::move(row));
      out.truth.push_back(std::move(truth));
    }
  }
  out.loss = loss_sum / static_cast<double>(set.size());
  return out;
}

EvalReport EvaluateAed(models::AedModel& model, const data::AedSet& set,
                       const std::vector<std::string>& class_names, int batch_size) {
  const AedScores s = ScoreAed(model, set, batch_size);
  EvalReport r = BuildReport(s.clip, s.truth, class_names);
  r.meta["loss"] = s.loss;
  return r;
}

SpeakerScores ScoreSpeaker(models::SpeakerModel& model, const data::SpeakerSet& set,
                           int batch_size) {
  if (set.size() == 0) throw ValidationError("evaluation set is empty");
  double loss_sum = 0;
  size_t correct = 0;
  for (size_t b = 0; b < set.size(); b += static_cast<size_t>(batch_size)) {
    const auto idx = Range(b, std::min(set.size(), b + static_cast<size_t>(batch_size)));
    const TensorF x = data::StackRows(set.logmel, idx);
    std::vector<int> y;
    for (size_t i : idx) y.push_back(set.speaker[i]);
    const auto o = model.Forward(x, nn::Mode::kEval);
    loss_sum += nn::CrossEntropy<float>(o.logits, y, nullptr) * idx.size();
    const int K = o.logits.dim(1);
    for (size_t i = 0; i < idx.size(); ++i) {
      const float* row = o.logits.data() + i * K;
      if (std::max_element(row, row + K) - row == y[i]) ++correct;
    }
  }
  return {static_cast<double>(correct) / set.size(), loss_sum / set.size()};
}

void WriteReport(const EvalReport& report, const AedScores& scores,
                 const std::filesystem::path& dir) {
  WriteFileBytes(dir / "report.json", report.ToJson().dump(2) + "\n");
  WriteFileBytes(dir / "classes.csv", report.ClassCsv());
  for (const ClassMetrics& m : report.classes) {
    std::vector<double> s;
    std::vector<int> y;
    for (size_t i = 0; i < scores.clip.size(); ++i) {
      s.push_back(scores.clip[i][m.index]);
      y.push_back(scores.truth[i][m.index]);
    }
    std::ostringstream out;
    out << "threshold,precision,recall\n";
    for (const PrPoint& p : PrecisionRecallCurve(s, y)) {
      out << p.threshold << "," << p.precision << "," << p.recall << "\n";
    }
    WriteFileBytes(dir / "pr" / (m.name + ".csv"), out.str());
  }
}

}  // namespace vaed::metrics
