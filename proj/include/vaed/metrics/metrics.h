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

#ifndef VAED_METRICS_METRICS_H_
#define VAED_METRICS_METRICS_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace vaed::metrics {

// Mean of precision@k over the ranks k of the positives, ranking by
// descending score with ties kept in original order. nullopt without positives.
std::optional<double> AveragePrecision(std::span<const double> scores, std::span<const int> labels);

// Mann-Whitney estimate P(s+ > s-) + P(s+ == s-) / 2. nullopt unless both
// classes are present.
std::optional<double> Auc(std::span<const double> scores, std::span<const int> labels);

// Standard normal quantile; rational approximation refined by one Halley
// step, accurate to well below 1e-9 on (0, 1).
double InverseNormalCdf(double p);

// sqrt(2) * InverseNormalCdf(auc) with auc clamped to [1e-6, 1 - 1e-6].
double DPrime(double auc);

struct PrPoint {
  double threshold;
  double precision;
  double recall;
};
// One point per distinct score, descending thresholds.
std::vector<PrPoint> PrecisionRecallCurve(std::span<const double> scores, std::span<const int> labels);

struct ClassMetrics {
  int index = 0;
  std::string name;
  int n_pos = 0;
  std::optional<double> ap;
  std::optional<double> auc;
  std::optional<double> d_prime;
};

// Aggregates are unweighted means over the classes whose metric is defined.
struct EvalReport {
  std::vector<ClassMetrics> classes;
  double map = 0;
  double mauc = 0;
  double d_prime = 0;  // of mAUC
  int n_clips = 0;
  nlohmann::json meta = nlohmann::json::object();

  nlohmann::json ToJson() const;
  std::string ClassCsv() const;
};

// scores[n][c] and binary labels[n][c].
EvalReport BuildReport(const std::vector<std::vector<double>>& scores,
                       const std::vector<std::vector<int>>& labels,
                       const std::vector<std::string>& class_names = {});

}  // namespace vaed::metrics

#endif  // VAED_METRICS_METRICS_H_
