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

#include "vaed/metrics/metrics.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "vaed/common/error.h"

namespace vaed::metrics {

namespace {

void CheckSizes(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw DimensionError("scores and labels differ in length");
}

std::vector<size_t> RankDescending(std::span<const double> scores) {
  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return scores[a] > scores[b]; });
  return order;
}

}  // namespace

std::optional<double> AveragePrecision(std::span<const double> scores, std::span<const int> labels) {
  CheckSizes(scores, labels);
  double sum = 0;
  int hits = 0;
  const std::vector<size_t> order = RankDescending(scores);
  for (size_t k = 0; k < order.size(); ++k) {
    if (labels[order[k]] != 0) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(k + 1);
    }
  }
  if (hits == 0) return std::nullopt;
  return sum / hits;
}

std::optional<double> Auc(std::span<const double> scores, std::span<const int> labels) {
  CheckSizes(scores, labels);
  const size_t n = scores.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return scores[a] < scores[b]; });
  // Midranks (1-based) so ties contribute one half.
  double pos_rank_sum = 0;
  size_t n_pos = 0;
  for (size_t i = 0; i < n;) {
    size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double mid = 0.5 * static_cast<double>(i + 1 + j);
    for (size_t k = i; k < j; ++k) {
      if (labels[order[k]] != 0) {
        pos_rank_sum += mid;
        ++n_pos;
      }
    }
    i = j;
  }
  const size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) return std::nullopt;
  const double np = static_cast<double>(n_pos);
  return (pos_rank_sum - np * (np + 1) / 2) / (np * static_cast<double>(n_neg));
}

double InverseNormalCdf(double p) {
  if (!(p > 0 && p < 1)) throw ValidationError("normal quantile needs p in (0, 1)");
  // Acklam's coefficients.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double lo = 0.02425, hi = 1 - lo;
  double x;
  if (p < lo) {
    const double q = std::sqrt(-2 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  } else if (p <= hi) {
    const double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
  } else {
    const double q = std::sqrt(-2 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  const double u = e * std::sqrt(2 * std::numbers::pi) * std::exp(x * x / 2);
  return x - u / (1 + x * u / 2);
}

double DPrime(double auc) {
  const double a = std::clamp(auc, 1e-6, 1 - 1e-6);
  return std::numbers::sqrt2 * InverseNormalCdf(a);
}

std::vector<PrPoint> PrecisionRecallCurve(std::span<const double> scores, std::span<const int> labels) {
  CheckSizes(scores, labels);
  const double n_pos = static_cast<double>(std::count_if(labels.begin(), labels.end(), [](int l) { return l != 0; }));
  std::vector<PrPoint> out;
  if (n_pos == 0) return out;
  const std::vector<size_t> order = RankDescending(scores);
  double tp = 0;
  for (size_t k = 0; k < order.size(); ++k) {
    tp += labels[order[k]] != 0;
    if (k + 1 < order.size() && scores[order[k + 1]] == scores[order[k]]) continue;
    out.push_back({scores[order[k]], tp / static_cast<double>(k + 1), tp / n_pos});
  }
  return out;
}

EvalReport BuildReport(const std::vector<std::vector<double>>& scores,
                       const std::vector<std::vector<int>>& labels,
                       const std::vector<std::string>& class_names) {
  if (scores.size() != labels.size()) throw DimensionError("scores and labels differ in clip count");
  if (scores.empty()) throw ValidationError("cannot evaluate an empty set");
  const size_t n_classes = scores[0].size();
  EvalReport r;
  r.n_clips = static_cast<int>(scores.size());
  double ap_sum = 0, auc_sum = 0;
  int ap_n = 0, auc_n = 0;
  std::vector<double> s(scores.size());
  std::vector<int> l(scores.size());
  for (size_t c = 0; c < n_classes; ++c) {
    for (size_t i = 0; i < scores.size(); ++i) {
      if (scores[i].size() != n_classes || labels[i].size() != n_classes) {
        throw DimensionError("ragged score or label rows");
      }
      s[i] = scores[i][c];
      l[i] = labels[i][c];
    }
    ClassMetrics m;
    m.index = static_cast<int>(c);
    m.name = c < class_names.size() ? class_names[c] : "class_" + std::to_string(c);
    m.n_pos = static_cast<int>(std::count_if(l.begin(), l.end(), [](int v) { return v != 0; }));
    m.ap = AveragePrecision(s, l);
    m.auc = Auc(s, l);
    if (m.auc) m.d_prime = DPrime(*m.auc);
    if (m.ap) ap_sum += *m.ap, ++ap_n;
    if (m.auc) auc_sum += *m.auc, ++auc_n;
    r.classes.push_back(std::move(m));
  }
  r.map = ap_n ? ap_sum / ap_n : 0.0;
  r.mauc = auc_n ? auc_sum / auc_n : 0.5;
  r.d_prime = DPrime(r.mauc);
  return r;
}

nlohmann::json EvalReport::ToJson() const {
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  nlohmann::json cls = nlohmann::json::array();
  for (const ClassMetrics& m : classes) {
    cls.push_back({{"index", m.index},
                   {"name", m.name},
                   {"n_pos", m.n_pos},
                   {"ap", opt(m.ap)},
                   {"auc", opt(m.auc)},
                   {"d_prime", opt(m.d_prime)},
                   {"excluded", !m.ap.has_value() || !m.auc.has_value()}});
  }
  return {{"mAP", map}, {"mAUC", mauc}, {"d_prime", d_prime}, {"n_clips", n_clips},
          {"classes", cls}, {"meta", meta}};
}

std::string EvalReport::ClassCsv() const {
  std::ostringstream out;
  out << "index,name,n_pos,ap,auc,d_prime\n";
  auto opt = [](const std::optional<double>& v) {
    std::ostringstream s;
    if (v) s << *v;
    return s.str();
  };
  for (const ClassMetrics& m : classes) {
    out << m.index << "," << m.name << "," << m.n_pos << "," << opt(m.ap) << "," << opt(m.auc)
        << "," << opt(m.d_prime) << "\n";
  }
  return out.str();
}

}  // namespace vaed::metrics
