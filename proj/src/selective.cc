// Copyright 2026 The uekit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "uekit/selective.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace ue {
namespace {

constexpr double kFractionSlack = 1e-9;

void check_inputs(std::size_t n_conf, std::span<const int> preds,
                  std::span<const int> labels, const char* who) {
  if (n_conf == 0) throw Error(std::string(who) + ": empty input");
  if (preds.size() != n_conf || labels.size() != n_conf) {
    throw Error(std::string(who) + ": length mismatch");
  }
}

// Macro-F1 over the instances order[0..k) for every k, built incrementally.
class PrefixF1 {
 public:
  explicit PrefixF1(int class_count)
      : tp_(class_count, 0), fp_(class_count, 0), fn_(class_count, 0) {}

  void add(int pred, int label) {
    if (pred < 0 || pred >= static_cast<int>(tp_.size()) || label < 0 ||
        label >= static_cast<int>(tp_.size())) {
      throw Error("class index out of range");
    }
    if (pred == label) {
      ++tp_[pred];
    } else {
      ++fp_[pred];
      ++fn_[label];
    }
  }

  double value() const { return macro_f1_from_counts(tp_, fp_, fn_); }

 private:
  std::vector<long> tp_, fp_, fn_;
};

double subset_f1(std::span<const std::size_t> idx, std::span<const int> preds,
                 std::span<const int> labels, int class_count) {
  std::vector<int> p, y;
  p.reserve(idx.size());
  y.reserve(idx.size());
  for (auto i : idx) {
    p.push_back(preds[i]);
    y.push_back(labels[i]);
  }
  return macro_f1(p, y, class_count);
}

}  // namespace

std::size_t count_for_fraction(double fraction, std::size_t n) {
  const double k = std::floor(fraction * static_cast<double>(n) + kFractionSlack);
  if (k <= 0.0) return 0;
  return std::min(n, static_cast<std::size_t>(k));
}

std::vector<std::size_t> confidence_order(const ConfidenceVector& confidence) {
  std::vector<std::size_t> order(confidence.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return confidence.values[a] > confidence.values[b];
  });
  return order;
}

RiskCoverageCurve rc_curve(const ConfidenceVector& confidence,
                           const CorrectnessVector& correct) {
  if (confidence.size() == 0) throw Error("rc_curve: empty input");
  if (confidence.size() != correct.size()) throw Error("rc_curve: length mismatch");
  RiskCoverageCurve curve;
  curve.n = confidence.size();
  curve.order = confidence_order(confidence);
  curve.prefix_risk.resize(curve.n);
  long errors = 0;
  for (std::size_t k = 0; k < curve.n; ++k) {
    errors += 1 - correct.values[curve.order[k]];
    curve.prefix_risk[k] = static_cast<double>(errors) / static_cast<double>(k + 1);
  }
  return curve;
}

double rc_auc(const RiskCoverageCurve& curve) {
  if (curve.n == 0) throw Error("rc_auc: empty curve");
  double sum = 0.0;
  for (double r : curve.prefix_risk) sum += r;
  return sum / static_cast<double>(curve.n);
}

RcBaselines rc_auc_baselines(const CorrectnessVector& correct) {
  if (correct.size() == 0) throw Error("rc_auc_baselines: empty input");
  ConfidenceVector oracle_conf;
  oracle_conf.values.assign(correct.values.begin(), correct.values.end());
  RcBaselines b;
  b.oracle = rc_auc(rc_curve(oracle_conf, correct));
  b.random = static_cast<double>(correct.error_count()) /
             static_cast<double>(correct.size());
  return b;
}

double nrc_auc(double model, double oracle, double random) {
  if (oracle == random) {
    throw UndefinedError("nrc_auc: oracle and random baselines coincide");
  }
  return (model - random) / (oracle - random);
}

double e_auoptrc(const RiskCoverageCurve& curve, double full_set_macro_f1) {
  if (!(full_set_macro_f1 >= 0.0 && full_set_macro_f1 <= 1.0)) {
    throw Error("e_auoptrc: macro-F1 must lie in [0,1]");
  }
  const std::size_t k_star = count_for_fraction(full_set_macro_f1, curve.n);
  double sum = 0.0;
  for (std::size_t k = 0; k < k_star; ++k) sum += curve.prefix_risk[k];
  return sum / static_cast<double>(curve.n);
}

TrustResult trust_index(const ConfidenceVector& confidence,
                        std::span<const int> preds, std::span<const int> labels,
                        int class_count, TrustMode mode) {
  check_inputs(confidence.size(), preds, labels, "trust_index");
  const std::size_t n = confidence.size();
  const auto order = confidence_order(confidence);
  const double dn = static_cast<double>(n);
  if (!mode.optimal) {
    if (!(mode.coverage > 0.0 && mode.coverage <= 1.0)) {
      throw Error("trust_index: coverage must lie in (0,1]");
    }
    const std::size_t k = std::max<std::size_t>(1, count_for_fraction(mode.coverage, n));
    return {subset_f1(std::span(order).first(k), preds, labels, class_count),
            static_cast<double>(k) / dn};
  }
  PrefixF1 prefix(class_count);
  TrustResult best{-1.0, 0.0};
  for (std::size_t k = 0; k < n; ++k) {
    prefix.add(preds[order[k]], labels[order[k]]);
    const double f1 = prefix.value();
    if (f1 >= best.f1) best = {f1, static_cast<double>(k + 1) / dn};
  }
  return best;
}

SweepReport abstention_sweep(const ConfidenceVector& confidence,
                             std::span<const int> preds,
                             std::span<const int> labels, int class_count,
                             std::span<const double> thresholds) {
  check_inputs(confidence.size(), preds, labels, "abstention_sweep");
  const std::size_t n = confidence.size();
  const auto order = confidence_order(confidence);
  const double full = subset_f1(order, preds, labels, class_count);
  SweepReport report;
  for (double theta : thresholds) {
    if (!(theta >= 0.0 && theta < 1.0)) {
      throw Error("abstention_sweep: threshold must lie in [0,1)");
    }
    SweepRow row;
    row.threshold = theta;
    row.n = n;
    row.full_f1 = full;
    row.rejected_count = count_for_fraction(theta, n);
    const std::size_t kept = n - row.rejected_count;
    const auto retained = std::span(order).first(kept);
    row.retained_f1 = kept == n ? full : subset_f1(retained, preds, labels, class_count);
    row.delta_f1 = 100.0 * (row.retained_f1 - full);
    std::size_t rejected_errors = 0;
    for (std::size_t k = kept; k < n; ++k) {
      rejected_errors += preds[order[k]] != labels[order[k]] ? 1 : 0;
    }
    row.pct_incorrect_rejected =
        100.0 * static_cast<double>(rejected_errors) /
        static_cast<double>(std::max<std::size_t>(1, row.rejected_count));
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace ue
