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

// Selective prediction: retain the most confident instances and measure what
// happens to risk (0/1 error) and macro-F1 as coverage shrinks.
//
// Every ordering here is (confidence descending, input index ascending), so
// results are deterministic under ties. Areas under the risk-coverage curve
// are averaged over the n coverage levels k/n and therefore lie in [0,1].

#ifndef UEKIT_SELECTIVE_H_
#define UEKIT_SELECTIVE_H_

#include <span>
#include <vector>

#include "uekit/core.h"

namespace ue {

// floor(fraction * n), tolerant of fractions like 0.15 that are not exactly
// representable in binary.
std::size_t count_for_fraction(double fraction, std::size_t n);

// Instance indices by descending confidence, stable on ties.
std::vector<std::size_t> confidence_order(const ConfidenceVector& confidence);

struct RiskCoverageCurve {
  std::size_t n = 0;
  std::vector<std::size_t> order;
  // prefix_risk[k-1] = error rate among the k most confident instances.
  std::vector<double> prefix_risk;
};

RiskCoverageCurve rc_curve(const ConfidenceVector& confidence,
                           const CorrectnessVector& correct);

double rc_auc(const RiskCoverageCurve& curve);

struct RcBaselines {
  double oracle = 0.0;  // correct instances first
  double random = 0.0;  // expectation over uniform orderings = error rate
};

RcBaselines rc_auc_baselines(const CorrectnessVector& correct);

// (model - random) / (oracle - random); 1 at the oracle, 0 at random.
// UndefinedError when oracle == random (all-correct or all-wrong splits).
double nrc_auc(double model, double oracle, double random);

// Area up to coverage k* = floor(full_set_macro_f1 * n), same 1/n scale.
double e_auoptrc(const RiskCoverageCurve& curve, double full_set_macro_f1);

inline constexpr double kTi95Coverage = 0.95;

struct TrustMode {
  bool optimal = true;
  double coverage = 1.0;  // used when !optimal

  static TrustMode Optimal() { return {true, 1.0}; }
  static TrustMode Fixed(double coverage) { return {false, coverage}; }
};

struct TrustResult {
  double f1 = 0.0;
  double coverage_used = 0.0;
};

// Macro-F1 of the most confident prefix. Fixed mode keeps
// max(1, floor(coverage * n)) instances; optimal mode takes the best prefix,
// preferring the larger coverage on equal F1.
TrustResult trust_index(const ConfidenceVector& confidence,
                        std::span<const int> preds, std::span<const int> labels,
                        int class_count, TrustMode mode);

inline const std::vector<double> kDefaultSweepThresholds = {0.01, 0.05, 0.10,
                                                            0.15};

struct SweepRow {
  double threshold = 0.0;
  std::size_t n = 0;
  std::size_t rejected_count = 0;
  double full_f1 = 0.0;
  double retained_f1 = 0.0;
  double delta_f1 = 0.0;  // percentage points
  double pct_incorrect_rejected = 0.0;
};

struct SweepReport {
  std::vector<SweepRow> rows;
};

// Rejects the floor(theta * n) least confident instances for each theta.
SweepReport abstention_sweep(const ConfidenceVector& confidence,
                             std::span<const int> preds,
                             std::span<const int> labels, int class_count,
                             std::span<const double> thresholds);

}  // namespace ue

#endif  // UEKIT_SELECTIVE_H_
