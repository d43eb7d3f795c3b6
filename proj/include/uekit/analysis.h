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

// Comparing methods across metrics, folds and splits: direction-aware
// benefit transform, z-scores over methods, cross-split aggregation, Kendall
// tau-b between metrics, and near-best marking with a paired t-test.
//
// Missing values are dropped and counted, never imputed.

#ifndef UEKIT_ANALYSIS_H_
#define UEKIT_ANALYSIS_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "uekit/core.h"

namespace ue {

using MaybeValue = std::optional<double>;

struct MetricValue {
  MaybeValue value;
  std::string na_reason;  // empty when value is present

  bool is_na() const { return !value.has_value(); }
};

struct MetricKey {
  std::string split;
  int fold = 0;
  std::string method;
  std::string metric;

  auto operator<=>(const MetricKey&) const = default;
};

// (split, fold, method, metric) -> value or NA. Keys iterate in sorted order.
class MetricReport {
 public:
  // Throws if the key already holds an entry.
  void add(MetricKey key, MetricValue value);
  const MetricValue* find(const MetricKey& key) const;

  const std::map<MetricKey, MetricValue>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<MetricKey, MetricValue> entries_;
};

struct Orientation {
  enum class Kind { kHigherBetter, kLowerBetter, kTarget };
  Kind kind = Kind::kHigherBetter;
  double target = 0.0;

  static Orientation Higher() { return {Kind::kHigherBetter, 0.0}; }
  static Orientation Lower() { return {Kind::kLowerBetter, 0.0}; }
  static Orientation Target(double t) { return {Kind::kTarget, t}; }
};

using MetricOrientation = std::map<std::string, Orientation>;

// Orientation of every metric the toolkit produces (CITL -> 0, C-Slope -> 1).
const MetricOrientation& default_orientations();

double benefit(double value, const Orientation& orientation);
// higher -> v, lower -> -v, target(t) -> -|v - t|.
std::vector<double> benefit_transform(const std::string& metric,
                                      std::span<const double> values,
                                      const MetricOrientation& orientations =
                                          default_orientations());

// (b - mean) / std with the population std; std == 0 gives zeros. NA entries
// stay NA; fewer than two valid entries makes everything NA.
std::vector<MaybeValue> zscore_methods(std::span<const MaybeValue> benefits);

struct CrossSplitCell {
  MaybeValue mean_z;
  MaybeValue std_z;  // population std over splits
  int n_splits = 0;  // non-NA contributions
  int skipped = 0;   // NA contributions
};

using ZKey = std::tuple<std::string, std::string, std::string>;  // split, method, metric
using MethodMetric = std::pair<std::string, std::string>;

std::map<MethodMetric, CrossSplitCell> aggregate_cross_language(
    const std::map<ZKey, MaybeValue>& z);

struct KendallResult {
  double tau = 0.0;  // tau-b
  double p = 1.0;    // two-sided, normal approximation with tie correction
  std::size_t n = 0;
};

// O(n log n) tau-b. UndefinedError when n < 2 or either side is all tied.
KendallResult kendall_tau(std::span<const double> x, std::span<const double> y);
// Drops positions where either side is NA before computing.
KendallResult kendall_tau(std::span<const MaybeValue> x,
                          std::span<const MaybeValue> y);

enum class NearBestLabel { kBest, kNearBest, kOther };
const char* to_string(NearBestLabel label);

struct MethodFolds {
  std::string method;
  std::vector<double> values;  // one raw metric value per fold
};

inline constexpr double kNearBestAlpha = 0.05;

// Two-sided paired t-test p-value for mean(diff) == 0. A zero-variance
// difference gives 1 when the mean is 0 and 0 otherwise.
double paired_t_test(std::span<const double> a, std::span<const double> b);

// Best = highest mean benefit (first in input order on ties); others are
// near-best when the paired t-test against the best gives p >= 0.05.
std::vector<std::pair<std::string, NearBestLabel>> near_best(
    std::span<const MethodFolds> per_fold, const Orientation& orientation);

}  // namespace ue

#endif  // UEKIT_ANALYSIS_H_
