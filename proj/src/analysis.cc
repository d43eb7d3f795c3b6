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

#include "uekit/analysis.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

namespace ue {

void MetricReport::add(MetricKey key, MetricValue value) {
  auto [it, inserted] = entries_.emplace(std::move(key), std::move(value));
  if (!inserted) {
    throw Error("duplicate metric entry for " + it->first.split + "/" +
                std::to_string(it->first.fold) + "/" + it->first.method + "/" +
                it->first.metric);
  }
}

const MetricValue* MetricReport::find(const MetricKey& key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

const MetricOrientation& default_orientations() {
  static const MetricOrientation kOrientations = {
      {"roc_auc", Orientation::Higher()},  {"au_prc", Orientation::Higher()},
      {"c_slope", Orientation::Target(1.0)}, {"citl", Orientation::Target(0.0)},
      {"ece", Orientation::Lower()},       {"rc_auc", Orientation::Lower()},
      {"nrc_auc", Orientation::Higher()},  {"e_auoptrc", Orientation::Lower()},
      {"ti", Orientation::Higher()},       {"ti95", Orientation::Higher()},
  };
  return kOrientations;
}

double benefit(double value, const Orientation& o) {
  switch (o.kind) {
    case Orientation::Kind::kHigherBetter:
      return value;
    case Orientation::Kind::kLowerBetter:
      return -value;
    case Orientation::Kind::kTarget:
      return -std::fabs(value - o.target);
  }
  return value;
}

std::vector<double> benefit_transform(const std::string& metric,
                                      std::span<const double> values,
                                      const MetricOrientation& orientations) {
  auto it = orientations.find(metric);
  if (it == orientations.end()) {
    throw Error("benefit_transform: unknown metric '" + metric + "'");
  }
  std::vector<double> out;
  out.reserve(values.size());
  for (double v : values) out.push_back(benefit(v, it->second));
  return out;
}

std::vector<MaybeValue> zscore_methods(std::span<const MaybeValue> benefits) {
  std::vector<MaybeValue> out(benefits.size());
  double sum = 0.0;
  int valid = 0;
  for (const auto& b : benefits) {
    if (b) {
      sum += *b;
      ++valid;
    }
  }
  if (valid < 2) return out;
  const double mean = sum / valid;
  double ss = 0.0;
  for (const auto& b : benefits) {
    if (b) ss += (*b - mean) * (*b - mean);
  }
  const double sd = std::sqrt(ss / valid);
  for (std::size_t i = 0; i < benefits.size(); ++i) {
    if (!benefits[i]) continue;
    out[i] = sd > 0.0 ? (*benefits[i] - mean) / sd : 0.0;
  }
  return out;
}

std::map<MethodMetric, CrossSplitCell> aggregate_cross_language(
    const std::map<ZKey, MaybeValue>& z) {
  std::map<MethodMetric, std::vector<double>> values;
  std::map<MethodMetric, CrossSplitCell> out;
  for (const auto& [key, v] : z) {
    const MethodMetric cell{std::get<1>(key), std::get<2>(key)};
    auto& agg = out[cell];
    if (v) {
      values[cell].push_back(*v);
      ++agg.n_splits;
    } else {
      ++agg.skipped;
    }
  }
  for (auto& [cell, agg] : out) {
    const auto& v = values[cell];
    if (v.empty()) continue;
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    agg.mean_z = mean;
    agg.std_z = std::sqrt(ss / v.size());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Kendall tau-b (Knight's algorithm)

namespace {

// Sorts `v` and returns the number of strictly inverted pairs.
long long merge_count(std::vector<double>& v, std::vector<double>& buf,
                      std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  long long swaps = merge_count(v, buf, lo, mid) + merge_count(v, buf, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      swaps += static_cast<long long>(mid - i);
      buf[k++] = v[j++];
    } else {
      buf[k++] = v[i++];
    }
  }
  while (i < mid) buf[k++] = v[i++];
  while (j < hi) buf[k++] = v[j++];
  std::copy(buf.begin() + lo, buf.begin() + hi, v.begin() + lo);
  return swaps;
}

struct TieSums {
  double pairs = 0.0;  // sum t(t-1)/2
  double v1 = 0.0;     // sum t(t-1)
  double v2 = 0.0;     // sum t(t-1)(t-2)
  double v5 = 0.0;     // sum t(t-1)(2t+5)

  void add(double t) {
    pairs += t * (t - 1) / 2;
    v1 += t * (t - 1);
    v2 += t * (t - 1) * (t - 2);
    v5 += t * (t - 1) * (2 * t + 5);
  }
};

// Tie groups of an already sorted sequence.
TieSums sorted_ties(const std::vector<double>& v) {
  TieSums s;
  std::size_t i = 0;
  while (i < v.size()) {
    std::size_t j = i + 1;
    while (j < v.size() && v[j] == v[i]) ++j;
    s.add(static_cast<double>(j - i));
    i = j;
  }
  return s;
}

}  // namespace

KendallResult kendall_tau(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error("kendall_tau: length mismatch");
  const std::size_t n = x.size();
  if (n < 2) throw UndefinedError("kendall_tau: needs at least two pairs");

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]);
  });

  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = x[idx[i]];
    ys[i] = y[idx[i]];
  }
  const TieSums tx = sorted_ties(xs);
  double joint = 0.0;
  {
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i + 1;
      while (j < n && xs[j] == xs[i] && ys[j] == ys[i]) ++j;
      const double t = static_cast<double>(j - i);
      joint += t * (t - 1) / 2;
      i = j;
    }
  }
  std::vector<double> buf(n);
  const long long discordant = merge_count(ys, buf, 0, n);
  const TieSums ty = sorted_ties(ys);

  const double nn = static_cast<double>(n);
  const double n0 = nn * (nn - 1) / 2;
  if (tx.pairs == n0 || ty.pairs == n0) {
    throw UndefinedError("kendall_tau: one side is entirely tied");
  }
  const double nd = static_cast<double>(discordant);
  const double nc = n0 - tx.pairs - ty.pairs + joint - nd;
  const double s = nc - nd;

  KendallResult r;
  r.n = n;
  r.tau = s / std::sqrt((n0 - tx.pairs) * (n0 - ty.pairs));
  const double m = nn * (nn - 1);
  double var = (m * (2 * nn + 5) - tx.v5 - ty.v5) / 18.0 +
               tx.v1 * ty.v1 / (2.0 * m);
  if (n > 2) var += tx.v2 * ty.v2 / (9.0 * m * (nn - 2));
  r.p = var > 0.0 ? std::erfc(std::fabs(s) / std::sqrt(var) / std::sqrt(2.0)) : 1.0;
  r.p = std::clamp(r.p, 0.0, 1.0);
  return r;
}

KendallResult kendall_tau(std::span<const MaybeValue> x,
                          std::span<const MaybeValue> y) {
  if (x.size() != y.size()) throw Error("kendall_tau: length mismatch");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] && y[i]) {
      xs.push_back(*x[i]);
      ys.push_back(*y[i]);
    }
  }
  return kendall_tau(std::span<const double>(xs), std::span<const double>(ys));
}

// ---------------------------------------------------------------------------
// Near-best marking

const char* to_string(NearBestLabel label) {
  switch (label) {
    case NearBestLabel::kBest:
      return "best";
    case NearBestLabel::kNearBest:
      return "near_best";
    case NearBestLabel::kOther:
      return "other";
  }
  return "other";
}

double paired_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error("paired_t_test: length mismatch");
  const std::size_t f = a.size();
  if (f < 2) throw Error("paired_t_test: needs at least two folds");
  std::vector<double> d(f);
  for (std::size_t i = 0; i < f; ++i) d[i] = a[i] - b[i];
  const double mean = std::accumulate(d.begin(), d.end(), 0.0) / f;
  double ss = 0.0;
  for (double x : d) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / (f - 1));
  if (!(sd > 0.0)) return mean == 0.0 ? 1.0 : 0.0;
  const double t = mean / (sd / std::sqrt(static_cast<double>(f)));
  const boost::math::students_t dist(static_cast<double>(f - 1));
  return std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t))));
}

std::vector<std::pair<std::string, NearBestLabel>> near_best(
    std::span<const MethodFolds> per_fold, const Orientation& orientation) {
  if (per_fold.empty()) throw Error("near_best: no methods");
  const std::size_t folds = per_fold.front().values.size();
  if (folds < 2) throw Error("near_best: at least two folds are required");
  std::vector<std::vector<double>> benefits;
  std::size_t best = 0;
  double best_mean = 0.0;
  for (std::size_t m = 0; m < per_fold.size(); ++m) {
    if (per_fold[m].values.size() != folds) {
      throw Error("near_best: fold-count mismatch for method " +
                  per_fold[m].method);
    }
    std::vector<double> b;
    for (double v : per_fold[m].values) b.push_back(benefit(v, orientation));
    const double mean = std::accumulate(b.begin(), b.end(), 0.0) / folds;
    if (m == 0 || mean > best_mean) {
      best = m;
      best_mean = mean;
    }
    benefits.push_back(std::move(b));
  }
  std::vector<std::pair<std::string, NearBestLabel>> out;
  for (std::size_t m = 0; m < per_fold.size(); ++m) {
    NearBestLabel label = NearBestLabel::kBest;
    if (m != best) {
      const double p = paired_t_test(benefits[best], benefits[m]);
      label = p >= kNearBestAlpha ? NearBestLabel::kNearBest : NearBestLabel::kOther;
    }
    out.emplace_back(per_fold[m].method, label);
  }
  return out;
}

}  // namespace ue
