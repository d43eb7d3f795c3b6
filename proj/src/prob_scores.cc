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

#include "uekit/prob_scores.h"

#include <algorithm>
#include <cmath>

namespace ue {
namespace {

constexpr double kLogFloor = 1e-300;
constexpr double kBaldClamp = -1e-12;

double plogp(double p) {
  if (p <= 0.0) return 0.0;
  return p * std::log(std::clamp(p, kLogFloor, 1.0));
}

void check_passes(const PassMatrix& passes) {
  if (passes.empty()) throw Error("at least one stochastic pass is required");
  const std::size_t c = passes.front().size();
  if (c == 0) throw Error("empty probability row");
  for (const auto& row : passes) {
    if (row.size() != c) throw Error("ragged pass matrix");
  }
}

// Running mean; returns x exactly when every element equals x.
template <typename Range, typename F>
double running_mean(const Range& items, F value) {
  double m = 0.0;
  double k = 0.0;
  for (const auto& item : items) {
    k += 1.0;
    m += (value(item) - m) / k;
  }
  return m;
}

}  // namespace

std::vector<double> mean_over_passes(const PassMatrix& passes) {
  check_passes(passes);
  std::vector<double> mean(passes.front().size(), 0.0);
  for (std::size_t c = 0; c < mean.size(); ++c) {
    mean[c] = running_mean(passes, [c](const auto& row) { return row[c]; });
  }
  return mean;
}

ProbabilityProfile::ProbabilityProfile(std::vector<double> det,
                                       PassMatrix passes)
    : det_(std::move(det)),
      passes_(std::move(passes)),
      mean_(mean_over_passes(passes_)) {
  if (det_.size() != mean_.size()) {
    throw Error("deterministic and stochastic class counts differ");
  }
}

ProbabilityProfile::ProbabilityProfile(const PredictionRecord& record)
    : ProbabilityProfile(record.det_probs, record.mc_probs) {}

double sr(std::span<const double> det) {
  if (det.empty()) throw Error("sr: empty probability vector");
  return 1.0 - *std::max_element(det.begin(), det.end());
}

double smp(const PassMatrix& passes) { return sr(mean_over_passes(passes)); }

double ent(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs) h -= plogp(p);
  return h;
}

double ent_mc(const PassMatrix& passes) {
  return ent(mean_over_passes(passes));
}

double pv(const PassMatrix& passes) {
  const std::vector<double> mean = mean_over_passes(passes);
  double total = 0.0;
  for (std::size_t c = 0; c < mean.size(); ++c) {
    double var = 0.0;
    for (const auto& row : passes) {
      const double d = row[c] - mean[c];
      var += d * d;
    }
    total += var / static_cast<double>(passes.size());
  }
  return total / static_cast<double>(mean.size());
}

double bald_unclamped(const PassMatrix& passes) {
  check_passes(passes);
  const double mean_entropy =
      running_mean(passes, [](const auto& row) { return ent(row); });
  return ent_mc(passes) - mean_entropy;
}

double bald(const PassMatrix& passes) {
  const double mi = bald_unclamped(passes);
  if (mi < 0.0 && mi >= kBaldClamp) return 0.0;
  return mi;
}

}  // namespace ue
