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

#include "uekit/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace ue {
namespace {

void check_lengths(const CorrectnessVector& correct, std::size_t other,
                   const char* who) {
  if (correct.size() != other) {
    throw Error(std::string(who) + ": length mismatch (" +
                std::to_string(correct.size()) + " vs " +
                std::to_string(other) + ")");
  }
  if (correct.size() == 0) throw Error(std::string(who) + ": empty input");
}

}  // namespace

double roc_auc(const CorrectnessVector& correct,
               const ConfidenceVector& confidence) {
  check_lengths(correct, confidence.size(), "roc_auc");
  const std::size_t n = correct.size();
  const std::size_t pos = correct.correct_count();
  const std::size_t neg = n - pos;
  if (pos == 0 || neg == 0) {
    throw UndefinedError("roc_auc: needs both correct and incorrect predictions");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return confidence.values[a] < confidence.values[b];
  });
  // Sum of 1-based average ranks of the positives; doubled to stay integral.
  long long twice_rank_sum = 0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && confidence.values[order[j]] == confidence.values[order[i]]) ++j;
    long long positives = 0;
    for (std::size_t t = i; t < j; ++t) positives += correct.values[order[t]];
    twice_rank_sum += positives * static_cast<long long>(i + 1 + j);
    i = j;
  }
  const long long p = static_cast<long long>(pos);
  // U = R - p(p+1)/2 counts concordant pairs plus half the tied ones.
  const double u = 0.5 * static_cast<double>(twice_rank_sum - p * (p + 1));
  return u / (static_cast<double>(pos) * static_cast<double>(neg));
}

AveragePrecision au_prc_detailed(const CorrectnessVector& correct,
                                 const ScoreVector& uncertainty) {
  check_lengths(correct, uncertainty.size(), "au_prc");
  const std::size_t errors = correct.error_count();
  if (errors == 0) throw UndefinedError("au_prc: no incorrect predictions");
  const std::size_t n = correct.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return uncertainty.values[a] > uncertainty.values[b];
  });
  AveragePrecision out;
  std::size_t hits = 0;
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0 && uncertainty.values[order[k]] == uncertainty.values[order[k - 1]]) {
      out.has_ties = true;
    }
    if (correct.values[order[k]] == 0) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(k + 1);
    }
  }
  out.value = sum / static_cast<double>(errors);
  return out;
}

CalibrationFit c_slope(const CorrectnessVector& correct,
                       const ConfidenceVector& confidence) {
  check_lengths(correct, confidence.size(), "c_slope");
  const std::size_t n = correct.size();
  if (n < 2) throw UndefinedError("c_slope: needs at least two instances");
  double mean_c = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_c += confidence.values[i];
    mean_y += correct.values[i];
  }
  mean_c /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dc = confidence.values[i] - mean_c;
    sxx += dc * dc;
    sxy += dc * (correct.values[i] - mean_y);
  }
  if (!(sxx > 0.0)) throw UndefinedError("c_slope: confidence has zero variance");
  CalibrationFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_c;
  fit.n = n;
  return fit;
}

double citl(const CorrectnessVector& correct,
            const ConfidenceVector& confidence) {
  check_lengths(correct, confidence.size(), "citl");
  double sum_c = 0.0, sum_y = 0.0;
  for (std::size_t i = 0; i < correct.size(); ++i) {
    sum_c += confidence.values[i];
    sum_y += correct.values[i];
  }
  const double n = static_cast<double>(correct.size());
  return sum_c / n - sum_y / n;
}

int ece_bin(double confidence, int bin_count) {
  const int b = static_cast<int>(std::floor(confidence * bin_count));
  return std::clamp(b, 0, bin_count - 1);
}

double ece(const CorrectnessVector& correct, const ConfidenceVector& confidence,
           const BinningConfig& bins) {
  check_lengths(correct, confidence.size(), "ece");
  if (bins.bin_count < 1) throw Error("ece: bin_count must be >= 1");
  const int m = bins.bin_count;
  std::vector<double> conf_sum(m, 0.0), acc_sum(m, 0.0);
  std::vector<std::size_t> count(m, 0);
  for (std::size_t i = 0; i < correct.size(); ++i) {
    const int b = ece_bin(confidence.values[i], m);
    conf_sum[b] += confidence.values[i];
    acc_sum[b] += correct.values[i];
    ++count[b];
  }
  const double n = static_cast<double>(correct.size());
  double total = 0.0;
  for (int b = 0; b < m; ++b) {
    if (count[b] == 0) continue;
    // (|B|/n) * |conf(B) - acc(B)| written over bin sums.
    total += std::fabs(conf_sum[b] / n - acc_sum[b] / n);
  }
  return total;
}

}  // namespace ue
