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

#include "uekit/core.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace ue {

std::size_t CorrectnessVector::correct_count() const {
  return static_cast<std::size_t>(std::count(values.begin(), values.end(), 1));
}

int argmax(std::span<const double> probs) {
  if (probs.empty()) throw Error("argmax of an empty vector");
  int best = 0;
  for (std::size_t c = 1; c < probs.size(); ++c) {
    if (probs[c] > probs[best]) best = static_cast<int>(c);
  }
  return best;
}

int predicted_label(const PredictionRecord& record) {
  return argmax(record.det_probs);
}

std::vector<int> predicted_labels(const EvalSplit& split) {
  std::vector<int> out;
  out.reserve(split.size());
  for (const auto& r : split.records) out.push_back(predicted_label(r));
  return out;
}

std::vector<int> true_labels(const EvalSplit& split) {
  std::vector<int> out;
  out.reserve(split.size());
  for (const auto& r : split.records) out.push_back(r.true_label);
  return out;
}

CorrectnessVector correctness(std::span<const int> preds,
                              std::span<const int> labels) {
  if (preds.size() != labels.size()) {
    throw Error("correctness: length mismatch");
  }
  CorrectnessVector out;
  out.values.resize(preds.size());
  for (std::size_t i = 0; i < preds.size(); ++i) {
    out.values[i] = preds[i] == labels[i] ? 1 : 0;
  }
  return out;
}

ScoreVector minmax_normalize(const ScoreVector& scores) {
  if (scores.values.empty()) throw Error("minmax_normalize: empty input");
  const auto [lo_it, hi_it] =
      std::minmax_element(scores.values.begin(), scores.values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw Error("minmax_normalize: non-finite score for " + scores.method);
  }
  ScoreVector out{scores.method, std::vector<double>(scores.size(), 0.5)};
  if (hi == lo) return out;
  const double range = hi - lo;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out.values[i] = (scores.values[i] - lo) / range;
  }
  return out;
}

ConfidenceVector to_confidence(const ScoreVector& scores) {
  const ScoreVector norm = minmax_normalize(scores);
  ConfidenceVector out;
  out.values.resize(norm.size());
  for (std::size_t i = 0; i < norm.size(); ++i) {
    out.values[i] = 1.0 - norm.values[i];
  }
  return out;
}

double macro_f1(std::span<const int> preds, std::span<const int> labels,
                int class_count) {
  if (preds.empty()) throw Error("macro_f1: empty input");
  if (preds.size() != labels.size()) throw Error("macro_f1: length mismatch");
  if (class_count < 1) throw Error("macro_f1: class_count must be >= 1");
  std::vector<long> tp(class_count, 0), fp(class_count, 0), fn(class_count, 0);
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const int p = preds[i];
    const int y = labels[i];
    if (p < 0 || p >= class_count || y < 0 || y >= class_count) {
      throw Error("macro_f1: class index out of range [0," +
                  std::to_string(class_count) + ")");
    }
    if (p == y) {
      ++tp[p];
    } else {
      ++fp[p];
      ++fn[y];
    }
  }
  return macro_f1_from_counts(tp, fp, fn);
}

double macro_f1_from_counts(std::span<const long> tp, std::span<const long> fp,
                            std::span<const long> fn) {
  double sum = 0.0;
  int present = 0;
  for (std::size_t c = 0; c < tp.size(); ++c) {
    const long denom = 2 * tp[c] + fp[c] + fn[c];
    if (denom == 0) continue;
    sum += 2.0 * static_cast<double>(tp[c]) / static_cast<double>(denom);
    ++present;
  }
  if (present == 0) throw Error("macro_f1: no instances");
  return sum / present;
}

}  // namespace ue
