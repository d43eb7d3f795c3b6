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

// Domain types shared by every uekit module, plus the small primitives
// (argmax prediction, min-max normalization, confidence derivation and
// macro-F1) that the scoring and evaluation code is built on.

#ifndef UEKIT_CORE_H_
#define UEKIT_CORE_H_

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ue {

// Any failure of a library operation. The CLI maps it to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A metric or statistic that is mathematically undefined for the given
// input (single-class correctness, zero variance, ...). Reported as NA.
class UndefinedError : public Error {
 public:
  using Error::Error;
};

// One evaluated test instance as exported by a classifier.
struct PredictionRecord {
  std::string id;
  std::string split;
  int fold = 0;
  int true_label = 0;
  std::vector<double> det_probs;               // C
  std::vector<std::vector<double>> mc_probs;   // T x C
  std::vector<double> embedding;               // D

  int class_count() const { return static_cast<int>(det_probs.size()); }
  int pass_count() const { return static_cast<int>(mc_probs.size()); }
  int dim() const { return static_cast<int>(embedding.size()); }
};

// All records of one (split, fold) evaluation set, in ingestion order.
struct EvalSplit {
  std::string split;
  int fold = 0;
  int class_count = 0;
  std::vector<PredictionRecord> records;

  std::size_t size() const { return records.size(); }
};

// Raw per-instance uncertainties of one method; higher = more uncertain.
struct ScoreVector {
  std::string method;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
};

// Per-instance confidences in [0,1].
struct ConfidenceVector {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
};

// 1 where the predicted label equals the true label.
struct CorrectnessVector {
  std::vector<std::uint8_t> values;

  std::size_t size() const { return values.size(); }
  std::size_t correct_count() const;
  std::size_t error_count() const { return size() - correct_count(); }
};

// Argmax of the deterministic probabilities, ties toward the lowest index.
int predicted_label(const PredictionRecord& record);
int argmax(std::span<const double> probs);

std::vector<int> predicted_labels(const EvalSplit& split);
std::vector<int> true_labels(const EvalSplit& split);
CorrectnessVector correctness(std::span<const int> preds,
                              std::span<const int> labels);

// (v - min) / (max - min); a constant vector maps to 0.5 everywhere.
ScoreVector minmax_normalize(const ScoreVector& scores);

// c_i = 1 - minmax_normalize(u)_i.
ConfidenceVector to_confidence(const ScoreVector& scores);

// Unweighted mean of per-class F1 over the classes that occur in either
// `preds` or `labels`. Classes absent from both have an empty confusion row
// and column and are left out of the mean.
double macro_f1(std::span<const int> preds, std::span<const int> labels,
                int class_count);

// Same quantity from per-class confusion counts.
double macro_f1_from_counts(std::span<const long> tp, std::span<const long> fp,
                            std::span<const long> fn);

}  // namespace ue

#endif  // UEKIT_CORE_H_
