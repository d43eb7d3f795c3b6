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

// Reading and writing the JSON-lines interchange format:
//
//   {"schema": "ue-interchange/1", "C": 2, "T": 20, "D": 768}      (optional)
//   {"id": "a1", "split": "en", "fold": 0, "label": 1,
//    "probs": [0.2, 0.8], "mc_probs": [[...], ...], "embedding": [...]}
//
// Training files use the same layout; "probs" and "mc_probs" may be omitted.

#ifndef UEKIT_INTERCHANGE_H_
#define UEKIT_INTERCHANGE_H_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "uekit/core.h"

namespace ue {

inline constexpr char kSchemaVersion[] = "ue-interchange/1";

// Rows whose sum is within this distance of 1 are rescaled; others rejected.
inline constexpr double kProbSumTolerance = 1e-3;

struct InterchangeHeader {
  std::optional<int> class_count;
  std::optional<int> pass_count;
  std::optional<int> dim;
};

// Labelled embeddings of one (split, fold) training set.
struct TrainingSet {
  std::string split;
  int fold = 0;
  int class_count = 0;
  std::vector<std::vector<double>> embeddings;
  std::vector<int> labels;
};

// Parses prediction records and groups them by (split, fold), sorted by
// split name then fold. Record order inside a group is the input order.
std::vector<EvalSplit> load_records(const std::filesystem::path& path);
std::vector<EvalSplit> read_records(std::istream& in,
                                    const std::string& source = "<stream>");

// Training embeddings grouped by (split, fold). class_count comes from the
// header when present, otherwise from the largest label seen in the split.
std::vector<TrainingSet> load_training(const std::filesystem::path& path);
std::vector<TrainingSet> read_training(std::istream& in,
                                       const std::string& source = "<stream>");

void write_header(std::ostream& out, const InterchangeHeader& header);
void write_record(std::ostream& out, const PredictionRecord& record);
// Training lines carry id, split, fold, label and embedding only.
void write_training_record(std::ostream& out, const PredictionRecord& record);

}  // namespace ue

#endif  // UEKIT_INTERCHANGE_H_
