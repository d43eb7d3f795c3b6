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

// The batch workflow behind the `uekit` command line:
//
//   synth      -> predictions.jsonl, train.jsonl
//   fit-stats  -> stats.json
//   score      -> scores.csv          (one column per method)
//   eval       -> metrics.csv         (split x fold x method x metric)
//   sweep      -> sweep.csv, curves.csv
//   correlate  -> correlations.csv    (Kendall tau between metrics)
//   aggregate  -> aggregate.csv, zscores.csv, near_best.csv
//   report     -> report.md
//
// Every CSV starts with a provenance comment (tool version, seed, hash of
// the options) followed by a header row. Outputs depend only on inputs and
// options unless timing columns are requested.

#ifndef UEKIT_PIPELINE_H_
#define UEKIT_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "uekit/analysis.h"
#include "uekit/feature_scores.h"
#include "uekit/interchange.h"
#include "uekit/synth.h"

namespace ue {

inline constexpr char kToolVersion[] = "1.0.0";

// Invalid options or missing inputs. The CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Stable public identifiers.
const std::vector<std::string>& method_registry();
const std::vector<std::string>& metric_registry();

// Comma-separated names, or "all"/empty for the whole registry. Unknown
// names raise ConfigError listing the valid ones. Registry order is kept.
std::vector<std::string> resolve_names(const std::string& list,
                                       const std::vector<std::string>& registry,
                                       const std::string& what);

struct RunConfig {
  std::vector<std::filesystem::path> inputs;
  std::filesystem::path train;
  std::filesystem::path stats;
  std::filesystem::path out = ".";
  std::vector<std::string> methods = method_registry();
  std::vector<std::string> metrics = metric_registry();
  double alpha = 0.5;
  int lof_k = kDefaultLofNeighbors;
  int isof_trees = kDefaultIsofTrees;
  std::optional<int> isof_subsample;  // default min(256, N)
  int ece_bins = 15;
  std::vector<double> thresholds = {0.01, 0.05, 0.10, 0.15};
  std::uint64_t seed = 0;
  bool timing = false;
  SuiteConfig suite;  // synth only

  void validate() const;
  // "uekit <version> seed=<seed> config=<hash>" for the given subcommand.
  std::string provenance(const std::string& subcommand) const;
};

using SplitFold = std::pair<std::string, int>;

std::map<SplitFold, TrainStats> fit_all_stats(const std::vector<TrainingSet>& train);
void write_stats(const std::filesystem::path& path,
                 const std::map<SplitFold, TrainStats>& stats,
                 const std::string& provenance);
std::map<SplitFold, TrainStats> read_stats(const std::filesystem::path& path);

// Per-instance scores of one (split, fold) for every requested method.
struct ScoredSplit {
  std::string split;
  int fold = 0;
  int class_count = 0;
  std::vector<std::string> ids;
  std::vector<int> labels;
  std::vector<int> preds;
  std::vector<std::pair<std::string, std::vector<double>>> scores;  // method order
  std::map<std::string, double> wall_ms;

  const std::vector<double>& method_scores(const std::string& method) const;
};

ScoredSplit score_split(const EvalSplit& split, const TrainingSet* train,
                        const TrainStats* stats, const RunConfig& config);

// Adds all requested metrics for every method in `scored`.
void evaluate_split(const ScoredSplit& scored, const RunConfig& config,
                    MetricReport& report);

std::vector<ScoredSplit> read_scores(const std::filesystem::path& path);
MetricReport read_metrics(const std::filesystem::path& path);

std::vector<std::filesystem::path> run_synth(const RunConfig& config);
std::vector<std::filesystem::path> run_fit_stats(const RunConfig& config);
std::vector<std::filesystem::path> run_score(const RunConfig& config);
std::vector<std::filesystem::path> run_eval(const RunConfig& config);
std::vector<std::filesystem::path> run_sweep(const RunConfig& config);
std::vector<std::filesystem::path> run_correlate(const RunConfig& config);
std::vector<std::filesystem::path> run_aggregate(const RunConfig& config);
std::vector<std::filesystem::path> run_report(const RunConfig& config);

const std::vector<std::string>& subcommands();
std::vector<std::filesystem::path> run(const std::string& subcommand,
                                       const RunConfig& config);

}  // namespace ue

#endif  // UEKIT_PIPELINE_H_
