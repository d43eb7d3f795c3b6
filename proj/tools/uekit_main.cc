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

// uekit: uncertainty estimation benchmark pipeline.
//
// Exit codes: 0 success, 1 module error (one JSON line on stderr),
// 2 invalid options or configuration.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "uekit/pipeline.h"

namespace {

struct Flags {
  std::vector<std::string> inputs;
  std::string train, stats, out = ".";
  std::string methods = "all", metrics = "all", thresholds = "0.01,0.05,0.10,0.15";
  double alpha = 0.5;
  int lof_k = ue::kDefaultLofNeighbors;
  int isof_trees = ue::kDefaultIsofTrees;
  int isof_subsample = 0;
  int ece_bins = 15;
  std::uint64_t seed = 0;
  bool timing = false;
  ue::SuiteConfig suite;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--input", f.inputs, "input file (or directory for report)");
  cmd->add_option("--train", f.train, "training-embedding JSONL");
  cmd->add_option("--stats", f.stats, "stats JSON written by fit-stats");
  cmd->add_option("--methods", f.methods, "comma-separated methods or 'all'");
  cmd->add_option("--metrics", f.metrics, "comma-separated metrics or 'all'");
  cmd->add_option("--alpha", f.alpha, "HUQ-MD mixing weight");
  cmd->add_option("--lof-k", f.lof_k, "LOF neighbour count");
  cmd->add_option("--isof-trees", f.isof_trees, "isolation forest size");
  cmd->add_option("--isof-subsample", f.isof_subsample,
                  "isolation forest subsample (default min(256, N))");
  cmd->add_option("--ece-bins", f.ece_bins, "ECE bin count");
  cmd->add_option("--thresholds", f.thresholds, "comma-separated rejection fractions");
  cmd->add_option("--seed", f.seed, "global seed");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_flag("--timing", f.timing, "append per-method wall-time columns");
}

void add_synth(CLI::App* cmd, Flags& f) {
  auto& b = f.suite.base;
  cmd->add_option("--splits", f.suite.split_count, "number of splits");
  cmd->add_option("--folds", f.suite.fold_count, "folds per split");
  cmd->add_option("--split-name", b.split, "split name prefix");
  cmd->add_option("--classes", b.class_count, "class count");
  cmd->add_option("--dim", b.dim, "embedding dimension");
  cmd->add_option("--per-class", b.per_class, "test records per class");
  cmd->add_option("--train-per-class", b.train_per_class, "training records per class");
  cmd->add_option("--separation", b.separation, "distance between class means");
  cmd->add_option("--temperature", b.temperature, "logit temperature");
  cmd->add_option("--mc-noise", b.mc_noise, "logit noise of stochastic passes");
  cmd->add_option("--shift", b.shift, "test-set embedding shift");
  cmd->add_option("--passes", b.passes, "stochastic passes");
  cmd->add_option("--label-noise", b.label_noise, "probability of a random label");
}

std::vector<double> parse_thresholds(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ue::ConfigError("--thresholds: not a number: '" + item + "'");
    }
  }
  if (out.empty()) throw ue::ConfigError("--thresholds: empty list");
  return out;
}

ue::RunConfig to_config(const Flags& f) {
  ue::RunConfig c;
  for (const auto& in : f.inputs) c.inputs.emplace_back(in);
  c.train = f.train;
  c.stats = f.stats;
  c.out = f.out;
  c.methods = ue::resolve_names(f.methods, ue::method_registry(), "method");
  c.metrics = ue::resolve_names(f.metrics, ue::metric_registry(), "metric");
  c.alpha = f.alpha;
  c.lof_k = f.lof_k;
  c.isof_trees = f.isof_trees;
  if (f.isof_subsample != 0) c.isof_subsample = f.isof_subsample;
  c.ece_bins = f.ece_bins;
  c.thresholds = parse_thresholds(f.thresholds);
  c.seed = f.seed;
  c.timing = f.timing;
  c.suite = f.suite;
  return c;
}

void error_line(const char* kind, const std::string& subcommand, const std::string& message) {
  nlohmann::ordered_json e;
  e["error"] = kind;
  e["subcommand"] = subcommand;
  e["message"] = message;
  std::cerr << e.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"uekit: uncertainty estimation benchmark pipeline"};
  app.set_version_flag("--version", std::string(ue::kToolVersion));
  app.require_subcommand(1);
  Flags flags;
  for (const auto& name : ue::subcommands()) {
    CLI::App* cmd = app.add_subcommand(name);
    add_common(cmd, flags);
    if (name == "synth") add_synth(cmd, flags);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const std::string subcommand = app.get_subcommands().front()->get_name();
  try {
    const ue::RunConfig config = to_config(flags);
    if (subcommand == "synth") {
      try {
        config.suite.base.validate();
      } catch (const ue::Error& e) {
        throw ue::ConfigError(e.what());
      }
      if (config.suite.split_count < 1 || config.suite.fold_count < 1) {
        throw ue::ConfigError("--splits and --folds must be >= 1");
      }
    }
    for (const auto& path : ue::run(subcommand, config)) std::cout << path.string() << '\n';
  } catch (const ue::ConfigError& e) {
    error_line("config", subcommand, e.what());
    return 2;
  } catch (const std::exception& e) {
    error_line("module", subcommand, e.what());
    return 1;
  }
  return 0;
}
