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

#include "uekit/pipeline.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"
#include "uekit/core.h"
#include "uekit/csv.h"
#include "uekit/hybrid.h"
#include "uekit/metrics.h"
#include "uekit/prob_scores.h"
#include "uekit/selective.h"

namespace ue {
namespace fs = std::filesystem;

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

fs::path output_path(const RunConfig& config, const std::string& name) {
  std::error_code ec;
  fs::create_directories(config.out, ec);
  if (ec) throw Error("cannot create output directory " + config.out.string());
  const fs::path path = config.out / name;
  for (const auto& in : config.inputs) {
    if (fs::exists(in) && fs::exists(path) && fs::equivalent(in, path)) {
      throw ConfigError("output " + path.string() + " would overwrite an input");
    }
  }
  return path;
}

const fs::path& single_input(const RunConfig& config, const std::string& what) {
  if (config.inputs.size() != 1) {
    throw ConfigError("--input must name exactly one " + what);
  }
  if (!fs::exists(config.inputs.front())) {
    throw ConfigError("input file does not exist: " + config.inputs.front().string());
  }
  return config.inputs.front();
}

template <typename T>
std::size_t index_of(const std::vector<T>& v, const T& x) {
  return static_cast<std::size_t>(std::find(v.begin(), v.end(), x) - v.begin());
}

bool needs_train(const std::string& m) { return m == "lof" || m == "isof"; }
bool needs_stats(const std::string& m) { return m == "md" || m == "huq_md"; }

}  // namespace

// ---------------------------------------------------------------------------
// Registry and configuration

const std::vector<std::string>& method_registry() {
  static const std::vector<std::string> kMethods = {
      "sr", "smp", "ent", "ent_mc", "pv", "bald", "md", "huq_md", "lof", "isof"};
  return kMethods;
}

const std::vector<std::string>& metric_registry() {
  static const std::vector<std::string> kMetrics = {
      "roc_auc", "au_prc",    "c_slope", "citl", "ece",
      "rc_auc",  "nrc_auc", "e_auoptrc", "ti",   "ti95"};
  return kMetrics;
}

std::vector<std::string> resolve_names(const std::string& list,
                                       const std::vector<std::string>& registry,
                                       const std::string& what) {
  if (list.empty() || list == "all") return registry;
  std::set<std::string> wanted;
  std::stringstream ss(list);
  std::string name;
  while (std::getline(ss, name, ',')) {
    if (name.empty()) continue;
    if (std::find(registry.begin(), registry.end(), name) == registry.end()) {
      throw ConfigError("unknown " + what + " '" + name + "'; valid " + what +
                        "s: " + join(registry, ", "));
    }
    wanted.insert(name);
  }
  if (wanted.empty()) throw ConfigError("no " + what + "s selected");
  std::vector<std::string> out;
  for (const auto& r : registry) {
    if (wanted.count(r)) out.push_back(r);
  }
  return out;
}

void RunConfig::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("--alpha must lie in [0,1]");
  if (lof_k < 1) throw ConfigError("--lof-k must be >= 1");
  if (isof_trees < 1) throw ConfigError("--isof-trees must be >= 1");
  if (isof_subsample && *isof_subsample < 2) {
    throw ConfigError("--isof-subsample must be >= 2");
  }
  if (ece_bins < 1) throw ConfigError("--ece-bins must be >= 1");
  for (double t : thresholds) {
    if (!(t >= 0.0 && t < 1.0)) throw ConfigError("--thresholds must lie in [0,1)");
  }
  for (const auto& m : methods) resolve_names(m, method_registry(), "method");
  for (const auto& m : metrics) resolve_names(m, metric_registry(), "metric");
}

std::string RunConfig::provenance(const std::string& subcommand) const {
  std::ostringstream canon;
  canon << subcommand << '|' << join(methods, ",") << '|' << join(metrics, ",")
        << '|' << format_double(alpha) << '|' << lof_k << '|' << isof_trees << '|'
        << (isof_subsample ? std::to_string(*isof_subsample) : "auto") << '|'
        << ece_bins << '|';
  for (double t : thresholds) canon << format_double(t) << ';';
  canon << '|' << seed << '|' << timing;
  if (subcommand == "synth") {
    const auto& b = suite.base;
    canon << '|' << suite.split_count << '|' << suite.fold_count << '|'
          << b.class_count << '|' << b.dim << '|' << b.per_class << '|'
          << b.train_per_class << '|' << format_double(b.separation) << '|'
          << format_double(b.temperature) << '|' << format_double(b.mc_noise)
          << '|' << format_double(b.shift) << '|' << b.passes << '|'
          << format_double(b.label_noise) << '|' << b.split;
  }
  std::ostringstream out;
  out << "uekit " << kToolVersion << " seed=" << seed << " config=" << std::hex
      << std::setw(16) << std::setfill('0') << fnv1a(canon.str());
  return out.str();
}

// ---------------------------------------------------------------------------
// Training statistics

std::map<SplitFold, TrainStats> fit_all_stats(const std::vector<TrainingSet>& train) {
  std::map<SplitFold, TrainStats> out;
  for (const auto& t : train) {
    out.emplace(SplitFold{t.split, t.fold},
                fit_train_stats(to_matrix(t.embeddings), t.labels, t.class_count));
  }
  return out;
}

void write_stats(const fs::path& path, const std::map<SplitFold, TrainStats>& stats,
                 const std::string& provenance) {
  nlohmann::ordered_json doc;
  doc["provenance"] = provenance;
  auto entries = nlohmann::ordered_json::array();
  for (const auto& [key, s] : stats) {
    nlohmann::ordered_json e;
    e["split"] = key.first;
    e["fold"] = key.second;
    e["stats"] = to_json(s);
    entries.push_back(std::move(e));
  }
  doc["entries"] = std::move(entries);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << doc.dump(1) << '\n';
}

std::map<SplitFold, TrainStats> read_stats(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(path.string() + ": malformed stats document: " + e.what());
  }
  std::map<SplitFold, TrainStats> out;
  try {
    for (const auto& e : doc.at("entries")) {
      out.emplace(SplitFold{e.at("split").get<std::string>(), e.at("fold").get<int>()},
                  train_stats_from_json(e.at("stats")));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(path.string() + ": malformed stats document: " + e.what());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Scoring

const std::vector<double>& ScoredSplit::method_scores(const std::string& method) const {
  for (const auto& [m, v] : scores) {
    if (m == method) return v;
  }
  throw Error("no scores for method " + method);
}

ScoredSplit score_split(const EvalSplit& split, const TrainingSet* train,
                        const TrainStats* stats, const RunConfig& config) {
  using Clock = std::chrono::steady_clock;
  ScoredSplit out;
  out.split = split.split;
  out.fold = split.fold;
  out.class_count = split.class_count;
  for (const auto& r : split.records) out.ids.push_back(r.id);
  out.labels = true_labels(split);
  out.preds = predicted_labels(split);
  const std::string where = split.split + "/" + std::to_string(split.fold);

  auto per_record = [&](const std::function<double(const PredictionRecord&)>& f) {
    std::vector<double> v;
    v.reserve(split.size());
    for (const auto& r : split.records) v.push_back(f(r));
    return v;
  };
  auto train_matrix = [&]() {
    if (train == nullptr) throw Error("no training embeddings for " + where);
    return to_matrix(train->embeddings);
  };
  auto md_scores = [&]() {
    if (stats == nullptr) throw Error("no training statistics for " + where);
    return per_record([&](const PredictionRecord& r) { return mahalanobis(r.embedding, *stats); });
  };

  for (const auto& method : config.methods) {
    const auto start = Clock::now();
    std::vector<double> v;
    if (method == "sr") {
      v = per_record([](const PredictionRecord& r) { return sr(r.det_probs); });
    } else if (method == "smp") {
      v = per_record([](const PredictionRecord& r) { return smp(r.mc_probs); });
    } else if (method == "ent") {
      v = per_record([](const PredictionRecord& r) { return ent(r.det_probs); });
    } else if (method == "ent_mc") {
      v = per_record([](const PredictionRecord& r) { return ent_mc(r.mc_probs); });
    } else if (method == "pv") {
      v = per_record([](const PredictionRecord& r) { return pv(r.mc_probs); });
    } else if (method == "bald") {
      v = per_record([](const PredictionRecord& r) { return bald(r.mc_probs); });
    } else if (method == "md") {
      v = md_scores();
    } else if (method == "huq_md") {
      const ScoreVector epistemic{"md", md_scores()};
      const ScoreVector aleatoric{
          "sr", per_record([](const PredictionRecord& r) { return sr(r.det_probs); })};
      v = huq(epistemic, aleatoric, config.alpha).values;
    } else if (method == "lof") {
      const LofModel model = fit_lof(train_matrix(), config.lof_k);
      v = per_record([&](const PredictionRecord& r) { return lof_score(r.embedding, model); });
    } else if (method == "isof") {
      const Eigen::MatrixXd points = train_matrix();
      const int psi = config.isof_subsample.value_or(
          static_cast<int>(std::min<Eigen::Index>(kDefaultIsofSubsample, points.rows())));
      const IsofModel model =
          fit_isof(points, config.isof_trees, psi,
                   derive_seed(config.seed, fnv1a(split.split),
                               static_cast<std::uint64_t>(split.fold)));
      v = per_record([&](const PredictionRecord& r) { return isof_score(r.embedding, model); });
    } else {
      throw ConfigError("unknown method '" + method + "'");
    }
    out.wall_ms[method] =
        std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    out.scores.emplace_back(method, std::move(v));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

void evaluate_split(const ScoredSplit& scored, const RunConfig& config,
                    MetricReport& report) {
  const CorrectnessVector correct = correctness(scored.preds, scored.labels);
  const double full_f1 = macro_f1(scored.preds, scored.labels, scored.class_count);
  const RcBaselines baselines = rc_auc_baselines(correct);
  const BinningConfig bins{config.ece_bins};

  for (const auto& [method, values] : scored.scores) {
    const ScoreVector u{method, values};
    const ConfidenceVector conf = to_confidence(u);
    const RiskCoverageCurve curve = rc_curve(conf, correct);
    for (const auto& metric : config.metrics) {
      MetricValue mv;
      try {
        if (metric == "roc_auc") {
          mv.value = roc_auc(correct, conf);
        } else if (metric == "au_prc") {
          mv.value = au_prc(correct, u);
        } else if (metric == "c_slope") {
          mv.value = c_slope(correct, conf).slope;
        } else if (metric == "citl") {
          mv.value = citl(correct, conf);
        } else if (metric == "ece") {
          mv.value = ece(correct, conf, bins);
        } else if (metric == "rc_auc") {
          mv.value = rc_auc(curve);
        } else if (metric == "nrc_auc") {
          mv.value = nrc_auc(rc_auc(curve), baselines.oracle, baselines.random);
        } else if (metric == "e_auoptrc") {
          mv.value = e_auoptrc(curve, full_f1);
        } else if (metric == "ti") {
          mv.value = trust_index(conf, scored.preds, scored.labels, scored.class_count,
                                 TrustMode::Optimal()).f1;
        } else if (metric == "ti95") {
          mv.value = trust_index(conf, scored.preds, scored.labels, scored.class_count,
                                 TrustMode::Fixed(kTi95Coverage)).f1;
        } else {
          throw ConfigError("unknown metric '" + metric + "'");
        }
      } catch (const UndefinedError& e) {
        mv.value.reset();
        mv.na_reason = e.what();
      }
      report.add({scored.split, scored.fold, method, metric}, std::move(mv));
    }
  }
}

std::vector<ScoredSplit> read_scores(const fs::path& path) {
  const CsvTable t = read_csv(path);
  const std::size_t c_split = t.column("split"), c_fold = t.column("fold"),
                    c_id = t.column("id"), c_label = t.column("label"),
                    c_pred = t.column("pred"), c_classes = t.column("class_count");
  std::vector<std::pair<std::string, std::size_t>> method_cols;
  for (const auto& m : method_registry()) {
    if (t.has_column(m)) method_cols.emplace_back(m, t.column(m));
  }
  if (method_cols.empty()) throw Error(path.string() + ": no method columns");

  std::vector<ScoredSplit> out;
  std::map<SplitFold, std::size_t> where;
  for (const auto& row : t.rows) {
    const SplitFold key{row[c_split], std::stoi(row[c_fold])};
    auto it = where.find(key);
    if (it == where.end()) {
      ScoredSplit s;
      s.split = key.first;
      s.fold = key.second;
      s.class_count = std::stoi(row[c_classes]);
      for (const auto& [m, col] : method_cols) s.scores.emplace_back(m, std::vector<double>{});
      it = where.emplace(key, out.size()).first;
      out.push_back(std::move(s));
    }
    ScoredSplit& s = out[it->second];
    s.ids.push_back(row[c_id]);
    s.labels.push_back(std::stoi(row[c_label]));
    s.preds.push_back(std::stoi(row[c_pred]));
    for (std::size_t k = 0; k < method_cols.size(); ++k) {
      s.scores[k].second.push_back(parse_double(row[method_cols[k].second]));
    }
  }
  return out;
}

MetricReport read_metrics(const fs::path& path) {
  const CsvTable t = read_csv(path);
  const std::size_t c_split = t.column("split"), c_fold = t.column("fold"),
                    c_method = t.column("method"), c_metric = t.column("metric"),
                    c_value = t.column("value"), c_reason = t.column("na_reason");
  MetricReport report;
  for (const auto& row : t.rows) {
    MetricValue v{parse_maybe(row[c_value]), row[c_reason]};
    report.add({row[c_split], std::stoi(row[c_fold]), row[c_method], row[c_metric]},
               std::move(v));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Subcommands

std::vector<fs::path> run_synth(const RunConfig& config) {
  SuiteConfig suite = config.suite;
  suite.base.seed = config.seed;
  const auto data = generate_suite(suite);
  const fs::path pred_path = output_path(config, "predictions.jsonl");
  const fs::path train_path = output_path(config, "train.jsonl");
  std::ostringstream preds, train;
  const auto& b = suite.base;
  write_header(preds, {b.class_count, b.passes, b.dim});
  write_header(train, {b.class_count, std::nullopt, b.dim});
  for (const auto& d : data) {
    for (const auto& r : d.test.records) write_record(preds, r);
    for (const auto& r : d.train) write_training_record(train, r);
  }
  for (const auto& [path, buf] : {std::pair{pred_path, &preds}, std::pair{train_path, &train}}) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << buf->str();
  }
  return {pred_path, train_path};
}

std::vector<fs::path> run_fit_stats(const RunConfig& config) {
  if (config.train.empty()) throw ConfigError("fit-stats requires --train");
  if (!fs::exists(config.train)) {
    throw ConfigError("training file does not exist: " + config.train.string());
  }
  const auto stats = fit_all_stats(load_training(config.train));
  const fs::path path = output_path(config, "stats.json");
  write_stats(path, stats, config.provenance("fit-stats"));
  return {path};
}

std::vector<fs::path> run_score(const RunConfig& config) {
  const fs::path& input = single_input(config, "prediction file");
  const bool want_train = std::any_of(config.methods.begin(), config.methods.end(), needs_train);
  const bool want_stats = std::any_of(config.methods.begin(), config.methods.end(), needs_stats);
  if ((want_train || (want_stats && config.stats.empty())) && config.train.empty()) {
    throw ConfigError("methods " + join(config.methods, ",") +
                      " need --train (and optionally --stats)");
  }
  if (!config.train.empty() && !fs::exists(config.train)) {
    throw ConfigError("training file does not exist: " + config.train.string());
  }
  if (!config.stats.empty() && !fs::exists(config.stats)) {
    throw ConfigError("stats file does not exist: " + config.stats.string());
  }

  const auto splits = load_records(input);
  std::map<SplitFold, TrainingSet> train;
  if (!config.train.empty() && (want_train || want_stats)) {
    for (auto& t : load_training(config.train)) {
      SplitFold key{t.split, t.fold};
      train.emplace(std::move(key), std::move(t));
    }
  }
  std::map<SplitFold, TrainStats> stats;
  if (want_stats) {
    if (!config.stats.empty()) {
      stats = read_stats(config.stats);
    } else {
      for (const auto& [key, t] : train) {
        stats.emplace(key, fit_train_stats(to_matrix(t.embeddings), t.labels, t.class_count));
      }
    }
  }

  std::vector<std::string> header = {"split", "fold", "id", "label", "pred", "correct",
                                     "class_count"};
  for (const auto& m : config.methods) header.push_back(m);
  if (config.timing) {
    for (const auto& m : config.methods) header.push_back(m + "_wall_ms");
  }
  CsvWriter csv(config.provenance("score"), header);
  for (const auto& split : splits) {
    const SplitFold key{split.split, split.fold};
    const auto t = train.find(key);
    const auto s = stats.find(key);
    const ScoredSplit scored =
        score_split(split, t == train.end() ? nullptr : &t->second,
                    s == stats.end() ? nullptr : &s->second, config);
    for (std::size_t i = 0; i < split.size(); ++i) {
      std::vector<std::string> row = {scored.split,
                                      std::to_string(scored.fold),
                                      scored.ids[i],
                                      std::to_string(scored.labels[i]),
                                      std::to_string(scored.preds[i]),
                                      scored.labels[i] == scored.preds[i] ? "1" : "0",
                                      std::to_string(scored.class_count)};
      for (const auto& [m, v] : scored.scores) row.push_back(format_double(v[i]));
      if (config.timing) {
        for (const auto& m : config.methods) row.push_back(format_double(scored.wall_ms.at(m)));
      }
      csv.row(std::move(row));
    }
  }
  const fs::path path = output_path(config, "scores.csv");
  csv.write(path);
  return {path};
}

namespace {

// Keeps only the requested methods that exist in the scored input.
std::vector<ScoredSplit> load_scored(const RunConfig& config) {
  auto scored = read_scores(single_input(config, "scores CSV"));
  for (auto& s : scored) {
    std::vector<std::pair<std::string, std::vector<double>>> kept;
    for (auto& [m, v] : s.scores) {
      if (std::find(config.methods.begin(), config.methods.end(), m) != config.methods.end()) {
        kept.emplace_back(m, std::move(v));
      }
    }
    s.scores = std::move(kept);
  }
  return scored;
}

}  // namespace

std::vector<fs::path> run_eval(const RunConfig& config) {
  const auto scored = load_scored(config);
  MetricReport report;
  for (const auto& s : scored) evaluate_split(s, config, report);
  CsvWriter csv(config.provenance("eval"),
                {"split", "fold", "method", "metric", "value", "na_reason"});
  for (const auto& [key, v] : report.entries()) {
    csv.row({key.split, std::to_string(key.fold), key.method, key.metric,
             format_maybe(v.value), v.na_reason});
  }
  const fs::path path = output_path(config, "metrics.csv");
  csv.write(path);
  return {path};
}

std::vector<fs::path> run_sweep(const RunConfig& config) {
  const auto scored = load_scored(config);
  CsvWriter sweep(config.provenance("sweep"),
                  {"split", "fold", "method", "threshold", "n", "rejected_count",
                   "full_f1", "retained_f1", "delta_f1", "pct_incorrect_rejected"});
  CsvWriter curves(config.provenance("sweep"),
                   {"split", "fold", "method", "coverage", "risk"});
  for (const auto& s : scored) {
    const CorrectnessVector correct = correctness(s.preds, s.labels);
    for (const auto& [method, values] : s.scores) {
      const ConfidenceVector conf = to_confidence(ScoreVector{method, values});
      const SweepReport rep =
          abstention_sweep(conf, s.preds, s.labels, s.class_count, config.thresholds);
      for (const auto& r : rep.rows) {
        sweep.row({s.split, std::to_string(s.fold), method, format_double(r.threshold),
                   std::to_string(r.n), std::to_string(r.rejected_count),
                   format_double(r.full_f1), format_double(r.retained_f1),
                   format_double(r.delta_f1), format_double(r.pct_incorrect_rejected)});
      }
      const RiskCoverageCurve curve = rc_curve(conf, correct);
      for (std::size_t k = 0; k < curve.n; ++k) {
        curves.row({s.split, std::to_string(s.fold), method,
                    format_double(static_cast<double>(k + 1) / static_cast<double>(curve.n)),
                    format_double(curve.prefix_risk[k])});
      }
    }
  }
  const fs::path sweep_path = output_path(config, "sweep.csv");
  const fs::path curve_path = output_path(config, "curves.csv");
  sweep.write(sweep_path);
  curves.write(curve_path);
  return {sweep_path, curve_path};
}

namespace {

struct MetricGrid {
  std::vector<std::string> splits;
  std::vector<std::string> methods;  // registry order
  std::vector<std::string> metrics;  // registry order
  std::set<int> folds;
  // (split, method, metric) -> fold -> value
  std::map<std::tuple<std::string, std::string, std::string>, std::map<int, MaybeValue>> cells;
};

MetricGrid build_grid(const MetricReport& report, const RunConfig& config) {
  MetricGrid g;
  std::set<std::string> splits, methods, metrics;
  for (const auto& [key, v] : report.entries()) {
    if (std::find(config.methods.begin(), config.methods.end(), key.method) == config.methods.end() ||
        std::find(config.metrics.begin(), config.metrics.end(), key.metric) == config.metrics.end()) {
      continue;
    }
    splits.insert(key.split);
    methods.insert(key.method);
    metrics.insert(key.metric);
    g.folds.insert(key.fold);
    g.cells[{key.split, key.method, key.metric}][key.fold] = v.value;
  }
  g.splits.assign(splits.begin(), splits.end());
  for (const auto& m : method_registry()) {
    if (methods.count(m)) g.methods.push_back(m);
  }
  for (const auto& m : metric_registry()) {
    if (metrics.count(m)) g.metrics.push_back(m);
  }
  return g;
}

const char* significance(double p) {
  if (p < 0.01) return "p<0.01";
  if (p < 0.05) return "p<0.05";
  return "ns";
}

}  // namespace

std::vector<fs::path> run_correlate(const RunConfig& config) {
  const MetricGrid g = build_grid(read_metrics(single_input(config, "metrics CSV")), config);
  CsvWriter csv(config.provenance("correlate"),
                {"language", "metric_a", "metric_b", "n", "tau", "p", "significance"});
  for (const auto& split : g.splits) {
    // One vector per metric over the (method, fold) cells of this split.
    std::map<std::string, std::vector<MaybeValue>> columns;
    for (const auto& metric : g.metrics) {
      auto& col = columns[metric];
      for (const auto& method : g.methods) {
        const auto it = g.cells.find({split, method, metric});
        for (int fold : g.folds) {
          MaybeValue v;
          if (it != g.cells.end()) {
            const auto f = it->second.find(fold);
            if (f != it->second.end()) v = f->second;
          }
          col.push_back(v);
        }
      }
    }
    for (std::size_t a = 0; a < g.metrics.size(); ++a) {
      for (std::size_t b = a + 1; b < g.metrics.size(); ++b) {
        const auto& x = columns[g.metrics[a]];
        const auto& y = columns[g.metrics[b]];
        std::vector<std::string> row = {split, g.metrics[a], g.metrics[b]};
        try {
          const KendallResult k = kendall_tau(std::span<const MaybeValue>(x),
                                              std::span<const MaybeValue>(y));
          row.insert(row.end(), {std::to_string(k.n), format_double(k.tau),
                                 format_double(k.p), significance(k.p)});
        } catch (const UndefinedError&) {
          std::size_t n = 0;
          for (std::size_t i = 0; i < x.size(); ++i) n += (x[i] && y[i]) ? 1 : 0;
          row.insert(row.end(), {std::to_string(n), kNa, kNa, kNa});
        }
        csv.row(std::move(row));
      }
    }
  }
  const fs::path path = output_path(config, "correlations.csv");
  csv.write(path);
  return {path};
}

std::vector<fs::path> run_aggregate(const RunConfig& config) {
  const MetricGrid g = build_grid(read_metrics(single_input(config, "metrics CSV")), config);
  const MetricOrientation& orient = default_orientations();

  CsvWriter zcsv(config.provenance("aggregate"),
                 {"split", "metric", "method", "fold_mean", "benefit", "z", "na_folds"});
  CsvWriter nbcsv(config.provenance("aggregate"),
                  {"split", "metric", "method", "mean", "std", "folds_used", "label"});
  std::map<ZKey, MaybeValue> z;

  for (const auto& split : g.splits) {
    for (const auto& metric : g.metrics) {
      const Orientation& o = orient.at(metric);
      std::vector<MaybeValue> fold_means, benefits;
      std::vector<int> na_folds;
      for (const auto& method : g.methods) {
        double sum = 0.0;
        int n = 0, na = 0;
        const auto it = g.cells.find({split, method, metric});
        if (it != g.cells.end()) {
          for (const auto& [fold, v] : it->second) {
            if (v) {
              sum += *v;
              ++n;
            } else {
              ++na;
            }
          }
        }
        fold_means.push_back(n > 0 ? MaybeValue(sum / n) : std::nullopt);
        benefits.push_back(n > 0 ? MaybeValue(benefit(sum / n, o)) : std::nullopt);
        na_folds.push_back(na);
      }
      const auto zs = zscore_methods(benefits);
      for (std::size_t m = 0; m < g.methods.size(); ++m) {
        z[{split, g.methods[m], metric}] = zs[m];
        zcsv.row({split, metric, g.methods[m], format_maybe(fold_means[m]),
                  format_maybe(benefits[m]), format_maybe(zs[m]), std::to_string(na_folds[m])});
      }

      // Near-best over the folds where every method has a value.
      std::vector<int> folds;
      for (int fold : g.folds) {
        bool complete = true;
        for (const auto& method : g.methods) {
          const auto it = g.cells.find({split, method, metric});
          if (it == g.cells.end() || !it->second.count(fold) || !it->second.at(fold)) {
            complete = false;
            break;
          }
        }
        if (complete) folds.push_back(fold);
      }
      std::vector<MethodFolds> per_fold;
      for (const auto& method : g.methods) {
        MethodFolds mf{method, {}};
        for (int fold : folds) mf.values.push_back(*g.cells.at({split, method, metric}).at(fold));
        per_fold.push_back(std::move(mf));
      }
      std::vector<std::pair<std::string, NearBestLabel>> labels;
      if (folds.size() >= 2 && !per_fold.empty()) labels = near_best(per_fold, o);
      for (std::size_t m = 0; m < per_fold.size(); ++m) {
        const auto& v = per_fold[m].values;
        MaybeValue mean, sd;
        if (!v.empty()) {
          mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
          if (v.size() >= 2) {
            double ss = 0.0;
            for (double x : v) ss += (x - *mean) * (x - *mean);
            sd = std::sqrt(ss / (v.size() - 1));
          }
        }
        nbcsv.row({split, metric, per_fold[m].method, format_maybe(mean), format_maybe(sd),
                   std::to_string(folds.size()),
                   labels.empty() ? kNa : to_string(labels[m].second)});
      }
    }
  }

  CsvWriter agg(config.provenance("aggregate"),
                {"method", "metric", "mean_z", "std_z", "n_languages", "skipped"});
  const auto cells = aggregate_cross_language(z);
  for (const auto& method : g.methods) {
    for (const auto& metric : g.metrics) {
      const auto it = cells.find({method, metric});
      if (it == cells.end()) continue;
      const CrossSplitCell& c = it->second;
      agg.row({method, metric, format_maybe(c.mean_z), format_maybe(c.std_z),
               std::to_string(c.n_splits), std::to_string(c.skipped)});
    }
  }
  const fs::path agg_path = output_path(config, "aggregate.csv");
  const fs::path z_path = output_path(config, "zscores.csv");
  const fs::path nb_path = output_path(config, "near_best.csv");
  agg.write(agg_path);
  zcsv.write(z_path);
  nbcsv.write(nb_path);
  return {agg_path, z_path, nb_path};
}

// ---------------------------------------------------------------------------
// Report

namespace {

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

std::string fixed(const std::string& s, int digits) {
  const auto v = parse_maybe(s);
  return v ? fixed(*v, digits) : std::string(kNa);
}

fs::path report_dir(const RunConfig& config) {
  if (config.inputs.size() != 1 || !fs::is_directory(config.inputs.front())) {
    throw ConfigError("report needs --input pointing at a directory of pipeline outputs");
  }
  return config.inputs.front();
}

void report_metrics(std::ostream& md, const fs::path& dir) {
  const CsvTable nb = read_csv(dir / "near_best.csv");
  const auto c_split = nb.column("split"), c_metric = nb.column("metric"),
             c_method = nb.column("method"), c_mean = nb.column("mean"),
             c_std = nb.column("std"), c_label = nb.column("label");
  std::map<std::string, std::map<std::string, std::map<std::string, std::string>>> cell;
  std::vector<std::string> splits, methods, metrics;
  auto note = [](std::vector<std::string>& v, const std::string& s) {
    if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
  };
  for (const auto& r : nb.rows) {
    note(splits, r[c_split]);
    note(methods, r[c_method]);
    note(metrics, r[c_metric]);
    std::string text = fixed(r[c_mean], 3);
    if (r[c_std] != kNa) text += " ± " + fixed(r[c_std], 3);
    if (r[c_label] == "best") text = "**" + text + "**";
    if (r[c_label] == "near_best") text = "<u>" + text + "</u>";
    cell[r[c_split]][r[c_method]][r[c_metric]] = text;
  }
  md << "## Metrics per split (mean ± std over folds)\n\n"
     << "Bold: best method. Underlined: not significantly different from the best "
        "(paired t-test over folds, p >= 0.05).\n\n";
  for (const auto& split : splits) {
    md << "### " << split << "\n\n| method |";
    for (const auto& m : metrics) md << ' ' << m << " |";
    md << "\n|---|";
    for (std::size_t i = 0; i < metrics.size(); ++i) md << "---|";
    md << '\n';
    for (const auto& method : methods) {
      md << "| " << method << " |";
      for (const auto& m : metrics) md << ' ' << cell[split][method][m] << " |";
      md << '\n';
    }
    md << '\n';
  }
}

void report_aggregate(std::ostream& md, const fs::path& dir) {
  const CsvTable t = read_csv(dir / "aggregate.csv");
  const auto c_method = t.column("method"), c_metric = t.column("metric"),
             c_mean = t.column("mean_z"), c_std = t.column("std_z");
  std::vector<std::string> methods, metrics;
  std::map<std::pair<std::string, std::string>, std::string> cell;
  for (const auto& r : t.rows) {
    if (std::find(methods.begin(), methods.end(), r[c_method]) == methods.end()) {
      methods.push_back(r[c_method]);
    }
    if (std::find(metrics.begin(), metrics.end(), r[c_metric]) == metrics.end()) {
      metrics.push_back(r[c_metric]);
    }
    cell[{r[c_method], r[c_metric]}] = fixed(r[c_mean], 2) + " (" + fixed(r[c_std], 2) + ")";
  }
  md << "## Cross-split z-scores of benefit (mean (std) over splits)\n\n| method |";
  for (const auto& m : metrics) md << ' ' << m << " |";
  md << "\n|---|";
  for (std::size_t i = 0; i < metrics.size(); ++i) md << "---|";
  md << '\n';
  for (const auto& method : methods) {
    md << "| " << method << " |";
    for (const auto& m : metrics) md << ' ' << cell[{method, m}] << " |";
    md << '\n';
  }
  md << '\n';
}

void report_sweep(std::ostream& md, const fs::path& dir) {
  const CsvTable t = read_csv(dir / "sweep.csv");
  const auto c_split = t.column("split"), c_method = t.column("method"),
             c_theta = t.column("threshold"), c_delta = t.column("delta_f1"),
             c_pct = t.column("pct_incorrect_rejected");
  // (split, method, threshold) -> sums over folds
  std::map<std::tuple<std::string, std::string, double>, std::array<double, 3>> acc;
  std::vector<std::string> methods;
  std::set<double> thetas;
  for (const auto& r : t.rows) {
    const double theta = parse_double(r[c_theta]);
    auto& a = acc[{r[c_split], r[c_method], theta}];
    a[0] += parse_double(r[c_delta]);
    a[1] += parse_double(r[c_pct]);
    a[2] += 1.0;
    thetas.insert(theta);
    if (std::find(methods.begin(), methods.end(), r[c_method]) == methods.end()) {
      methods.push_back(r[c_method]);
    }
  }
  md << "## Abstention: mean ΔF1 in points (percent of rejected that were errors)\n\n";
  std::string current;
  for (const auto& [key, a] : acc) {
    const auto& [split, method, theta] = key;
    if (split != current) {
      current = split;
      md << "### " << split << "\n\n| method |";
      for (double th : thetas) md << ' ' << fixed(100.0 * th, 0) << "% |";
      md << "\n|---|";
      for (std::size_t i = 0; i < thetas.size(); ++i) md << "---|";
      md << '\n';
      for (const auto& m : methods) {
        md << "| " << m << " |";
        for (double th : thetas) {
          const auto it = acc.find({split, m, th});
          if (it == acc.end()) {
            md << " NA |";
            continue;
          }
          const auto& s = it->second;
          md << ' ' << fixed(s[0] / s[2], 2) << " (" << fixed(s[1] / s[2], 1) << ") |";
        }
        md << '\n';
      }
      md << '\n';
    }
  }
}

void report_correlations(std::ostream& md, const fs::path& dir) {
  const CsvTable t = read_csv(dir / "correlations.csv");
  const auto c_lang = t.column("language"), c_a = t.column("metric_a"),
             c_b = t.column("metric_b"), c_tau = t.column("tau"), c_sig = t.column("significance");
  std::vector<std::string> langs;
  std::vector<std::pair<std::string, std::string>> pairs;
  std::map<std::pair<std::pair<std::string, std::string>, std::string>, std::string> cell;
  for (const auto& r : t.rows) {
    const std::pair<std::string, std::string> pr{r[c_a], r[c_b]};
    if (std::find(langs.begin(), langs.end(), r[c_lang]) == langs.end()) langs.push_back(r[c_lang]);
    if (std::find(pairs.begin(), pairs.end(), pr) == pairs.end()) pairs.push_back(pr);
    std::string text = fixed(r[c_tau], 2);
    if (r[c_sig] == "p<0.01") text = "**" + text + "**";
    if (r[c_sig] == "p<0.05") text = "<u>" + text + "</u>";
    cell[{pr, r[c_lang]}] = text;
  }
  md << "## Kendall tau between metrics over (method, fold) cells\n\n"
     << "Bold: p < 0.01. Underlined: p < 0.05.\n\n| pair |";
  for (const auto& l : langs) md << ' ' << l << " |";
  md << "\n|---|";
  for (std::size_t i = 0; i < langs.size(); ++i) md << "---|";
  md << '\n';
  for (const auto& pr : pairs) {
    md << "| " << pr.first << " vs " << pr.second << " |";
    for (const auto& l : langs) md << ' ' << cell[{pr, l}] << " |";
    md << '\n';
  }
  md << '\n';
}

}  // namespace

std::vector<fs::path> run_report(const RunConfig& config) {
  const fs::path dir = report_dir(config);
  std::ostringstream md;
  md << "# Uncertainty estimation report\n\n"
     << "<!-- " << config.provenance("report") << " -->\n\n";
  bool any = false;
  if (fs::exists(dir / "near_best.csv")) {
    report_metrics(md, dir);
    any = true;
  }
  if (fs::exists(dir / "aggregate.csv")) {
    report_aggregate(md, dir);
    any = true;
  }
  if (fs::exists(dir / "sweep.csv")) {
    report_sweep(md, dir);
    any = true;
  }
  if (fs::exists(dir / "correlations.csv")) {
    report_correlations(md, dir);
    any = true;
  }
  if (!any) {
    throw ConfigError("no pipeline outputs (near_best.csv, aggregate.csv, sweep.csv, "
                      "correlations.csv) found in " + dir.string());
  }
  const fs::path path = output_path(config, "report.md");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << md.str();
  return {path};
}

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> kSubcommands = {
      "synth", "fit-stats", "score", "eval", "sweep", "correlate", "aggregate", "report"};
  return kSubcommands;
}

std::vector<fs::path> run(const std::string& subcommand, const RunConfig& config) {
  config.validate();
  if (subcommand == "synth") return run_synth(config);
  if (subcommand == "fit-stats") return run_fit_stats(config);
  if (subcommand == "score") return run_score(config);
  if (subcommand == "eval") return run_eval(config);
  if (subcommand == "sweep") return run_sweep(config);
  if (subcommand == "correlate") return run_correlate(config);
  if (subcommand == "aggregate") return run_aggregate(config);
  if (subcommand == "report") return run_report(config);
  throw ConfigError("unknown subcommand '" + subcommand + "'; valid: " +
                    join(subcommands(), ", "));
}

}  // namespace ue
