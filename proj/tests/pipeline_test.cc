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

#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "uekit/csv.h"

namespace ue {
namespace {

namespace fs = std::filesystem;

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class PipelineTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("uekit_pipeline_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  RunConfig Config(std::vector<fs::path> inputs = {}) const {
    RunConfig c;
    c.inputs = std::move(inputs);
    c.out = dir_;
    c.seed = 5;
    c.suite.split_count = 2;
    c.suite.fold_count = 3;
    c.suite.base.per_class = 40;
    c.suite.base.train_per_class = 40;
    c.suite.base.passes = 5;
    c.isof_trees = 20;
    return c;
  }

  // synth -> fit-stats -> score -> eval -> sweep -> correlate -> aggregate -> report
  void RunAll() {
    run("synth", Config());
    RunConfig fit = Config();
    fit.train = dir_ / "train.jsonl";
    run("fit-stats", fit);
    RunConfig score = Config({dir_ / "predictions.jsonl"});
    score.train = dir_ / "train.jsonl";
    score.stats = dir_ / "stats.json";
    run("score", score);
    run("eval", Config({dir_ / "scores.csv"}));
    run("sweep", Config({dir_ / "scores.csv"}));
    run("correlate", Config({dir_ / "metrics.csv"}));
    run("aggregate", Config({dir_ / "metrics.csv"}));
    run("report", Config({dir_}));
  }

  int Cli(const std::string& args, std::string* err = nullptr) const {
    const fs::path err_file = dir_ / "stderr.txt";
    const std::string cmd = std::string(UEKIT_CLI_PATH) + " " + args + " > " +
                            (dir_ / "stdout.txt").string() + " 2> " + err_file.string();
    const int status = std::system(cmd.c_str());
    if (err) *err = Slurp(err_file);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  fs::path dir_;
};

TEST_F(PipelineTest, FullRunProducesCompleteTables) {
  RunAll();
  const auto metrics = read_csv(dir_ / "metrics.csv");
  EXPECT_EQ(metrics.rows.size(), 2u * 3u * 10u * 10u);
  for (const auto& row : metrics.rows) {
    EXPECT_NE(row[metrics.column("value")], "NA") << row[2] << " " << row[3];
  }
  const auto agg = read_csv(dir_ / "aggregate.csv");
  EXPECT_EQ(agg.rows.size(), 100u);
  const auto corr = read_csv(dir_ / "correlations.csv");
  EXPECT_EQ(corr.rows.size(), 2u * 45u);
  EXPECT_EQ(corr.header,
            (std::vector<std::string>{"language", "metric_a", "metric_b", "n", "tau", "p",
                                      "significance"}));
  const auto sweep = read_csv(dir_ / "sweep.csv");
  EXPECT_EQ(sweep.rows.size(), 2u * 3u * 10u * 4u);
  const auto scores = read_csv(dir_ / "scores.csv");
  EXPECT_EQ(scores.rows.size(), 2u * 3u * 80u);
  EXPECT_TRUE(fs::exists(dir_ / "report.md"));
  EXPECT_NE(Slurp(dir_ / "report.md").find("## Kendall tau"), std::string::npos);
  for (const char* name : {"scores.csv", "metrics.csv", "sweep.csv", "curves.csv",
                           "correlations.csv", "aggregate.csv", "zscores.csv", "near_best.csv"}) {
    const auto t = read_csv(dir_ / name);
    ASSERT_EQ(t.comments.size(), 1u) << name;
    EXPECT_EQ(t.comments[0].rfind("uekit 1.0.0 seed=5 config=", 0), 0u) << name;
    EXPECT_FALSE(t.header.empty());
  }
}

TEST_F(PipelineTest, RerunIsByteIdenticalAndInputsUntouched) {
  RunAll();
  std::map<std::string, std::string> first;
  for (const auto& e : fs::directory_iterator(dir_)) first[e.path().filename()] = Slurp(e.path());
  RunAll();
  for (const auto& [name, content] : first) {
    EXPECT_EQ(Slurp(dir_ / name), content) << name;
  }
  const std::string preds = Slurp(dir_ / "predictions.jsonl");
  RunConfig score = Config({dir_ / "predictions.jsonl"});
  score.train = dir_ / "train.jsonl";
  score.out = dir_ / "again";
  run("score", score);
  EXPECT_EQ(Slurp(dir_ / "predictions.jsonl"), preds);
  EXPECT_EQ(Slurp(dir_ / "again" / "scores.csv"), first["scores.csv"]);
}

TEST_F(PipelineTest, StatsFittedOnTheFlyMatchStatsFile) {
  run("synth", Config());
  RunConfig score = Config({dir_ / "predictions.jsonl"});
  score.train = dir_ / "train.jsonl";
  score.methods = {"md", "huq_md"};
  run("score", score);
  const std::string direct = Slurp(dir_ / "scores.csv");
  RunConfig fit = Config();
  fit.train = dir_ / "train.jsonl";
  run("fit-stats", fit);
  score.stats = dir_ / "stats.json";
  run("score", score);
  EXPECT_EQ(Slurp(dir_ / "scores.csv"), direct);
}

TEST_F(PipelineTest, TimingColumns) {
  run("synth", Config());
  RunConfig score = Config({dir_ / "predictions.jsonl"});
  score.methods = {"sr", "bald"};
  score.timing = true;
  run("score", score);
  const auto t = read_csv(dir_ / "scores.csv");
  EXPECT_TRUE(t.has_column("sr_wall_ms"));
  EXPECT_TRUE(t.has_column("bald_wall_ms"));
  EXPECT_FALSE(t.has_column("md"));
  // Timing columns are ignored on read.
  run("eval", Config({dir_ / "scores.csv"}));
  EXPECT_EQ(read_csv(dir_ / "metrics.csv").rows.size(), 6u * 2u * 10u);
}

TEST_F(PipelineTest, ConfigErrors) {
  EXPECT_THROW(resolve_names("sr,nope", method_registry(), "method"), ConfigError);
  try {
    resolve_names("nope", method_registry(), "method");
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("sr, smp, ent, ent_mc, pv, bald, md, huq_md, lof, isof"),
              std::string::npos);
  }
  EXPECT_EQ(resolve_names("isof,sr", method_registry(), "method"),
            (std::vector<std::string>{"sr", "isof"}));
  EXPECT_THROW(run("score", Config({dir_ / "missing.jsonl"})), ConfigError);
  run("synth", Config());
  RunConfig lof = Config({dir_ / "predictions.jsonl"});
  lof.methods = {"lof"};
  EXPECT_THROW(run("score", lof), ConfigError);
  RunConfig bad = Config();
  bad.alpha = 2.0;
  EXPECT_THROW(run("synth", bad), ConfigError);
  EXPECT_THROW(run("bogus", Config()), ConfigError);
  EXPECT_THROW(run("report", Config({dir_ / "predictions.jsonl"})), ConfigError);
}

TEST_F(PipelineTest, CliExitCodes) {
  std::string err;
  EXPECT_EQ(Cli("synth --out " + dir_.string() + " --per-class 20 --train-per-class 20"), 0);
  EXPECT_EQ(Cli("score --input " + (dir_ / "predictions.jsonl").string() + " --methods sr,xyz --out " +
                    dir_.string(),
                &err),
            2);
  EXPECT_NE(err.find("valid methods: sr, smp, ent, ent_mc, pv, bald, md, huq_md, lof, isof"),
            std::string::npos)
      << err;
  EXPECT_EQ(Cli("score --bogus-flag", &err), 2);
  EXPECT_EQ(Cli("", &err), 2);
  EXPECT_EQ(Cli("synth --classes 1 --out " + dir_.string(), &err), 2);

  std::ofstream(dir_ / "broken.jsonl") << "{\"id\": 1}\n";
  EXPECT_EQ(Cli("score --methods sr --input " + (dir_ / "broken.jsonl").string() + " --out " +
                    dir_.string(),
                &err),
            1);
  const auto line = nlohmann::json::parse(err.substr(0, err.find('\n')));
  EXPECT_EQ(line["error"], "module");
  EXPECT_EQ(line["subcommand"], "score");
  EXPECT_NE(line["message"].get<std::string>().find("broken.jsonl:1"), std::string::npos);
}

TEST_F(PipelineTest, CliEvalTwiceIsIdentical) {
  const std::string out = " --out " + dir_.string();
  ASSERT_EQ(Cli("synth --seed 9 --splits 1 --folds 2 --per-class 30 --train-per-class 30" + out), 0);
  ASSERT_EQ(Cli("score --methods sr,ent,pv,md --input " + (dir_ / "predictions.jsonl").string() +
                " --train " + (dir_ / "train.jsonl").string() + out),
            0);
  ASSERT_EQ(Cli("eval --seed 9 --input " + (dir_ / "scores.csv").string() + out), 0);
  const std::string first = Slurp(dir_ / "metrics.csv");
  ASSERT_EQ(Cli("eval --seed 9 --input " + (dir_ / "scores.csv").string() + out), 0);
  EXPECT_EQ(Slurp(dir_ / "metrics.csv"), first);
}

TEST_F(PipelineTest, DegenerateSplitYieldsNa) {
  // Every prediction correct: error-based metrics are undefined.
  std::ofstream f(dir_ / "easy.jsonl");
  for (int i = 0; i < 6; ++i) {
    f << R"({"id":")" << i << R"(","split":"e","fold":0,"label":)" << i % 2
      << R"(,"probs":)" << (i % 2 ? "[0.1,0.9]" : "[0.8,0.2]")
      << R"(,"mc_probs":[[0.5,0.5]],"embedding":[)" << i << "]}\n";
  }
  f.close();
  RunConfig score = Config({dir_ / "easy.jsonl"});
  score.methods = {"sr"};
  run("score", score);
  RunConfig eval = Config({dir_ / "scores.csv"});
  eval.methods = {"sr"};
  run("eval", eval);
  const auto report = read_metrics(dir_ / "metrics.csv");
  EXPECT_TRUE(report.find({"e", 0, "sr", "roc_auc"})->is_na());
  EXPECT_TRUE(report.find({"e", 0, "sr", "au_prc"})->is_na());
  EXPECT_TRUE(report.find({"e", 0, "sr", "nrc_auc"})->is_na());
  EXPECT_FALSE(report.find({"e", 0, "sr", "ti"})->is_na());
  EXPECT_FALSE(report.find({"e", 0, "sr", "roc_auc"})->na_reason.empty());
}

}  // namespace
}  // namespace ue
