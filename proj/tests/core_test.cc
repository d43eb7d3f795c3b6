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

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "oracles.h"

namespace ue {
namespace {

ScoreVector Scores(std::vector<double> v) { return {"m", std::move(v)}; }

TEST(PredictedLabel, Argmax) {
  EXPECT_EQ(argmax(std::vector<double>{0.2, 0.8}), 1);
  EXPECT_EQ(argmax(std::vector<double>{0.5, 0.5}), 0);
  EXPECT_EQ(argmax(std::vector<double>{0.1, 0.3, 0.6}), 2);
  PredictionRecord r;
  r.det_probs = {0.3, 0.3, 0.4};
  EXPECT_EQ(predicted_label(r), 2);
}

TEST(MinmaxNormalize, Examples) {
  EXPECT_EQ(minmax_normalize(Scores({2, 4, 6})).values, (std::vector<double>{0, 0.5, 1}));
  EXPECT_EQ(minmax_normalize(Scores({7, 7, 7})).values, (std::vector<double>{0.5, 0.5, 0.5}));
  const auto v = minmax_normalize(Scores({-1, 0, 3})).values;
  EXPECT_DOUBLE_EQ(v[0], 0.0);
  EXPECT_DOUBLE_EQ(v[1], 1.0 / 4.0);
  EXPECT_DOUBLE_EQ(v[2], 1.0);
  EXPECT_THROW(minmax_normalize(Scores({})), Error);
}

TEST(MinmaxNormalize, PreservesStrictOrder) {
  std::mt19937_64 gen(7);
  std::normal_distribution<double> nd(0.0, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(40);
    for (auto& x : v) x = nd(gen);
    const auto w = minmax_normalize(Scores(v)).values;
    for (std::size_t i = 0; i < v.size(); ++i) {
      EXPECT_GE(w[i], 0.0);
      EXPECT_LE(w[i], 1.0);
      for (std::size_t j = 0; j < v.size(); ++j) {
        if (v[i] < v[j]) EXPECT_LT(w[i], w[j]);
      }
    }
    EXPECT_EQ(std::max_element(v.begin(), v.end()) - v.begin(),
              std::max_element(w.begin(), w.end()) - w.begin());
    EXPECT_EQ(std::min_element(v.begin(), v.end()) - v.begin(),
              std::min_element(w.begin(), w.end()) - w.begin());
  }
}

TEST(ToConfidence, Examples) {
  EXPECT_EQ(to_confidence(Scores({0, 0.5, 1})).values, (std::vector<double>{1, 0.5, 0}));
  EXPECT_EQ(to_confidence(Scores({2, 4, 6})).values, (std::vector<double>{1, 0.5, 0}));
  EXPECT_EQ(to_confidence(Scores({3, 3})).values, (std::vector<double>{0.5, 0.5}));
  EXPECT_THROW(to_confidence(Scores({})), Error);
}

TEST(ToConfidence, Antitone) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> ud(-3.0, 9.0);
  std::vector<double> u(100);
  for (auto& x : u) x = ud(gen);
  const auto c = to_confidence(Scores(u)).values;
  for (std::size_t i = 0; i < u.size(); ++i) {
    for (std::size_t j = 0; j < u.size(); ++j) {
      if (u[i] < u[j]) EXPECT_GT(c[i], c[j]);
    }
  }
}

TEST(MacroF1, Examples) {
  const std::vector<int> y = {0, 1, 2, 1, 0};
  EXPECT_DOUBLE_EQ(macro_f1(y, y, 3), 1.0);
  // One class absent from both sides still gives 1 on a perfect prediction.
  EXPECT_DOUBLE_EQ(macro_f1(std::vector<int>{1, 1}, std::vector<int>{1, 1}, 3), 1.0);
  EXPECT_DOUBLE_EQ(macro_f1(std::vector<int>{1, 0, 1}, std::vector<int>{0, 1, 0}, 2), 0.0);
  EXPECT_NEAR(macro_f1(std::vector<int>{0, 0, 1, 1}, std::vector<int>{0, 1, 1, 1}, 2),
              (2.0 / 3.0 + 4.0 / 5.0) / 2.0, 1e-15);
}

TEST(MacroF1, Errors) {
  EXPECT_THROW(macro_f1(std::vector<int>{}, std::vector<int>{}, 2), Error);
  EXPECT_THROW(macro_f1(std::vector<int>{0, 2}, std::vector<int>{0, 1}, 2), Error);
  EXPECT_THROW(macro_f1(std::vector<int>{0}, std::vector<int>{0, 1}, 2), Error);
}

TEST(MacroF1, MatchesBruteForceAndIsPermutationInvariant) {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 500; ++trial) {
    const int classes = 2 + static_cast<int>(gen() % 3);
    const std::size_t n = 1 + gen() % 50;
    std::vector<int> p(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = static_cast<int>(gen() % classes);
      y[i] = static_cast<int>(gen() % classes);
    }
    const double f1 = macro_f1(p, y, classes);
    EXPECT_NEAR(f1, oracle::macro_f1(p, y, classes), 1e-15);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), gen);
    std::vector<int> p2(n), y2(n);
    for (std::size_t i = 0; i < n; ++i) {
      p2[i] = p[perm[i]];
      y2[i] = y[perm[i]];
    }
    EXPECT_EQ(macro_f1(p2, y2, classes), f1);
  }
}

TEST(Correctness, Indicators) {
  const auto c = correctness(std::vector<int>{0, 1, 1}, std::vector<int>{0, 0, 1});
  EXPECT_EQ(c.values, (std::vector<std::uint8_t>{1, 0, 1}));
  EXPECT_EQ(c.correct_count(), 2u);
  EXPECT_EQ(c.error_count(), 1u);
}

}  // namespace
}  // namespace ue
