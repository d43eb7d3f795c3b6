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

#include "uekit/hybrid.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace ue {
namespace {

TEST(RankTransform, Examples) {
  EXPECT_EQ(rank_transform(std::vector<double>{10, 20, 30}).values,
            (std::vector<double>{0, 0.5, 1}));
  EXPECT_EQ(rank_transform(std::vector<double>{5, 5, 9}).values,
            (std::vector<double>{0.25, 0.25, 1}));
  EXPECT_EQ(rank_transform(std::vector<double>{42}).values, (std::vector<double>{0.5}));
  EXPECT_THROW(rank_transform(std::vector<double>{}), Error);
}

TEST(RankTransform, MeanHalfAndIdempotent) {
  std::mt19937_64 gen(1);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(1 + gen() % 60);
    for (auto& x : v) x = std::round(4.0 * nd(gen)) / 4.0;  // plenty of ties
    const auto r = rank_transform(v).values;
    double mean = 0.0;
    for (double x : r) mean += x / r.size();
    EXPECT_NEAR(mean, 0.5, 1e-12);
    EXPECT_EQ(rank_transform(r).values, r);
    for (std::size_t i = 0; i < v.size(); ++i) {
      for (std::size_t j = 0; j < v.size(); ++j) {
        if (v[i] == v[j]) EXPECT_EQ(r[i], r[j]);
        if (v[i] < v[j]) EXPECT_LT(r[i], r[j]);
      }
    }
  }
}

TEST(Huq, Examples) {
  const ScoreVector e{"md", {3, 1, 2}};
  const ScoreVector a{"sr", {0.1, 0.9, 0.5}};
  EXPECT_EQ(huq(e, a, 0.0).values, rank_transform(e).values);
  EXPECT_EQ(huq(e, a, 1.0).values, rank_transform(a).values);
  const ScoreVector up{"md", {1, 2, 3}};
  const ScoreVector down{"sr", {3, 2, 1}};
  EXPECT_EQ(huq(up, down, 0.5).values, (std::vector<double>{0.5, 0.5, 0.5}));
}

TEST(Huq, Errors) {
  const ScoreVector e{"md", {1, 2}};
  EXPECT_THROW(huq(e, ScoreVector{"sr", {1}}, 0.5), Error);
  EXPECT_THROW(huq(e, e, -0.1), Error);
  EXPECT_THROW(huq(e, e, 1.5), Error);
}

TEST(Huq, Properties) {
  std::mt19937_64 gen(2);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + gen() % 40;
    ScoreVector e{"md", std::vector<double>(n)}, a{"sr", std::vector<double>(n)};
    for (auto& x : e.values) x = nd(gen);
    for (auto& x : a.values) x = nd(gen);
    const double alpha = std::uniform_real_distribution<double>(0, 1)(gen);
    const auto h = huq(e, a, alpha).values;
    for (double x : h) {
      EXPECT_GE(x, 0.0);
      EXPECT_LE(x, 1.0);
    }
    // Strictly monotone transforms of either input change nothing.
    ScoreVector e2 = e, a2 = a;
    for (auto& x : e2.values) x = std::exp(x) * 3.0 + 1.0;
    for (auto& x : a2.values) x = x * x * x;
    EXPECT_EQ(huq(e2, a2, alpha).values, h);
    // Equal orderings pass through for any alpha.
    ScoreVector same{"sr", e.values};
    for (auto& x : same.values) x = 2.0 * x - 1.0;
    const auto hs = huq(e, same, alpha).values;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (e.values[i] < e.values[j]) EXPECT_LT(hs[i], hs[j]);
      }
    }
  }
}

}  // namespace
}  // namespace ue
