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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.h"

namespace ue {
namespace {

CorrectnessVector Y(const std::vector<int>& v) {
  CorrectnessVector c;
  for (int x : v) c.values.push_back(static_cast<std::uint8_t>(x));
  return c;
}
ConfidenceVector C(std::vector<double> v) { return {std::move(v)}; }
ScoreVector U(std::vector<double> v) { return {"m", std::move(v)}; }

TEST(RocAuc, Examples) {
  EXPECT_EQ(roc_auc(Y({1, 0, 1, 0}), C({1, 0, 1, 0})), 1.0);
  EXPECT_EQ(roc_auc(Y({1, 0, 1, 0}), C({0.3, 0.3, 0.3, 0.3})), 0.5);
  EXPECT_EQ(roc_auc(Y({1, 0, 1}), C({0.9, 0.8, 0.1})), 0.5);
  EXPECT_THROW(roc_auc(Y({1, 1}), C({0.1, 0.2})), UndefinedError);
  EXPECT_THROW(roc_auc(Y({0, 0}), C({0.1, 0.2})), UndefinedError);
}

TEST(RocAuc, MatchesPairCountingAndIsRankBased) {
  std::mt19937_64 gen(100);
  std::uniform_real_distribution<double> ud;
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + gen() % 299;
    std::vector<int> y(n);
    std::vector<double> c(n);
    for (std::size_t i = 0; i < n; ++i) {
      c[i] = std::round(ud(gen) * 20.0) / 20.0;
      y[i] = ud(gen) < c[i] ? 1 : 0;
    }
    y[0] = 1;
    y[1] = 0;
    const double auc = roc_auc(Y(y), C(c));
    EXPECT_EQ(auc, oracle::roc_auc(y, c));
    std::vector<double> t = c;
    for (auto& x : t) x = std::exp(3.0 * x);
    EXPECT_EQ(roc_auc(Y(y), C(t)), auc);
  }
}

TEST(RocAuc, ComplementSumsToOne) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> ud;
  std::vector<int> y(200);
  std::vector<double> c(200), flipped(200);
  for (std::size_t i = 0; i < 200; ++i) {
    c[i] = ud(gen);
    flipped[i] = 1.0 - c[i];
    y[i] = ud(gen) < 0.7;
  }
  EXPECT_NEAR(roc_auc(Y(y), C(c)) + roc_auc(Y(y), C(flipped)), 1.0, 1e-12);
}

TEST(AuPrc, Examples) {
  EXPECT_EQ(au_prc(Y({0, 0, 0}), U({0.1, 0.5, 0.2})), 1.0);
  EXPECT_EQ(au_prc(Y({1, 0, 1, 0}), U({0.1, 0.8, 0.2, 0.9})), 1.0);
  EXPECT_NEAR(au_prc(Y({0, 1, 0}), U({0.9, 0.8, 0.1})), 5.0 / 6.0, 1e-15);
  EXPECT_THROW(au_prc(Y({1, 1}), U({0.1, 0.2})), UndefinedError);
}

TEST(AuPrc, FlagsTies) {
  EXPECT_FALSE(au_prc_detailed(Y({0, 1}), U({0.1, 0.2})).has_ties);
  EXPECT_TRUE(au_prc_detailed(Y({0, 1, 1}), U({0.1, 0.2, 0.1})).has_ties);
}

TEST(AuPrc, MatchesOracleAndIsRankBased) {
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> ud;
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + gen() % 200;
    std::vector<int> y(n);
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) {
      u[i] = std::round(ud(gen) * 30.0) / 30.0;
      y[i] = ud(gen) < u[i] ? 0 : 1;
    }
    y[0] = 0;
    const double ap = au_prc(Y(y), U(u));
    EXPECT_NEAR(ap, oracle::average_precision(y, u), 1e-12);
    std::vector<double> t = u;
    for (auto& x : t) x = 5.0 * x * x * x - 2.0;
    EXPECT_EQ(au_prc(Y(y), U(t)), ap);
  }
}

TEST(CSlope, Examples) {
  const auto id = c_slope(Y({1, 0, 1, 1}), C({1, 0, 1, 1}));
  EXPECT_NEAR(id.slope, 1.0, 1e-15);
  EXPECT_NEAR(id.intercept, 0.0, 1e-15);
  const auto f = c_slope(Y({0, 1}), C({0.2, 0.8}));
  EXPECT_NEAR(f.slope, 0.15 / 0.09, 1e-12);
  EXPECT_NEAR(f.intercept, -1.0 / 3.0, 1e-12);
  EXPECT_EQ(f.n, 2u);
  const auto flat = c_slope(Y({1, 1, 1}), C({0.1, 0.5, 0.7}));
  EXPECT_NEAR(flat.slope, 0.0, 1e-15);
  EXPECT_NEAR(flat.intercept, 1.0, 1e-15);
  EXPECT_THROW(c_slope(Y({1, 0}), C({0.4, 0.4})), UndefinedError);
  EXPECT_THROW(c_slope(Y({1}), C({0.4})), UndefinedError);
}

TEST(Citl, Examples) {
  EXPECT_NEAR(citl(Y({1, 0}), C({0.75, 0.25})), 0.0, 1e-15);
  EXPECT_NEAR(citl(Y({1, 0}), C({0.9, 0.7})), 0.3, 1e-15);
  EXPECT_EQ(citl(Y({0, 0, 0}), C({1, 1, 1})), 1.0);
  EXPECT_THROW(citl(Y({}), C({})), Error);
}

TEST(Ece, Examples) {
  EXPECT_EQ(ece(Y({1, 1, 1}), C({1, 1, 1})), 0.0);
  EXPECT_NEAR(ece(Y({1, 1, 0, 0}), C({0.9, 0.9, 0.9, 0.9})), 0.4, 1e-15);
  EXPECT_THROW(ece(Y({}), C({})), Error);
  EXPECT_THROW(ece(Y({1}), C({0.5}), BinningConfig{0}), Error);
}

TEST(Ece, BinBoundaries) {
  EXPECT_EQ(ece_bin(0.0, 15), 0);
  EXPECT_EQ(ece_bin(1.0, 15), 14);
  EXPECT_EQ(ece_bin(0.5, 2), 1);
  EXPECT_EQ(ece_bin(0.4999, 2), 0);
  EXPECT_EQ(ece_bin(0.1, 10), 1);
}

TEST(Ece, SingleBinEqualsAbsCitlAndBounded) {
  std::mt19937_64 gen(13);
  std::uniform_real_distribution<double> ud;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + gen() % 100;
    std::vector<int> y(n);
    std::vector<double> c(n);
    for (std::size_t i = 0; i < n; ++i) {
      c[i] = ud(gen);
      y[i] = ud(gen) < 0.5;
    }
    EXPECT_EQ(ece(Y(y), C(c), BinningConfig{1}), std::fabs(citl(Y(y), C(c))));
    const double e = ece(Y(y), C(c));
    EXPECT_GE(e, 0.0);
    EXPECT_LE(e, 1.0);
  }
}

TEST(Ece, CalibratedGenerator) {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> ud;
  const std::size_t n = 100000;
  std::vector<int> y(n);
  std::vector<double> c(n);
  for (std::size_t i = 0; i < n; ++i) {
    c[i] = ud(gen);
    y[i] = ud(gen) < c[i];
  }
  EXPECT_LT(ece(Y(y), C(c)), 0.01);
}

}  // namespace
}  // namespace ue
