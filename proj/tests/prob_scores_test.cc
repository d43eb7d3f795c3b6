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

#include "uekit/prob_scores.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace ue {
namespace {

constexpr double kTol = 1e-12;

std::vector<double> RandomSimplex(std::mt19937_64& gen, int classes) {
  std::exponential_distribution<double> ex(1.0);
  std::vector<double> p(classes);
  double s = 0.0;
  for (auto& v : p) s += (v = ex(gen));
  for (auto& v : p) v /= s;
  return p;
}

PassMatrix RandomPasses(std::mt19937_64& gen, int passes, int classes) {
  PassMatrix m;
  for (int t = 0; t < passes; ++t) m.push_back(RandomSimplex(gen, classes));
  return m;
}

TEST(Sr, Examples) {
  EXPECT_EQ(sr(std::vector<double>{1, 0}), 0.0);
  EXPECT_NEAR(sr(std::vector<double>{0.7, 0.3}), 0.3, kTol);
  EXPECT_NEAR(sr(std::vector<double>{0.25, 0.25, 0.25, 0.25}), 0.75, kTol);
}

TEST(Smp, Examples) {
  EXPECT_NEAR(smp({{0.7, 0.3}, {0.7, 0.3}}), sr(std::vector<double>{0.7, 0.3}), kTol);
  EXPECT_NEAR(smp({{0.9, 0.1}, {0.5, 0.5}}), 0.3, kTol);
  EXPECT_NEAR(smp({{1, 0}, {0, 1}}), 0.5, kTol);
}

TEST(Ent, Examples) {
  EXPECT_EQ(ent(std::vector<double>{1, 0, 0}), 0.0);
  EXPECT_NEAR(ent(std::vector<double>{0.5, 0.5}), std::log(2.0), kTol);
  EXPECT_NEAR(ent(std::vector<double>{0.7, 0.2, 0.1}), 0.801818552543337309, kTol);
  for (int c = 2; c <= 10; ++c) {
    EXPECT_NEAR(ent(std::vector<double>(c, 1.0 / c)), std::log(static_cast<double>(c)), kTol);
  }
}

TEST(EntMc, Examples) {
  EXPECT_NEAR(ent_mc({{0.7, 0.2, 0.1}, {0.7, 0.2, 0.1}}),
              ent(std::vector<double>{0.7, 0.2, 0.1}), kTol);
  EXPECT_NEAR(ent_mc({{1, 0}, {0, 1}}), std::log(2.0), kTol);
  EXPECT_NEAR(ent_mc({{0.9, 0.1}, {0.5, 0.5}}), 0.610864302054893463, kTol);
}

TEST(Pv, Examples) {
  EXPECT_EQ(pv({{0.3, 0.7}, {0.3, 0.7}}), 0.0);
  EXPECT_NEAR(pv({{1, 0}, {0, 1}}), 0.25, kTol);
  EXPECT_EQ(pv({{0.1, 0.9}}), 0.0);
}

TEST(Bald, Examples) {
  EXPECT_NEAR(bald({{0.3, 0.7}, {0.3, 0.7}}), 0.0, kTol);
  EXPECT_GE(bald({{0.3, 0.7}, {0.3, 0.7}}), 0.0);
  EXPECT_NEAR(bald({{1, 0}, {0, 1}}), std::log(2.0), kTol);
  // ent([.7,.3]) - (ent([.9,.1]) + ln 2) / 2
  EXPECT_NEAR(bald({{0.9, 0.1}, {0.5, 0.5}}),
              0.610864302054893463 - (0.325082973391448240 + 0.69314718055994531) / 2.0, kTol);
}

TEST(ProbabilityProfile, MeanPasses) {
  ProbabilityProfile p({0.5, 0.5}, {{0.9, 0.1}, {0.5, 0.5}});
  EXPECT_NEAR(p.mean_passes()[0], 0.7, 1e-15);
  EXPECT_NEAR(p.mean_passes()[1], 0.3, 1e-15);
}

TEST(ProbScores, RandomProperties) {
  std::mt19937_64 gen(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const int classes = 2 + static_cast<int>(gen() % 4);
    const int passes = 1 + static_cast<int>(gen() % 10);
    const PassMatrix m = RandomPasses(gen, passes, classes);
    const auto det = RandomSimplex(gen, classes);
    const double lnc = std::log(static_cast<double>(classes));
    EXPECT_GE(sr(det), 0.0);
    EXPECT_LE(sr(det), 1.0 - 1.0 / classes + 1e-15);
    EXPECT_GE(ent(det), 0.0);
    EXPECT_LE(ent(det), lnc + 1e-12);
    EXPECT_GE(bald_unclamped(m), -1e-12);
    EXPECT_LE(bald(m), ent_mc(m) + 1e-12);
    EXPECT_GE(pv(m), 0.0);
    EXPECT_LE(pv(m), 0.25);
    EXPECT_EQ(smp(m), sr(mean_over_passes(m)));

    // Pass order does not matter.
    PassMatrix shuffled = m;
    std::shuffle(shuffled.begin(), shuffled.end(), gen);
    EXPECT_NEAR(smp(shuffled), smp(m), 1e-15);
    EXPECT_NEAR(ent_mc(shuffled), ent_mc(m), 1e-14);
    EXPECT_NEAR(pv(shuffled), pv(m), 1e-15);
    EXPECT_NEAR(bald(shuffled), bald(m), 1e-14);

    // Neither does class order, applied consistently.
    std::vector<int> perm(classes);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), gen);
    PassMatrix permuted = m;
    for (int t = 0; t < passes; ++t) {
      for (int c = 0; c < classes; ++c) permuted[t][c] = m[t][perm[c]];
    }
    std::vector<double> det_p(classes);
    for (int c = 0; c < classes; ++c) det_p[c] = det[perm[c]];
    EXPECT_EQ(sr(det_p), sr(det));
    EXPECT_NEAR(ent(det_p), ent(det), 1e-14);
    EXPECT_NEAR(smp(permuted), smp(m), 1e-15);
    EXPECT_NEAR(ent_mc(permuted), ent_mc(m), 1e-14);
    EXPECT_NEAR(pv(permuted), pv(m), 1e-15);
    EXPECT_NEAR(bald(permuted), bald(m), 1e-14);
  }
}

}  // namespace
}  // namespace ue
