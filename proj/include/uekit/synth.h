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

// Synthetic classifier outputs with known ground truth.
//
// Class c has mean (s / sqrt(2)) e_c, so every pair of means is s apart, and
// embeddings are unit-variance Gaussians around it. The classifier is the
// Bayes-optimal linear scorer for the unshifted classes,
//   z_c = mu_c . x - |mu_c|^2 / 2,
// so softmax(z) is exactly the posterior: at temperature 1 and shift 0 the
// deterministic probabilities are calibrated. Temperature divides the
// logits, MC passes add N(0, sigma^2) noise to the scaled logits, and the
// test shift moves every embedding along the unit all-ones direction, which
// changes embeddings without changing probabilities.

#ifndef UEKIT_SYNTH_H_
#define UEKIT_SYNTH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "uekit/core.h"

namespace ue {

struct SynthConfig {
  int class_count = 2;
  int dim = 8;
  int per_class = 200;        // test records per class
  int train_per_class = 400;  // training records per class
  double separation = 2.5;
  double temperature = 1.0;
  double mc_noise = 0.5;
  double shift = 0.0;
  int passes = 20;
  // Probability that a label is redrawn uniformly at random, independent of
  // the embedding. Makes confidence a weaker predictor of correctness.
  double label_noise = 0.0;
  std::uint64_t seed = 0;
  std::string split = "synth";
  int fold = 0;

  void validate() const;
};

struct SynthData {
  std::vector<PredictionRecord> train;  // probabilities filled as for test
  EvalSplit test;
};

SynthData generate(const SynthConfig& config);

// Several splits, each with several folds, for end-to-end runs. Split i
// scales the separation by (1 + 0.2 i) and the temperature by (1 + 0.5 i);
// every (split, fold) cell gets its own derived seed.
struct SuiteConfig {
  SynthConfig base;
  int split_count = 3;
  int fold_count = 5;
};

std::vector<SynthData> generate_suite(const SuiteConfig& config);

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b);

}  // namespace ue

#endif  // UEKIT_SYNTH_H_
