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

// Uncertainty scores computed from class probabilities alone. SR and ENT use
// the deterministic pass; SMP, ENT-MC, PV and BALD use the T stochastic
// (MC-dropout) passes. Entropies use the natural logarithm.

#ifndef UEKIT_PROB_SCORES_H_
#define UEKIT_PROB_SCORES_H_

#include <span>
#include <vector>

#include "uekit/core.h"

namespace ue {

using PassMatrix = std::vector<std::vector<double>>;

// Deterministic probabilities, stochastic passes and their cached mean.
class ProbabilityProfile {
 public:
  ProbabilityProfile(std::vector<double> det, PassMatrix passes);
  explicit ProbabilityProfile(const PredictionRecord& record);

  const std::vector<double>& det() const { return det_; }
  const PassMatrix& passes() const { return passes_; }
  const std::vector<double>& mean_passes() const { return mean_; }

 private:
  std::vector<double> det_;
  PassMatrix passes_;
  std::vector<double> mean_;
};

std::vector<double> mean_over_passes(const PassMatrix& passes);

// 1 - max_c p^c
double sr(std::span<const double> det);
// 1 - max_c mean_t p_t^c
double smp(const PassMatrix& passes);
// -sum_c p^c ln p^c with 0 ln 0 = 0
double ent(std::span<const double> probs);
// Entropy of the mean over passes.
double ent_mc(const PassMatrix& passes);
// Mean over classes of the population variance over passes.
double pv(const PassMatrix& passes);
// ent_mc minus the mean per-pass entropy (mutual information).
double bald(const PassMatrix& passes);
// Same quantity without the clamp of tiny negative round-off to zero.
double bald_unclamped(const PassMatrix& passes);

}  // namespace ue

#endif  // UEKIT_PROB_SCORES_H_
