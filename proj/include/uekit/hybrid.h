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

#ifndef UEKIT_HYBRID_H_
#define UEKIT_HYBRID_H_

#include <span>
#include <vector>

#include "uekit/core.h"

namespace ue {

inline constexpr double kDefaultHuqAlpha = 0.5;

// Fractional ranks in [0,1]; tied values share their average rank.
struct RankVector {
  std::vector<double> values;
};

// Ascending average ranks r in [1,n], rescaled as (r - 1) / (n - 1).
// A single element gets 0.5.
RankVector rank_transform(std::span<const double> scores);
inline RankVector rank_transform(const ScoreVector& scores) {
  return rank_transform(scores.values);
}

// (1 - alpha) * rank(epistemic) + alpha * rank(aleatoric). HUQ-MD uses the
// Mahalanobis score as the epistemic part and SR as the aleatoric part.
ScoreVector huq(const ScoreVector& epistemic, const ScoreVector& aleatoric,
                double alpha);

}  // namespace ue

#endif  // UEKIT_HYBRID_H_
