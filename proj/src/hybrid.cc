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

#include <algorithm>
#include <numeric>
#include <string>

namespace ue {

RankVector rank_transform(std::span<const double> scores) {
  const std::size_t n = scores.size();
  if (n == 0) throw Error("rank_transform: empty input");
  RankVector out;
  out.values.assign(n, 0.5);
  if (n == 1) return out;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });
  const double scale = static_cast<double>(n - 1);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    // 1-based ranks i+1 .. j share their average (i + 1 + j) / 2.
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);
    const double value = (avg_rank - 1.0) / scale;
    for (std::size_t t = i; t < j; ++t) out.values[order[t]] = value;
    i = j;
  }
  return out;
}

ScoreVector huq(const ScoreVector& epistemic, const ScoreVector& aleatoric,
                double alpha) {
  if (epistemic.size() != aleatoric.size()) {
    throw Error("huq: epistemic and aleatoric lengths differ (" +
                std::to_string(epistemic.size()) + " vs " +
                std::to_string(aleatoric.size()) + ")");
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error("huq: alpha must lie in [0,1]");
  }
  const RankVector re = rank_transform(epistemic);
  const RankVector ra = rank_transform(aleatoric);
  ScoreVector out{"huq", std::vector<double>(epistemic.size())};
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.values[i] = (1.0 - alpha) * re.values[i] + alpha * ra.values[i];
  }
  return out;
}

}  // namespace ue
