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

#include "uekit/synth.h"

#include <algorithm>
#include <cmath>

#include "uekit/random.h"

namespace ue {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<double> softmax(const std::vector<double>& z) {
  const double m = *std::max_element(z.begin(), z.end());
  std::vector<double> p(z.size());
  double sum = 0.0;
  for (std::size_t c = 0; c < z.size(); ++c) {
    p[c] = std::exp(z[c] - m);
    sum += p[c];
  }
  for (double& v : p) v /= sum;
  return p;
}

class Generator {
 public:
  explicit Generator(const SynthConfig& config)
      : cfg_(config), rng_(config.seed), scale_(config.separation / std::sqrt(2.0)) {}

  PredictionRecord draw(int cls, bool shifted, const std::string& id) {
    PredictionRecord r;
    r.id = id;
    r.split = cfg_.split;
    r.fold = cfg_.fold;
    r.embedding.resize(static_cast<std::size_t>(cfg_.dim));
    const double offset = shifted ? cfg_.shift / std::sqrt(static_cast<double>(cfg_.dim)) : 0.0;
    for (int d = 0; d < cfg_.dim; ++d) {
      const double mean = (d == cls ? scale_ : 0.0) + offset;
      r.embedding[static_cast<std::size_t>(d)] = mean + rng_.normal();
    }
    r.true_label = cls;
    if (cfg_.label_noise > 0.0 && rng_.uniform() < cfg_.label_noise) {
      r.true_label = static_cast<int>(rng_.below(static_cast<std::uint64_t>(cfg_.class_count)));
    }

    // Bayes scorer for unit-covariance classes with equal priors.
    std::vector<double> logits(static_cast<std::size_t>(cfg_.class_count));
    for (int c = 0; c < cfg_.class_count; ++c) {
      logits[static_cast<std::size_t>(c)] =
          (scale_ * r.embedding[static_cast<std::size_t>(c)] - 0.5 * scale_ * scale_) /
          cfg_.temperature;
    }
    r.det_probs = softmax(logits);
    r.mc_probs.reserve(static_cast<std::size_t>(cfg_.passes));
    for (int t = 0; t < cfg_.passes; ++t) {
      if (cfg_.mc_noise == 0.0) {
        r.mc_probs.push_back(r.det_probs);
        continue;
      }
      std::vector<double> noisy = logits;
      for (double& z : noisy) z += cfg_.mc_noise * rng_.normal();
      r.mc_probs.push_back(softmax(noisy));
    }
    return r;
  }

 private:
  const SynthConfig& cfg_;
  Rng rng_;
  double scale_;
};

}  // namespace

void SynthConfig::validate() const {
  if (class_count < 2) throw Error("synth: class_count must be >= 2");
  if (dim < class_count) throw Error("synth: dim must be >= class_count");
  if (per_class < 1 || train_per_class < 1) throw Error("synth: counts must be >= 1");
  if (passes < 1) throw Error("synth: passes must be >= 1");
  if (!(temperature > 0.0)) throw Error("synth: temperature must be > 0");
  if (!(mc_noise >= 0.0)) throw Error("synth: mc_noise must be >= 0");
  if (!(shift >= 0.0)) throw Error("synth: shift must be >= 0");
  if (!(separation >= 0.0)) throw Error("synth: separation must be >= 0");
  if (!(label_noise >= 0.0 && label_noise <= 1.0)) {
    throw Error("synth: label_noise must lie in [0,1]");
  }
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ b);
}

SynthData generate(const SynthConfig& config) {
  config.validate();
  Generator gen(config);
  SynthData data;
  const std::string prefix = config.split + "-" + std::to_string(config.fold) + "-";
  const int n_train = config.train_per_class * config.class_count;
  data.train.reserve(static_cast<std::size_t>(n_train));
  for (int i = 0; i < n_train; ++i) {
    data.train.push_back(gen.draw(i % config.class_count, false, prefix + "train-" + std::to_string(i)));
  }
  data.test.split = config.split;
  data.test.fold = config.fold;
  data.test.class_count = config.class_count;
  const int n_test = config.per_class * config.class_count;
  data.test.records.reserve(static_cast<std::size_t>(n_test));
  for (int i = 0; i < n_test; ++i) {
    data.test.records.push_back(gen.draw(i % config.class_count, true, prefix + std::to_string(i)));
  }
  return data;
}

std::vector<SynthData> generate_suite(const SuiteConfig& config) {
  if (config.split_count < 1 || config.fold_count < 1) {
    throw Error("synth: split and fold counts must be >= 1");
  }
  std::vector<SynthData> out;
  for (int s = 0; s < config.split_count; ++s) {
    for (int f = 0; f < config.fold_count; ++f) {
      SynthConfig cfg = config.base;
      cfg.split = config.base.split + std::to_string(s);
      cfg.fold = f;
      cfg.separation = config.base.separation * (1.0 + 0.2 * s);
      cfg.temperature = config.base.temperature * (1.0 + 0.5 * s);
      cfg.seed = derive_seed(config.base.seed, static_cast<std::uint64_t>(s),
                             static_cast<std::uint64_t>(f));
      out.push_back(generate(cfg));
    }
  }
  return out;
}

}  // namespace ue
