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

// Uncertainty scores from the geometry of hidden representations, each
// fitted on training embeddings and then applied to test embeddings:
//
//  * Mahalanobis distance to the nearest class centroid under a pooled,
//    ridge-regularized within-class covariance (squared form).
//  * Local Outlier Factor against the training set, exact k-NN.
//  * Isolation Forest anomaly score 2^(-E[path] / c(psi)).
//
// All three are oriented so that higher means more uncertain.

#ifndef UEKIT_FEATURE_SCORES_H_
#define UEKIT_FEATURE_SCORES_H_

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "uekit/core.h"

namespace ue {

// Row-major list of points, one row per embedding.
Eigen::MatrixXd to_matrix(const std::vector<std::vector<double>>& rows);

struct TrainStats {
  int class_count = 0;
  Eigen::MatrixXd centroids;   // C x D
  Eigen::MatrixXd covariance;  // D x D, regularized
  Eigen::MatrixXd precision;   // D x D
  double epsilon = 0.0;

  int dim() const { return static_cast<int>(centroids.cols()); }
};

// Per-class means and pooled class-centered covariance (1/N normalization)
// plus eps*I with eps = max(1e-10, 1e-6 * trace / D). If the Cholesky
// factorization fails, eps is multiplied by 10 up to three times.
TrainStats fit_train_stats(const Eigen::MatrixXd& embeddings,
                           std::span<const int> labels, int class_count);

// min_c (h - mu_c)^T P (h - mu_c)
double mahalanobis(std::span<const double> h, const TrainStats& stats);

nlohmann::json to_json(const TrainStats& stats);
TrainStats train_stats_from_json(const nlohmann::json& doc);

inline constexpr int kDefaultLofNeighbors = 20;

struct LofModel {
  int k = 0;
  Eigen::MatrixXd train_points;  // N x D
  std::vector<double> k_distances;
  std::vector<double> lrd;
};

// Neighborhoods are exactly k points; equal distances resolve toward the
// lower training index. A reachability distance of exactly 0 is raised to
// 1e-12 so densities stay finite on duplicated points.
LofModel fit_lof(const Eigen::MatrixXd& train_points, int k);
double lof_score(std::span<const double> h, const LofModel& model);

inline constexpr int kDefaultIsofTrees = 100;
inline constexpr int kDefaultIsofSubsample = 256;

struct IsolationNode {
  int dim = -1;  // -1 marks an external node
  double split = 0.0;
  int left = -1;
  int right = -1;
  int size = 0;  // points reaching an external node

  bool is_leaf() const { return dim < 0; }
};

struct IsolationTree {
  std::vector<IsolationNode> nodes;  // nodes[0] is the root

  int depth() const;
};

struct IsofModel {
  int tree_count = 0;
  int subsample = 0;
  int height_limit = 0;
  int dim = 0;
  std::uint64_t seed = 0;
  double c_norm = 0.0;
  std::vector<IsolationTree> trees;
};

// Average unsuccessful-search path length in a binary search tree of n
// points: 2 H(n-1) - 2 (n-1) / n, with c(0) = c(1) = 0.
double average_path_length(int n);
int isolation_height_limit(int subsample);

IsofModel fit_isof(const Eigen::MatrixXd& train_points, int tree_count,
                   int subsample, std::uint64_t seed);
double isof_path_length(std::span<const double> h, const IsolationTree& tree);
double isof_score(std::span<const double> h, const IsofModel& model);

}  // namespace ue

#endif  // UEKIT_FEATURE_SCORES_H_
