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

#include "uekit/feature_scores.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "uekit/random.h"

namespace ue {
namespace {

constexpr double kMinEpsilon = 1e-10;
constexpr double kEpsilonTraceScale = 1e-6;
constexpr int kEpsilonRetries = 3;
constexpr double kReachFloor = 1e-12;

void check_dim(std::span<const double> h, Eigen::Index dim) {
  if (static_cast<Eigen::Index>(h.size()) != dim) {
    throw Error("embedding dimension " + std::to_string(h.size()) +
                " does not match fitted dimension " + std::to_string(dim));
  }
}

Eigen::Map<const Eigen::VectorXd> as_vector(std::span<const double> h) {
  return {h.data(), static_cast<Eigen::Index>(h.size())};
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& rows) {
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = r == 0 ? 0 : static_cast<Eigen::Index>(rows.at(0).size());
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    if (static_cast<Eigen::Index>(rows.at(i).size()) != c) {
      throw Error("ragged matrix in TrainStats document");
    }
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = rows[i][j].get<double>();
  }
  return m;
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  auto rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    auto row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

Eigen::MatrixXd to_matrix(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  const auto d = static_cast<Eigen::Index>(rows.front().size());
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), d);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != d) {
      throw Error("embedding rows differ in dimension");
    }
    for (Eigen::Index j = 0; j < d; ++j) m(static_cast<Eigen::Index>(i), j) = rows[i][j];
  }
  return m;
}

// ---------------------------------------------------------------------------
// Mahalanobis

TrainStats fit_train_stats(const Eigen::MatrixXd& embeddings,
                           std::span<const int> labels, int class_count) {
  const Eigen::Index n = embeddings.rows();
  const Eigen::Index d = embeddings.cols();
  if (class_count < 1) throw Error("fit_train_stats: class_count must be >= 1");
  if (d < 1) throw Error("fit_train_stats: embeddings have no dimensions");
  if (static_cast<Eigen::Index>(labels.size()) != n) {
    throw Error("fit_train_stats: label count does not match embeddings");
  }
  if (n < class_count) {
    throw Error("fit_train_stats: fewer training points than classes");
  }

  TrainStats stats;
  stats.class_count = class_count;
  stats.centroids = Eigen::MatrixXd::Zero(class_count, d);
  std::vector<long> counts(class_count, 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int y = labels[i];
    if (y < 0 || y >= class_count) {
      throw Error("fit_train_stats: label " + std::to_string(y) +
                  " out of range for " + std::to_string(class_count) +
                  " classes");
    }
    stats.centroids.row(y) += embeddings.row(i);
    ++counts[y];
  }
  for (int c = 0; c < class_count; ++c) {
    if (counts[c] == 0) {
      throw Error("fit_train_stats: class " + std::to_string(c) +
                  " has no training samples");
    }
    stats.centroids.row(c) /= static_cast<double>(counts[c]);
  }

  Eigen::MatrixXd centered(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    centered.row(i) = embeddings.row(i) - stats.centroids.row(labels[i]);
  }
  Eigen::MatrixXd raw = (centered.transpose() * centered) / static_cast<double>(n);
  raw = 0.5 * (raw + raw.transpose());

  double eps = std::max(kMinEpsilon,
                        kEpsilonTraceScale * raw.trace() / static_cast<double>(d));
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(d, d);
  for (int attempt = 0; attempt <= kEpsilonRetries; ++attempt) {
    Eigen::MatrixXd cov = raw + eps * identity;
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() == Eigen::Success) {
      Eigen::MatrixXd precision = llt.solve(identity);
      stats.precision = 0.5 * (precision + precision.transpose());
      stats.covariance = std::move(cov);
      stats.epsilon = eps;
      return stats;
    }
    eps *= 10.0;
  }
  throw Error("fit_train_stats: covariance is not positive definite after " +
              std::to_string(kEpsilonRetries) + " regularization retries");
}

double mahalanobis(std::span<const double> h, const TrainStats& stats) {
  check_dim(h, stats.dim());
  const auto x = as_vector(h);
  double best = std::numeric_limits<double>::infinity();
  for (int c = 0; c < stats.class_count; ++c) {
    const Eigen::VectorXd diff = x - stats.centroids.row(c).transpose();
    best = std::min(best, diff.dot(stats.precision * diff));
  }
  return std::max(best, 0.0);
}

nlohmann::json to_json(const TrainStats& stats) {
  nlohmann::ordered_json doc;
  doc["class_count"] = stats.class_count;
  doc["epsilon"] = stats.epsilon;
  doc["centroids"] = matrix_to_json(stats.centroids);
  doc["covariance"] = matrix_to_json(stats.covariance);
  doc["precision"] = matrix_to_json(stats.precision);
  return doc;
}

TrainStats train_stats_from_json(const nlohmann::json& doc) {
  TrainStats stats;
  try {
    stats.class_count = doc.at("class_count").get<int>();
    stats.epsilon = doc.at("epsilon").get<double>();
    stats.centroids = matrix_from_json(doc.at("centroids"));
    stats.covariance = matrix_from_json(doc.at("covariance"));
    stats.precision = matrix_from_json(doc.at("precision"));
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed TrainStats document: ") + e.what());
  }
  const auto d = stats.centroids.cols();
  if (stats.centroids.rows() != stats.class_count ||
      stats.precision.rows() != d || stats.precision.cols() != d ||
      stats.covariance.rows() != d || stats.covariance.cols() != d) {
    throw Error("TrainStats document has inconsistent shapes");
  }
  return stats;
}

// ---------------------------------------------------------------------------
// Local Outlier Factor

namespace {

struct Neighbor {
  double dist;
  Eigen::Index index;
};

// The k nearest rows of `points` to `x`, ordered by (distance, index).
// `skip` excludes one row (the query itself when it is a training point).
std::vector<Neighbor> k_nearest(const Eigen::MatrixXd& points,
                                const Eigen::VectorXd& x, int k,
                                Eigen::Index skip) {
  std::vector<Neighbor> all;
  all.reserve(static_cast<std::size_t>(points.rows()));
  for (Eigen::Index j = 0; j < points.rows(); ++j) {
    if (j == skip) continue;
    all.push_back({(points.row(j).transpose() - x).norm(), j});
  }
  auto by_dist = [](const Neighbor& a, const Neighbor& b) {
    return a.dist < b.dist || (a.dist == b.dist && a.index < b.index);
  };
  std::partial_sort(all.begin(), all.begin() + k, all.end(), by_dist);
  all.resize(static_cast<std::size_t>(k));
  return all;
}

double reach_distance(double k_distance_of_neighbor, double dist) {
  const double r = std::max(k_distance_of_neighbor, dist);
  return r == 0.0 ? kReachFloor : r;
}

double local_reachability_density(const std::vector<Neighbor>& neighbors,
                                  const std::vector<double>& k_distances) {
  double total = 0.0;
  for (const auto& nb : neighbors) {
    total += reach_distance(k_distances[static_cast<std::size_t>(nb.index)], nb.dist);
  }
  return static_cast<double>(neighbors.size()) / total;
}

}  // namespace

LofModel fit_lof(const Eigen::MatrixXd& train_points, int k) {
  const Eigen::Index n = train_points.rows();
  if (n == 0) throw Error("fit_lof: empty training set");
  if (k < 1 || k >= n) {
    throw Error("fit_lof: k = " + std::to_string(k) +
                " must satisfy 1 <= k < N = " + std::to_string(n));
  }
  LofModel model;
  model.k = k;
  model.train_points = train_points;
  std::vector<std::vector<Neighbor>> neighborhoods(static_cast<std::size_t>(n));
  model.k_distances.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    auto& nb = neighborhoods[static_cast<std::size_t>(i)];
    nb = k_nearest(train_points, train_points.row(i).transpose(), k, i);
    model.k_distances[static_cast<std::size_t>(i)] = nb.back().dist;
  }
  model.lrd.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    model.lrd[static_cast<std::size_t>(i)] = local_reachability_density(
        neighborhoods[static_cast<std::size_t>(i)], model.k_distances);
  }
  return model;
}

double lof_score(std::span<const double> h, const LofModel& model) {
  check_dim(h, model.train_points.cols());
  const Eigen::VectorXd x = as_vector(h);
  const auto neighbors = k_nearest(model.train_points, x, model.k, -1);
  const double lrd_query = local_reachability_density(neighbors, model.k_distances);
  double mean_lrd = 0.0;
  for (const auto& nb : neighbors) mean_lrd += model.lrd[static_cast<std::size_t>(nb.index)];
  mean_lrd /= static_cast<double>(neighbors.size());
  return mean_lrd / lrd_query;
}

// ---------------------------------------------------------------------------
// Isolation Forest

double average_path_length(int n) {
  if (n <= 1) return 0.0;
  double harmonic = 0.0;
  for (int i = 1; i <= n - 1; ++i) harmonic += 1.0 / i;
  return 2.0 * harmonic - 2.0 * (n - 1) / static_cast<double>(n);
}

int isolation_height_limit(int subsample) {
  int limit = 0;
  while ((1L << limit) < subsample) ++limit;
  return limit;
}

int IsolationTree::depth() const {
  std::vector<int> level(nodes.size(), 0);
  int deepest = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& node = nodes[i];
    deepest = std::max(deepest, level[i]);
    if (!node.is_leaf()) {
      level[static_cast<std::size_t>(node.left)] = level[i] + 1;
      level[static_cast<std::size_t>(node.right)] = level[i] + 1;
    }
  }
  return deepest;
}

namespace {

class TreeBuilder {
 public:
  TreeBuilder(const Eigen::MatrixXd& points, int height_limit, Rng& rng)
      : points_(points), height_limit_(height_limit), rng_(rng) {}

  IsolationTree build(std::vector<Eigen::Index> rows) {
    IsolationTree tree;
    grow(tree, std::move(rows), 0);
    return tree;
  }

 private:
  // Children are appended after their parent, so node indices increase with
  // depth along every root-to-leaf path.
  int grow(IsolationTree& tree, std::vector<Eigen::Index> rows, int depth) {
    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back({});
    auto leaf = [&] {
      tree.nodes[static_cast<std::size_t>(id)].size = static_cast<int>(rows.size());
      return id;
    };
    if (depth >= height_limit_ || rows.size() <= 1) return leaf();

    std::vector<Eigen::Index> splittable;
    std::vector<std::pair<double, double>> ranges;
    for (Eigen::Index d = 0; d < points_.cols(); ++d) {
      double lo = points_(rows.front(), d);
      double hi = lo;
      for (auto r : rows) {
        lo = std::min(lo, points_(r, d));
        hi = std::max(hi, points_(r, d));
      }
      if (hi > lo) {
        splittable.push_back(d);
        ranges.emplace_back(lo, hi);
      }
    }
    if (splittable.empty()) return leaf();

    const auto pick = static_cast<std::size_t>(rng_.below(splittable.size()));
    const Eigen::Index dim = splittable[pick];
    const auto [lo, hi] = ranges[pick];
    double split = lo + rng_.uniform() * (hi - lo);
    if (split >= hi) split = std::nextafter(hi, lo);

    std::vector<Eigen::Index> left, right;
    for (auto r : rows) (points_(r, dim) <= split ? left : right).push_back(r);
    rows.clear();
    rows.shrink_to_fit();

    const int l = grow(tree, std::move(left), depth + 1);
    const int r = grow(tree, std::move(right), depth + 1);
    auto& node = tree.nodes[static_cast<std::size_t>(id)];
    node.dim = static_cast<int>(dim);
    node.split = split;
    node.left = l;
    node.right = r;
    return id;
  }

  const Eigen::MatrixXd& points_;
  int height_limit_;
  Rng& rng_;
};

}  // namespace

IsofModel fit_isof(const Eigen::MatrixXd& train_points, int tree_count,
                   int subsample, std::uint64_t seed) {
  const Eigen::Index n = train_points.rows();
  if (tree_count < 1) throw Error("fit_isof: tree_count must be >= 1");
  if (subsample < 2) throw Error("fit_isof: subsample must be >= 2");
  if (subsample > n) {
    throw Error("fit_isof: subsample " + std::to_string(subsample) +
                " exceeds training size " + std::to_string(n));
  }
  IsofModel model;
  model.tree_count = tree_count;
  model.subsample = subsample;
  model.height_limit = isolation_height_limit(subsample);
  model.seed = seed;
  model.dim = static_cast<int>(train_points.cols());
  model.c_norm = average_path_length(subsample);

  Rng rng(seed);
  TreeBuilder builder(train_points, model.height_limit, rng);
  std::vector<Eigen::Index> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), Eigen::Index{0});
  model.trees.reserve(static_cast<std::size_t>(tree_count));
  for (int t = 0; t < tree_count; ++t) {
    // Partial Fisher-Yates: the first `subsample` slots become the sample.
    for (int i = 0; i < subsample; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(n - i)));
      std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
    }
    std::vector<Eigen::Index> sample(pool.begin(), pool.begin() + subsample);
    std::sort(sample.begin(), sample.end());
    model.trees.push_back(builder.build(std::move(sample)));
  }
  return model;
}

double isof_path_length(std::span<const double> h, const IsolationTree& tree) {
  int node = 0;
  int edges = 0;
  while (!tree.nodes[static_cast<std::size_t>(node)].is_leaf()) {
    const auto& n = tree.nodes[static_cast<std::size_t>(node)];
    node = h[static_cast<std::size_t>(n.dim)] <= n.split ? n.left : n.right;
    ++edges;
  }
  return edges + average_path_length(tree.nodes[static_cast<std::size_t>(node)].size);
}

double isof_score(std::span<const double> h, const IsofModel& model) {
  if (model.trees.empty()) throw Error("isof_score: model has no trees");
  check_dim(h, model.dim);
  double total = 0.0;
  for (const auto& tree : model.trees) total += isof_path_length(h, tree);
  const double mean = total / static_cast<double>(model.trees.size());
  return std::exp2(-mean / model.c_norm);
}

}  // namespace ue
