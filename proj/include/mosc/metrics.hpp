#pragma once

#include "mosc/dataset.hpp"
#include "mosc/evolve.hpp"
#include "mosc/types.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace mosc {

enum class DistanceMetric { L1, L2 };

DistanceMetric parse_distance_metric(const std::string& name);
std::string to_string(DistanceMetric metric);

template <typename Derived>
Matrix<typename Derived::Scalar> pairwise_distances(const Eigen::MatrixBase<Derived>& points, DistanceMetric metric) {
  using Scalar = typename Derived::Scalar;
  const Index n = points.rows();
  Matrix<Scalar> dist = Matrix<Scalar>::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      const auto diff = points.row(i) - points.row(j);
      dist(i, j) = dist(j, i) = metric == DistanceMetric::L1 ? diff.template lpNorm<1>() : diff.norm();
    }
  return dist;
}

// Average silhouette width from a precomputed (n x n) distance matrix.
// Labels may be any integers; points in singleton clusters score 0.
template <typename Derived>
typename Derived::Scalar silhouette_from_distances(const Eigen::MatrixBase<Derived>& dist, const Labels& labels) {
  using Scalar = typename Derived::Scalar;
  const Index n = dist.rows();
  if (dist.cols() != n || labels.size() != n) throw DimensionError("distance matrix and labels disagree on size");
  if (n < 3) throw DomainError("silhouette needs at least 3 points");

  std::map<int, Index> slot;
  for (Index i = 0; i < n; ++i) slot.try_emplace(labels(i), static_cast<Index>(slot.size()));
  const Index k = static_cast<Index>(slot.size());
  if (k < 2) throw DomainError("silhouette needs at least 2 clusters");

  Eigen::VectorXi cluster(n);
  Vector<Scalar> sizes = Vector<Scalar>::Zero(k);
  for (Index i = 0; i < n; ++i) {
    cluster(i) = static_cast<int>(slot[labels(i)]);
    sizes(cluster(i)) += Scalar(1);
  }

  Scalar total(0);
  Vector<Scalar> sums(k);
  for (Index i = 0; i < n; ++i) {
    const Index own = cluster(i);
    if (sizes(own) <= Scalar(1)) continue;
    sums.setZero();
    for (Index j = 0; j < n; ++j) sums(cluster(j)) += dist(i, j);
    const Scalar a = sums(own) / (sizes(own) - Scalar(1));
    Scalar b = std::numeric_limits<Scalar>::infinity();
    for (Index c = 0; c < k; ++c)
      if (c != own) b = std::min(b, sums(c) / sizes(c));
    const Scalar denom = std::max(a, b);
    if (denom > Scalar(0)) total += (b - a) / denom;
  }
  return total / Scalar(n);
}

template <typename Derived>
typename Derived::Scalar silhouette(const Eigen::MatrixBase<Derived>& points, const Labels& labels,
                                    DistanceMetric metric = DistanceMetric::L1) {
  if (points.rows() != labels.size()) throw DimensionError("points and labels disagree on size");
  return silhouette_from_distances(pairwise_distances(points, metric), labels);
}

inline double silhouette(const Dataset& ds, const Labels& labels, DistanceMetric metric = DistanceMetric::L1) {
  return silhouette(ds.features, labels, metric);
}

struct ModelSummary {
  ObjectiveMode mode = ObjectiveMode::multi;
  int selected_k = 0;
  double optimal_asw = 0.0;
  double optimal_cv = 0.0;
  double pool_mean_asw = 0.0;
  double pool_mean_cv = 0.0;
  double pool_sd_asw = 0.0;
  double pool_sd_cv = 0.0;
  // Pool members left out of the ASW statistics for having fewer than 2 non-empty clusters.
  Index asw_excluded = 0;
  std::uint64_t initial_pool_fingerprint = 0;
};

// One column group per model, in the order multi, f_only, g_only.
struct ComparisonTable {
  std::array<ModelSummary, 3> models;
  DistanceMetric metric = DistanceMetric::L1;
  std::uint64_t seed = 0;
  int folds = 0;
};

// FNV-1a over the raw center values of every candidate.
std::uint64_t pool_fingerprint(const std::vector<CandidateSet>& pool);

// Optimal-solution and final-pool metrics of one finished run.
ModelSummary summarize_run(const Dataset& ds, const RunReport& report, const Matrix<double>& distances);

// Runs the optimizer with each objective mode on the same seed and fold partition.
ComparisonTable compare(const Dataset& ds, const RunConfig& cfg, DistanceMetric metric = DistanceMetric::L1,
                        std::vector<RunReport>* reports = nullptr);

}  // namespace mosc
