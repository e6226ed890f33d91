#pragma once

#include "mosc/types.hpp"

#include <string>

namespace mosc {

// One candidate solution: k cluster centers, one per row.
template <typename Scalar>
struct BasicCandidateSet {
  Matrix<Scalar> centers;

  Index k() const { return centers.rows(); }
  Index d() const { return centers.cols(); }

  void validate() const {
    if (centers.rows() < 2) throw DomainError("a candidate needs at least 2 centers");
    if (!centers.allFinite()) throw DomainError("candidate centers must be finite");
  }
};

using CandidateSet = BasicCandidateSet<double>;

// Distance matrix D (n x k, L1), one-hot allocation I, and per-cluster counts.
template <typename Scalar>
struct Allocation {
  Matrix<Scalar> distances;
  Matrix<Scalar> indicator;
  Labels labels;
  Eigen::VectorXi counts;

  Index n() const { return distances.rows(); }
  Index k() const { return distances.cols(); }
  Index nonempty_clusters() const { return (counts.array() > 0).count(); }
};

// Nearest-center allocation under the L1 norm. Ties go to the lowest center index.
template <typename DerivedZ, typename DerivedX>
Allocation<typename DerivedZ::Scalar> allocation_distance(const Eigen::MatrixBase<DerivedZ>& points,
                                                          const Eigen::MatrixBase<DerivedX>& centers) {
  using Scalar = typename DerivedZ::Scalar;
  if (points.cols() != centers.cols())
    throw DimensionError("centers have " + std::to_string(centers.cols()) + " columns, data has " +
                         std::to_string(points.cols()));
  const Index n = points.rows();
  const Index k = centers.rows();
  if (k < 1) throw DimensionError("no centers given");

  Allocation<Scalar> a;
  a.distances.resize(n, k);
  a.indicator = Matrix<Scalar>::Zero(n, k);
  a.labels.resize(n);
  a.counts = Eigen::VectorXi::Zero(k);
  for (Index i = 0; i < n; ++i) {
    Index best = 0;
    for (Index j = 0; j < k; ++j) {
      const Scalar dist = (points.row(i) - centers.row(j)).template lpNorm<1>();
      a.distances(i, j) = dist;
      if (dist < a.distances(i, best)) best = j;
    }
    a.indicator(i, best) = Scalar(1);
    a.labels(i) = static_cast<int>(best);
    ++a.counts(best);
  }
  return a;
}

template <typename Derived, typename Scalar>
Allocation<typename Derived::Scalar> allocation_distance(const Eigen::MatrixBase<Derived>& points,
                                                         const BasicCandidateSet<Scalar>& cs) {
  return allocation_distance(points, cs.centers);
}

enum class CostKind { sum, mean };

// Total (or mean) L1 distance from each point to its allocated center.
template <typename Scalar>
Scalar clustering_cost(const Allocation<Scalar>& alloc, CostKind kind = CostKind::sum) {
  Scalar total(0);
  for (Index i = 0; i < alloc.n(); ++i) total += alloc.distances(i, alloc.labels(i));
  if (kind == CostKind::mean && alloc.n() > 0) total /= Scalar(alloc.n());
  return total;
}

}  // namespace mosc
