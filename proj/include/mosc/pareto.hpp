#pragma once

#include "mosc/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace mosc {

// paper_strict: t dominates r only if t is strictly better in both objectives.
// standard: t dominates r if it is no worse in both and strictly better in one.
enum class DominanceMode { paper_strict, standard };

DominanceMode parse_dominance_mode(const std::string& name);
std::string to_string(DominanceMode mode);

template <typename Scalar>
bool dominates(Scalar ft, Scalar gt, Scalar fr, Scalar gr, DominanceMode mode) {
  if (mode == DominanceMode::paper_strict) return ft < fr && gt < gr;
  return ft <= fr && gt <= gr && (ft < fr || gt < gr);
}

struct ParetoArchive {
  // Non-dominated rows, ascending.
  std::vector<Index> members;
  // Rows with a non-finite objective; never on the front.
  std::vector<Index> non_finite;

  Index size() const { return static_cast<Index>(members.size()); }
};

// Non-dominated rows of an (n x 2) matrix of (f, g) objective values.
template <typename Derived>
ParetoArchive pareto_front(const Eigen::MatrixBase<Derived>& values, DominanceMode mode) {
  if (values.cols() != 2) throw DimensionError("objective matrix must have 2 columns");
  if (values.rows() == 0) throw DomainError("objective matrix is empty");
  ParetoArchive front;
  std::vector<bool> finite(static_cast<std::size_t>(values.rows()));
  for (Index r = 0; r < values.rows(); ++r) {
    finite[static_cast<std::size_t>(r)] = std::isfinite(values(r, 0)) && std::isfinite(values(r, 1));
    if (!finite[static_cast<std::size_t>(r)]) front.non_finite.push_back(r);
  }
  for (Index r = 0; r < values.rows(); ++r) {
    if (!finite[static_cast<std::size_t>(r)]) continue;
    bool dominated = false;
    for (Index t = 0; t < values.rows() && !dominated; ++t) {
      if (t == r || !finite[static_cast<std::size_t>(t)]) continue;
      dominated = dominates(values(t, 0), values(t, 1), values(r, 0), values(r, 1), mode);
    }
    if (!dominated) front.members.push_back(r);
  }
  return front;
}

// Single-objective degenerate front: every finite row attaining the minimum.
template <typename Derived>
ParetoArchive scalar_front(const Eigen::MatrixBase<Derived>& values) {
  if (values.size() == 0) throw DomainError("objective vector is empty");
  ParetoArchive front;
  using Scalar = typename Derived::Scalar;
  Scalar best = std::numeric_limits<Scalar>::infinity();
  for (Index r = 0; r < values.size(); ++r) {
    if (!std::isfinite(values(r)))
      front.non_finite.push_back(r);
    else if (values(r) < best)
      best = values(r);
  }
  for (Index r = 0; r < values.size(); ++r)
    if (std::isfinite(values(r)) && values(r) == best) front.members.push_back(r);
  return front;
}

inline constexpr double kSimilarityTieTol = 1e-12;

template <typename Scalar>
struct SelectionResult {
  // Column-wise z-scores of the front's objective values.
  Matrix<Scalar> normalized;
  // Per-objective minimum of the normalized values (positive ideal point).
  Vector<Scalar> ideal;
  Vector<Scalar> similarities;
  // Row of the front with the highest cosine similarity to the ideal point.
  Index chosen = 0;
};

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar cosine_similarity(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  const Scalar denom = a.norm() * b.norm();
  if (denom == Scalar(0)) return Scalar(0);
  return std::clamp(a.dot(b) / denom, Scalar(-1), Scalar(1));
}

// Picks the front member most aligned with the positive ideal solution.
// values: (n_p x 2) objective values of the front.
template <typename Derived>
SelectionResult<typename Derived::Scalar> select_final(const Eigen::MatrixBase<Derived>& values) {
  using Scalar = typename Derived::Scalar;
  if (values.rows() == 0) throw DomainError("cannot select from an empty front");
  const Index np = values.rows();
  const Index cols = values.cols();

  SelectionResult<Scalar> sel;
  sel.normalized = Matrix<Scalar>::Zero(np, cols);
  if (np > 1) {
    for (Index o = 0; o < cols; ++o) {
      const Scalar mean = values.col(o).mean();
      const Vector<Scalar> centered = values.col(o).array() - mean;
      const Scalar sd = std::sqrt(centered.squaredNorm() / Scalar(np - 1));
      if (sd > Scalar(0)) sel.normalized.col(o) = centered / sd;
    }
  }
  sel.ideal = sel.normalized.colwise().minCoeff().transpose();
  sel.similarities.resize(np);
  for (Index p = 0; p < np; ++p) sel.similarities(p) = cosine_similarity(sel.normalized.row(p).transpose(), sel.ideal);
  // Near-equal similarities tie (a two-member front ties at exactly 0); lowest index wins.
  const Scalar best = sel.similarities.maxCoeff();
  sel.chosen = 0;
  while (sel.similarities(sel.chosen) < best - Scalar(kSimilarityTieTol)) ++sel.chosen;
  return sel;
}

}  // namespace mosc
