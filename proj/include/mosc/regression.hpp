#pragma once

#include "mosc/assignment.hpp"
#include "mosc/types.hpp"

#include <Eigen/QR>

#include <cmath>
#include <cstdint>
#include <vector>

namespace mosc {

// Balanced partition of n records into M folds, fixed for one optimization run.
struct FoldAssignment {
  int M = 0;
  Eigen::VectorXi fold_of;
  std::vector<Index> fold_sizes;

  Index n() const { return fold_of.size(); }
};

FoldAssignment make_folds(Index n, int M, std::uint64_t seed);

// Least-squares coefficients for the design [1, I]; intercept first.
template <typename Scalar>
struct RegressionFit {
  Vector<Scalar> beta;
  Index design_rank = 0;
  // Some indicator column had no training rows.
  bool empty_cluster = false;

  Index k() const { return beta.size() - 1; }
};

namespace detail {

// Minimum-norm solution of the normal equations G beta = b. Because b lies in
// the range of G = A'A, this equals pinv(A) y for the underlying design A.
template <typename Scalar>
RegressionFit<Scalar> solve_normal_equations(const Matrix<Scalar>& gram, const Vector<Scalar>& rhs) {
  Eigen::CompleteOrthogonalDecomposition<Matrix<Scalar>> cod(gram);
  RegressionFit<Scalar> fit;
  fit.beta = cod.solve(rhs);
  fit.design_rank = cod.rank();
  return fit;
}

// Gram matrix and right-hand side of [1, I] from per-cluster counts and outcome sums.
template <typename Scalar>
RegressionFit<Scalar> fit_one_hot_moments(const Vector<Scalar>& counts, const Vector<Scalar>& sums) {
  const Index k = counts.size();
  Matrix<Scalar> gram = Matrix<Scalar>::Zero(k + 1, k + 1);
  Vector<Scalar> rhs(k + 1);
  gram(0, 0) = counts.sum();
  gram.block(0, 1, 1, k) = counts.transpose();
  gram.block(1, 0, k, 1) = counts;
  gram.block(1, 1, k, k).diagonal() = counts;
  rhs(0) = sums.sum();
  rhs.tail(k) = sums;
  auto fit = solve_normal_equations(gram, rhs);
  fit.empty_cluster = (counts.array() == Scalar(0)).any();
  return fit;
}

}  // namespace detail

// Fits y ~ [1, I] by minimum-norm least squares. The indicator columns sum to
// the intercept column, so the Gram matrix is singular and a pseudoinverse is
// used; fitted values are unique even though beta is not.
template <typename DerivedI, typename DerivedY>
RegressionFit<typename DerivedY::Scalar> fit_ls(const Eigen::MatrixBase<DerivedI>& indicator,
                                                const Eigen::MatrixBase<DerivedY>& y) {
  using Scalar = typename DerivedY::Scalar;
  if (indicator.rows() != y.size())
    throw DimensionError("indicator has " + std::to_string(indicator.rows()) + " rows, outcome has " +
                         std::to_string(y.size()));
  const Index n = indicator.rows();
  const Index k = indicator.cols();
  Matrix<Scalar> design(n, k + 1);
  design.col(0).setOnes();
  design.rightCols(k) = indicator.template cast<Scalar>();
  const Matrix<Scalar> gram = design.transpose() * design;
  const Vector<Scalar> rhs = design.transpose() * y;
  auto fit = detail::solve_normal_equations(gram, rhs);
  fit.empty_cluster = (design.rightCols(k).colwise().sum().array() == Scalar(0)).any();
  return fit;
}

// y_hat = [1, I] beta
template <typename Scalar, typename DerivedI>
Vector<Scalar> predict(const RegressionFit<Scalar>& fit, const Eigen::MatrixBase<DerivedI>& indicator) {
  if (indicator.cols() != fit.k())
    throw DimensionError("indicator has " + std::to_string(indicator.cols()) + " columns, fit expects " +
                         std::to_string(fit.k()));
  return (indicator.template cast<Scalar>() * fit.beta.tail(fit.k())).array() + fit.beta(0);
}

template <typename Scalar>
struct CvResult {
  Scalar value = Scalar(0);
  Vector<Scalar> fold_rmse;
  // Some cluster had no training rows in at least one fold.
  bool empty_training_cluster = false;
};

// Mean over folds of the held-out RMSE, each fold predicted from a fit on the
// remaining folds.
template <typename Scalar, typename DerivedY>
CvResult<Scalar> cv_rmse_detailed(const Allocation<Scalar>& alloc, const Eigen::MatrixBase<DerivedY>& y,
                                  const FoldAssignment& folds) {
  const Index n = alloc.n();
  const Index k = alloc.k();
  if (y.size() != n || folds.n() != n)
    throw DimensionError("allocation, outcome and folds disagree on the number of records");
  const int M = folds.M;

  // Per-fold, per-cluster counts and outcome sums; training moments are totals minus the fold.
  Matrix<Scalar> fold_counts = Matrix<Scalar>::Zero(k, M);
  Matrix<Scalar> fold_sums = Matrix<Scalar>::Zero(k, M);
  for (Index i = 0; i < n; ++i) {
    fold_counts(alloc.labels(i), folds.fold_of(i)) += Scalar(1);
    fold_sums(alloc.labels(i), folds.fold_of(i)) += y(i);
  }
  const Vector<Scalar> total_counts = fold_counts.rowwise().sum();
  const Vector<Scalar> total_sums = fold_sums.rowwise().sum();

  std::vector<Vector<Scalar>> cluster_predictions(static_cast<std::size_t>(M));
  CvResult<Scalar> out;
  for (int m = 0; m < M; ++m) {
    if (folds.fold_sizes[static_cast<std::size_t>(m)] >= n)
      throw DomainError("a fold covers the whole dataset; nothing left to train on");
    const auto fit = detail::fit_one_hot_moments<Scalar>(total_counts - fold_counts.col(m),
                                                         total_sums - fold_sums.col(m));
    out.empty_training_cluster = out.empty_training_cluster || fit.empty_cluster;
    cluster_predictions[static_cast<std::size_t>(m)] = fit.beta.tail(k).array() + fit.beta(0);
  }

  Vector<Scalar> sse = Vector<Scalar>::Zero(M);
  for (Index i = 0; i < n; ++i) {
    const int m = folds.fold_of(i);
    const Scalar r = y(i) - cluster_predictions[static_cast<std::size_t>(m)](alloc.labels(i));
    sse(m) += r * r;
  }
  out.fold_rmse.resize(M);
  for (int m = 0; m < M; ++m)
    out.fold_rmse(m) = std::sqrt(sse(m) / Scalar(folds.fold_sizes[static_cast<std::size_t>(m)]));
  out.value = out.fold_rmse.mean();
  return out;
}

template <typename Scalar, typename DerivedY>
Scalar cv_rmse(const Allocation<Scalar>& alloc, const Eigen::MatrixBase<DerivedY>& y, const FoldAssignment& folds) {
  return cv_rmse_detailed(alloc, y, folds).value;
}

}  // namespace mosc
