#pragma once

#include "mosc/types.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace mosc {

// Feature matrix (one row per record) plus the outcome being predicted.
template <typename Scalar>
struct BasicDataset {
  Matrix<Scalar> features;
  Vector<Scalar> outcome;
  std::vector<std::string> feature_names;

  Index n() const { return features.rows(); }
  Index d() const { return features.cols(); }

  // Throws DomainError/DimensionError when the shape or values are invalid.
  void validate() const {
    if (features.rows() < 2) throw DomainError("dataset needs at least 2 rows");
    if (features.cols() < 1) throw DomainError("dataset needs at least 1 feature");
    if (outcome.size() != features.rows())
      throw DimensionError("outcome length " + std::to_string(outcome.size()) +
                           " does not match row count " + std::to_string(features.rows()));
    if (!feature_names.empty() && static_cast<Index>(feature_names.size()) != features.cols())
      throw DimensionError("feature_names length does not match feature count");
    if (!features.allFinite()) throw DomainError("features contain non-finite values");
    if (!outcome.allFinite()) throw DomainError("outcome contains non-finite values");
  }
};

using Dataset = BasicDataset<double>;

enum class OutcomeTransform { log1p, log, identity };

OutcomeTransform parse_outcome_transform(const std::string& name);
std::string to_string(OutcomeTransform mode);

// Replaces the outcome elementwise by ln(1+y), ln(y) or y.
template <typename Scalar>
BasicDataset<Scalar> transform_outcome(BasicDataset<Scalar> ds, OutcomeTransform mode) {
  for (Index i = 0; i < ds.outcome.size(); ++i) {
    const Scalar y = ds.outcome(i);
    switch (mode) {
      case OutcomeTransform::identity:
        break;
      case OutcomeTransform::log1p:
        if (!(y >= Scalar(0)))
          throw DomainError("log1p transform needs outcome >= 0; offending index " + std::to_string(i));
        ds.outcome(i) = std::log1p(y);
        break;
      case OutcomeTransform::log:
        if (!(y > Scalar(0)))
          throw DomainError("log transform needs outcome > 0; offending index " + std::to_string(i));
        ds.outcome(i) = std::log(y);
        break;
    }
  }
  return ds;
}

// Per-column z-scoring of the features. Constant columns are centered only.
template <typename Scalar>
BasicDataset<Scalar> standardize_features(BasicDataset<Scalar> ds) {
  const Index n = ds.n();
  for (Index j = 0; j < ds.d(); ++j) {
    auto col = ds.features.col(j);
    const Scalar mean = col.mean();
    col.array() -= mean;
    const Scalar sd = n > 1 ? std::sqrt(col.squaredNorm() / Scalar(n - 1)) : Scalar(0);
    if (sd > Scalar(0)) col /= sd;
  }
  return ds;
}

// Projects the centered features onto the two leading principal axes.
// Each axis is signed so that its largest-magnitude loading is positive.
template <typename Derived>
Matrix<typename Derived::Scalar> pca_project(const Eigen::MatrixBase<Derived>& features) {
  using Scalar = typename Derived::Scalar;
  if (features.cols() < 2) throw DomainError("pca_project needs at least 2 features");
  if (features.rows() < 3) throw DomainError("pca_project needs at least 3 rows");

  const Matrix<Scalar> centered = features.rowwise() - features.colwise().mean();
  const Matrix<Scalar> cov = (centered.transpose() * centered) / Scalar(features.rows() - 1);
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> eig(cov);
  if (eig.info() != Eigen::Success) throw Error("covariance eigen-decomposition failed");

  // Eigenvalues come back ascending.
  const Index d = cov.cols();
  Matrix<Scalar> axes(d, 2);
  for (Index c = 0; c < 2; ++c) {
    Vector<Scalar> v = eig.eigenvectors().col(d - 1 - c);
    Index arg = 0;
    for (Index j = 1; j < d; ++j)
      if (std::abs(v(j)) > std::abs(v(arg))) arg = j;
    if (v(arg) < Scalar(0)) v = -v;
    axes.col(c) = v;
  }
  return centered * axes;
}

template <typename Scalar>
Matrix<Scalar> pca_project(const BasicDataset<Scalar>& ds) {
  return pca_project(ds.features);
}

// Reads a header-first CSV. Every column other than outcome_column becomes a feature.
Dataset load_csv(const std::filesystem::path& path, const std::string& outcome_column);

// CSV text with the outcome as the last column.
std::string dataset_to_csv(const Dataset& ds, const std::string& outcome_column = "outcome");
void write_csv(const std::filesystem::path& path, const Dataset& ds,
               const std::string& outcome_column = "outcome");

// Single-column CSV ("label" header), one row per record.
std::string labels_to_csv(const Labels& labels);
void write_labels_csv(const std::filesystem::path& path, const Labels& labels);
Labels read_labels_csv(const std::filesystem::path& path);

struct SyntheticSpec {
  int n_clusters = 3;
  int points_per_cluster = 200;
  int d = 4;
  double center_lo = 0.0;
  double center_hi = 5000.0;
  double spread = 100.0;
  std::vector<double> outcome_means{1.0, 5.0, 9.0};
  double outcome_noise = 0.5;
  // Clamps features and outcome at zero, mimicking payment amounts.
  bool clip_negative = true;
  // Minimum Euclidean distance between true centers; 0 disables rejection.
  double min_center_separation = 0.0;

  void validate() const;
};

struct SyntheticData {
  Dataset dataset;
  Labels labels;
  Matrix<double> true_centers;
};

// Gaussian blobs around uniformly drawn centers; deterministic given seed.
SyntheticData gen_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

}  // namespace mosc
