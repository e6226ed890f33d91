#pragma once

#include "mosc/assignment.hpp"
#include "mosc/dataset.hpp"
#include "mosc/pareto.hpp"
#include "mosc/regression.hpp"
#include "mosc/types.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace mosc {

enum class ObjectiveMode { multi, f_only, g_only };

ObjectiveMode parse_objective_mode(const std::string& name);
std::string to_string(ObjectiveMode mode);

// Defaults: 100 candidates, k in 2..11,
// 500 iterations, learning rate 2000 / (1 + n_r)^(3/4).
struct RunConfig {
  int n_pool = 100;
  int max_clusters = 11;
  int tau_max = 500;
  double alpha = 0.75;
  double c_alpha = 1.0;
  double c_gamma = 2000.0;
  int folds = 10;
  std::uint64_t seed = 0;
  DominanceMode dominance = DominanceMode::paper_strict;
  ObjectiveMode objective = ObjectiveMode::multi;
  CostKind cost = CostKind::sum;
  // Move the center of an empty cluster to a random data row instead of leaving it.
  bool reseed_empty = false;
  int threads = 1;

  void validate() const;
};

// Step size for a cluster currently holding n_r points.
inline double learning_rate(const RunConfig& cfg, Index n_r) {
  return cfg.c_gamma / std::pow(1.0 + cfg.c_alpha * static_cast<double>(n_r), cfg.alpha);
}

// One stochastic k-medians step of L1 length `step` from center towards z.
// A sample sitting exactly on the center leaves it unchanged.
template <typename DerivedC, typename DerivedZ>
Vector<typename DerivedC::Scalar> sgd_update(const Eigen::MatrixBase<DerivedC>& center,
                                             const Eigen::MatrixBase<DerivedZ>& z,
                                             typename DerivedC::Scalar step) {
  using Scalar = typename DerivedC::Scalar;
  Vector<Scalar> diff = center - z;
  const Scalar dist = diff.template lpNorm<1>();
  if (dist == Scalar(0)) return center;
  return center - step * (diff / dist);
}

// n_pool candidates with k assigned round-robin over 2..K, centers drawn as
// distinct data rows.
std::vector<CandidateSet> init_pool(const Dataset& ds, const RunConfig& cfg);

// Independent random stream for (seed, purpose, index).
std::mt19937_64 derived_rng(std::uint64_t seed, std::uint64_t purpose, std::uint64_t index);

enum class StreamPurpose : std::uint64_t { pool = 1, sgd = 2, folds = 3, reseed = 4 };

FoldAssignment run_folds(const Dataset& ds, const RunConfig& cfg);

struct Evaluation {
  Allocation<double> allocation;
  double f = 0.0;
  double g = 0.0;
  bool empty_training_cluster = false;
};

Evaluation evaluate_candidate(const Dataset& ds, const CandidateSet& cs, const FoldAssignment& folds,
                              CostKind cost = CostKind::sum);

struct RunReport {
  RunConfig config;
  // k of each pool member (constant over the run).
  std::vector<int> candidate_k;
  // history[t](c, 0..1): (f, g) of candidate c evaluated at iteration t.
  std::vector<Matrix<double>> history;
  std::vector<std::vector<Index>> front_history;
  std::vector<CandidateSet> initial_pool;
  // Centers as evaluated at the last iteration.
  std::vector<CandidateSet> final_pool;
  ParetoArchive final_front;
  // Empty unless objective == multi.
  SelectionResult<double> selection;
  Index selected_candidate = 0;
  CandidateSet selected;
  Labels selected_labels;
  Eigen::VectorXi cluster_sizes;
  double selected_f = 0.0;
  double selected_g = 0.0;
  // k_frequency[k] = number of final-front members with k centers; index 0 and 1 unused.
  std::vector<int> k_frequency;
  // Candidates frozen after producing a non-finite objective.
  std::vector<Index> frozen;
  // Count of (iteration, candidate) evaluations where a cluster lost all training rows in a fold.
  Index empty_training_events = 0;
  Index skipped_empty_updates = 0;
  Index skipped_zero_distance_updates = 0;
  bool degenerate = false;
  double wall_seconds = 0.0;
};

// The full evolutionary optimizer. Expects the outcome already transformed.
RunReport run(const Dataset& ds, const RunConfig& cfg);

}  // namespace mosc
