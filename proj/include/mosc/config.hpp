#pragma once

#include "mosc/dataset.hpp"
#include "mosc/evolve.hpp"
#include "mosc/metrics.hpp"

#include <filesystem>
#include <string>

namespace mosc {

// Everything a fit or compare needs beyond the dataset itself.
struct PipelineConfig {
  RunConfig run;
  std::string outcome_column = "cost";
  OutcomeTransform outcome_transform = OutcomeTransform::log1p;
  bool standardize = false;
  DistanceMetric silhouette_metric = DistanceMetric::L1;
};

// Flat `key = value` text; `#` starts a comment. Unknown keys are rejected.
// Keys: n_pool, K, tau_max, alpha, c_alpha, c_gamma, M, seed, dominance,
// objective, cost, reseed_empty, threads, outcome_column, outcome_transform,
// standardize, silhouette_metric.
PipelineConfig parse_config(const std::string& text);
PipelineConfig load_config(const std::filesystem::path& path);

std::string config_to_text(const PipelineConfig& cfg);

}  // namespace mosc
