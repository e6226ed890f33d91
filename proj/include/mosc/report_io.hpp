#pragma once

#include "mosc/config.hpp"
#include "mosc/dataset.hpp"
#include "mosc/evolve.hpp"
#include "mosc/metrics.hpp"
#include "mosc/surrogate.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace mosc {

// Wall time is left out so identical runs serialize identically.
nlohmann::json report_to_json(const RunReport& report, const PipelineConfig& cfg, const Dataset& ds);

// The part of a saved report that downstream commands consume.
struct SavedSelection {
  Index n = 0;
  int k = 0;
  Labels labels;
  Matrix<double> centers;
  std::vector<std::string> feature_names;
};

SavedSelection selection_from_json(const nlohmann::json& report);

// Long format: iteration,candidate,k,f,g,selected
std::string trajectory_csv(const RunReport& report);
// Long format: iteration,candidate,k,f,g,on_front
std::string pool_scatter_csv(const RunReport& report);
// row,pc1,pc2,cluster
std::string pca_csv(const Matrix<double>& projection, const Labels& labels);
// k,frequency over k = 2..K
std::string k_frequency_csv(const RunReport& report);
// cluster,size
std::string cluster_sizes_csv(const RunReport& report);

nlohmann::json comparison_to_json(const ComparisonTable& table);
// One row per (statistic, metric), one column per model.
std::string comparison_to_csv(const ComparisonTable& table);

nlohmann::json tree_to_json(const DecisionTree& tree, const std::vector<std::string>& feature_names);
DecisionTree tree_from_json(const nlohmann::json& j);

}  // namespace mosc
