#include "mosc/metrics.hpp"

#include <cmath>
#include <cstring>

namespace mosc {

DistanceMetric parse_distance_metric(const std::string& name) {
  if (name == "L1" || name == "l1") return DistanceMetric::L1;
  if (name == "L2" || name == "l2") return DistanceMetric::L2;
  throw DomainError("unknown distance metric '" + name + "' (expected L1 or L2)");
}

std::string to_string(DistanceMetric metric) { return metric == DistanceMetric::L1 ? "L1" : "L2"; }

std::uint64_t pool_fingerprint(const std::vector<CandidateSet>& pool) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void* data, std::size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= bytes[i];
      h *= 1099511628211ull;
    }
  };
  for (const auto& cs : pool) {
    const std::int64_t dims[2] = {cs.k(), cs.d()};
    mix(dims, sizeof(dims));
    mix(cs.centers.data(), static_cast<std::size_t>(cs.centers.size()) * sizeof(double));
  }
  return h;
}

namespace {

void mean_sd(const std::vector<double>& xs, double& mean, double& sd) {
  mean = sd = std::numeric_limits<double>::quiet_NaN();
  if (xs.empty()) return;
  double s = 0.0;
  for (double x : xs) s += x;
  mean = s / static_cast<double>(xs.size());
  if (xs.size() < 2) {
    sd = 0.0;
    return;
  }
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

}  // namespace

ModelSummary summarize_run(const Dataset& ds, const RunReport& report, const Matrix<double>& distances) {
  ModelSummary s;
  s.mode = report.config.objective;
  s.selected_k = static_cast<int>(report.selected.k());
  s.initial_pool_fingerprint = pool_fingerprint(report.initial_pool);
  s.optimal_cv = report.selected_g;
  s.optimal_asw = (report.cluster_sizes.array() > 0).count() >= 2
                      ? silhouette_from_distances(distances, report.selected_labels)
                      : std::numeric_limits<double>::quiet_NaN();

  std::vector<double> asw;
  std::vector<double> cv;
  const Matrix<double>& last = report.history.back();
  for (std::size_t c = 0; c < report.final_pool.size(); ++c) {
    const double g = last(static_cast<Index>(c), 1);
    if (std::isfinite(g)) cv.push_back(g);
    const auto alloc = allocation_distance(ds.features, report.final_pool[c].centers);
    if (alloc.nonempty_clusters() >= 2)
      asw.push_back(silhouette_from_distances(distances, alloc.labels));
    else
      ++s.asw_excluded;
  }
  mean_sd(asw, s.pool_mean_asw, s.pool_sd_asw);
  mean_sd(cv, s.pool_mean_cv, s.pool_sd_cv);
  return s;
}

ComparisonTable compare(const Dataset& ds, const RunConfig& cfg, DistanceMetric metric,
                        std::vector<RunReport>* reports) {
  ComparisonTable table;
  table.metric = metric;
  table.seed = cfg.seed;
  table.folds = cfg.folds;
  const Matrix<double> distances = pairwise_distances(ds.features, metric);
  const std::array<ObjectiveMode, 3> modes{ObjectiveMode::multi, ObjectiveMode::f_only, ObjectiveMode::g_only};
  if (reports) reports->clear();
  for (std::size_t m = 0; m < modes.size(); ++m) {
    RunConfig mode_cfg = cfg;
    mode_cfg.objective = modes[m];
    RunReport report = run(ds, mode_cfg);
    table.models[m] = summarize_run(ds, report, distances);
    if (reports) reports->push_back(std::move(report));
  }
  return table;
}

}  // namespace mosc
