#include "mosc/report_io.hpp"

#include "mosc/io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace mosc {

using nlohmann::json;

namespace {

json matrix_rows(const Matrix<double>& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

json pool_json(const std::vector<CandidateSet>& pool) {
  json out = json::array();
  for (const auto& cs : pool) out.push_back(matrix_rows(cs.centers));
  return out;
}

json run_config_json(const PipelineConfig& cfg) {
  const auto& r = cfg.run;
  return json{{"n_pool", r.n_pool},
              {"K", r.max_clusters},
              {"tau_max", r.tau_max},
              {"alpha", r.alpha},
              {"c_alpha", r.c_alpha},
              {"c_gamma", r.c_gamma},
              {"M", r.folds},
              {"seed", r.seed},
              {"dominance", to_string(r.dominance)},
              {"objective", to_string(r.objective)},
              {"cost", r.cost == CostKind::sum ? "sum" : "mean"},
              {"reseed_empty", r.reseed_empty},
              {"outcome_column", cfg.outcome_column},
              {"outcome_transform", to_string(cfg.outcome_transform)},
              {"standardize", cfg.standardize},
              {"silhouette_metric", to_string(cfg.silhouette_metric)}};
}

}  // namespace

json report_to_json(const RunReport& report, const PipelineConfig& cfg, const Dataset& ds) {
  json j;
  j["format"] = "mosc-run-report";
  j["version"] = 1;
  j["config"] = run_config_json(cfg);
  j["dataset"] = {{"n", ds.n()}, {"d", ds.d()}, {"feature_names", ds.feature_names}};
  j["provenance"] = {{"seed", report.config.seed},
                     {"initial_pool_fingerprint", hex64(pool_fingerprint(report.initial_pool))}};
  j["candidate_k"] = report.candidate_k;

  json history = json::array();
  for (std::size_t t = 0; t < report.history.size(); ++t) {
    const auto& v = report.history[t];
    json f = json::array();
    json g = json::array();
    for (Index c = 0; c < v.rows(); ++c) {
      f.push_back(number_or_null(v(c, 0)));
      g.push_back(number_or_null(v(c, 1)));
    }
    json it = {{"iteration", t + 1}, {"f", std::move(f)}, {"g", std::move(g)}};
    it["front"] = t < report.front_history.size() ? json(report.front_history[t]) : json::array();
    history.push_back(std::move(it));
  }
  j["history"] = std::move(history);
  j["initial_pool"] = pool_json(report.initial_pool);
  j["final_pool"] = pool_json(report.final_pool);
  j["final_front"] = {{"members", report.final_front.members}, {"non_finite", report.final_front.non_finite}};

  if (report.config.objective == ObjectiveMode::multi) {
    const auto& s = report.selection;
    json sims = json::array();
    for (Index p = 0; p < s.similarities.size(); ++p) sims.push_back(s.similarities(p));
    j["selection"] = {{"normalized", matrix_rows(s.normalized)},
                      {"ideal", {s.ideal(0), s.ideal(1)}},
                      {"similarities", std::move(sims)},
                      {"chosen_front_position", s.chosen}};
  } else {
    j["selection"] = nullptr;
  }

  std::vector<int> labels(report.selected_labels.data(), report.selected_labels.data() + report.selected_labels.size());
  std::vector<int> sizes(report.cluster_sizes.data(), report.cluster_sizes.data() + report.cluster_sizes.size());
  j["selected"] = {{"candidate", report.selected_candidate},
                   {"k", report.selected.k()},
                   {"centers", matrix_rows(report.selected.centers)},
                   {"f", number_or_null(report.selected_f)},
                   {"g", number_or_null(report.selected_g)},
                   {"cluster_sizes", sizes},
                   {"labels", labels}};

  json kf = json::object();
  for (std::size_t k = 2; k < report.k_frequency.size(); ++k) kf[std::to_string(k)] = report.k_frequency[k];
  j["k_frequency"] = std::move(kf);
  j["diagnostics"] = {{"frozen", report.frozen},
                      {"empty_training_events", report.empty_training_events},
                      {"skipped_empty_updates", report.skipped_empty_updates},
                      {"skipped_zero_distance_updates", report.skipped_zero_distance_updates},
                      {"degenerate", report.degenerate},
                      {"iterations", report.history.size()}};
  return j;
}

SavedSelection selection_from_json(const json& report) {
  if (!report.is_object() || report.value("format", "") != "mosc-run-report")
    throw DomainError("not a run report (missing format tag)");
  SavedSelection s;
  try {
    const auto& sel = report.at("selected");
    const auto labels = sel.at("labels").get<std::vector<int>>();
    s.labels = Eigen::Map<const Eigen::VectorXi>(labels.data(), static_cast<Index>(labels.size()));
    s.n = s.labels.size();
    s.k = sel.at("k").get<int>();
    const auto centers = sel.at("centers").get<std::vector<std::vector<double>>>();
    s.centers.resize(static_cast<Index>(centers.size()), centers.empty() ? 0 : static_cast<Index>(centers[0].size()));
    for (std::size_t i = 0; i < centers.size(); ++i)
      for (std::size_t c = 0; c < centers[i].size(); ++c) s.centers(static_cast<Index>(i), static_cast<Index>(c)) = centers[i][c];
    s.feature_names = report.at("dataset").at("feature_names").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw DomainError(std::string("malformed run report: ") + e.what());
  }
  return s;
}

std::string trajectory_csv(const RunReport& report) {
  std::ostringstream out;
  out << "iteration,candidate,k,f,g,selected\n";
  for (std::size_t t = 0; t < report.history.size(); ++t) {
    const auto& v = report.history[t];
    for (Index c = 0; c < v.rows(); ++c)
      out << t + 1 << ',' << c << ',' << report.candidate_k[static_cast<std::size_t>(c)] << ','
          << format_double(v(c, 0)) << ',' << format_double(v(c, 1)) << ','
          << (c == report.selected_candidate ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string pool_scatter_csv(const RunReport& report) {
  std::ostringstream out;
  out << "iteration,candidate,k,f,g,on_front\n";
  for (std::size_t t = 0; t < report.history.size(); ++t) {
    const auto& v = report.history[t];
    std::vector<bool> on(static_cast<std::size_t>(v.rows()), false);
    if (t < report.front_history.size())
      for (Index c : report.front_history[t]) on[static_cast<std::size_t>(c)] = true;
    for (Index c = 0; c < v.rows(); ++c)
      out << t + 1 << ',' << c << ',' << report.candidate_k[static_cast<std::size_t>(c)] << ','
          << format_double(v(c, 0)) << ',' << format_double(v(c, 1)) << ','
          << (on[static_cast<std::size_t>(c)] ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string pca_csv(const Matrix<double>& projection, const Labels& labels) {
  std::ostringstream out;
  out << "row,pc1,pc2,cluster\n";
  for (Index i = 0; i < projection.rows(); ++i)
    out << i << ',' << format_double(projection(i, 0)) << ',' << format_double(projection(i, 1)) << ',' << labels(i)
        << '\n';
  return out.str();
}

std::string k_frequency_csv(const RunReport& report) {
  std::ostringstream out;
  out << "k,frequency\n";
  for (std::size_t k = 2; k < report.k_frequency.size(); ++k) out << k << ',' << report.k_frequency[k] << '\n';
  return out.str();
}

std::string cluster_sizes_csv(const RunReport& report) {
  std::ostringstream out;
  out << "cluster,size\n";
  for (Index c = 0; c < report.cluster_sizes.size(); ++c) out << c << ',' << report.cluster_sizes(c) << '\n';
  return out.str();
}

json comparison_to_json(const ComparisonTable& table) {
  json models = json::object();
  for (const auto& m : table.models) {
    models[to_string(m.mode)] = {
        {"selected_k", m.selected_k},
        {"optimal", {{"asw", number_or_null(m.optimal_asw)}, {"cv", number_or_null(m.optimal_cv)}}},
        {"pool_mean", {{"asw", number_or_null(m.pool_mean_asw)}, {"cv", number_or_null(m.pool_mean_cv)}}},
        {"pool_sd", {{"asw", number_or_null(m.pool_sd_asw)}, {"cv", number_or_null(m.pool_sd_cv)}}},
        {"asw_excluded", m.asw_excluded}};
  }
  json provenance = json::object();
  for (const auto& m : table.models) provenance[to_string(m.mode)] = hex64(m.initial_pool_fingerprint);
  return json{{"format", "mosc-comparison"},
              {"version", 1},
              {"silhouette_metric", to_string(table.metric)},
              {"seed", table.seed},
              {"M", table.folds},
              {"models", std::move(models)},
              {"provenance", {{"initial_pool_fingerprint", std::move(provenance)}}}};
}

std::string comparison_to_csv(const ComparisonTable& table) {
  std::ostringstream out;
  out << "statistic,metric";
  for (const auto& m : table.models) out << ',' << to_string(m.mode);
  out << '\n';
  auto row = [&](const char* stat, const char* metric, double ModelSummary::*field) {
    out << stat << ',' << metric;
    for (const auto& m : table.models) {
      const double v = m.*field;
      out << ',' << (std::isfinite(v) ? format_double(v) : std::string("NA"));
    }
    out << '\n';
  };
  row("optimal", "asw", &ModelSummary::optimal_asw);
  row("optimal", "cv", &ModelSummary::optimal_cv);
  row("pool_mean", "asw", &ModelSummary::pool_mean_asw);
  row("pool_mean", "cv", &ModelSummary::pool_mean_cv);
  row("pool_sd", "asw", &ModelSummary::pool_sd_asw);
  row("pool_sd", "cv", &ModelSummary::pool_sd_cv);
  return out.str();
}

json tree_to_json(const DecisionTree& tree, const std::vector<std::string>& feature_names) {
  json nodes = json::array();
  for (const auto& node : tree.nodes) {
    json counts = json::object();
    for (const auto& [label, c] : node.class_counts) counts[std::to_string(label)] = c;
    json jn = {{"leaf", node.leaf},
               {"label", node.label},
               {"samples", node.samples},
               {"impurity", node.impurity},
               {"depth", node.depth},
               {"class_counts", std::move(counts)}};
    if (!node.leaf) {
      jn["feature"] = node.feature;
      jn["feature_name"] = static_cast<std::size_t>(node.feature) < feature_names.size()
                               ? feature_names[static_cast<std::size_t>(node.feature)]
                               : "x" + std::to_string(node.feature);
      jn["threshold"] = node.threshold;
      jn["left"] = node.left;
      jn["right"] = node.right;
    }
    nodes.push_back(std::move(jn));
  }
  return json{{"format", "mosc-cart"}, {"version", 1}, {"n_features", tree.n_features}, {"nodes", std::move(nodes)}};
}

DecisionTree tree_from_json(const json& j) {
  DecisionTree tree;
  try {
    tree.n_features = j.at("n_features").get<Index>();
    for (const auto& jn : j.at("nodes")) {
      TreeNode node;
      node.leaf = jn.at("leaf").get<bool>();
      node.label = jn.at("label").get<int>();
      node.samples = jn.at("samples").get<Index>();
      node.impurity = jn.at("impurity").get<double>();
      node.depth = jn.at("depth").get<int>();
      for (const auto& [label, c] : jn.at("class_counts").items()) node.class_counts[std::stoi(label)] = c.get<Index>();
      if (!node.leaf) {
        node.feature = jn.at("feature").get<int>();
        node.threshold = jn.at("threshold").get<double>();
        node.left = jn.at("left").get<int>();
        node.right = jn.at("right").get<int>();
      }
      tree.nodes.push_back(std::move(node));
    }
  } catch (const json::exception& e) {
    throw DomainError(std::string("malformed tree JSON: ") + e.what());
  }
  return tree;
}

}  // namespace mosc
