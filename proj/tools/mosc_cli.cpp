// mosc: command-line driver for multi-objective semi-supervised clustering.
//
//   mosc gen      --out DIR [--seed S] [spec flags]
//   mosc fit      DATA.csv --out DIR [--config FILE] [--seed S] [--threads T]
//   mosc compare  DATA.csv --out DIR [--config FILE] [--seed S] [--threads T]
//   mosc explain  DATA.csv --report REPORT.json --out DIR [--seed S] [tree flags]
//
// Exit status: 0 success, 1 runtime failure, 2 usage error or missing input,
// 3 output exists and --force was not given.

#include "mosc/config.hpp"
#include "mosc/dataset.hpp"
#include "mosc/evolve.hpp"
#include "mosc/io.hpp"
#include "mosc/metrics.hpp"
#include "mosc/report_io.hpp"
#include "mosc/surrogate.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

namespace fs = std::filesystem;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitExists = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OutputExists : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr const char* kFitOutputs[] = {"report.json", "trajectory.csv", "pool_scatter.csv",
                                       "pca.csv", "k_frequency.csv", "cluster_sizes.csv"};

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  std::string out;
  bool force = false;
  std::optional<int> threads;
  std::string config;
};

// Files are staged in memory and written only once everything has been computed.
class OutputSet {
 public:
  OutputSet(fs::path dir, bool force) : dir_(std::move(dir)), force_(force) {}

  void add(const std::string& name, std::string content) { files_.emplace_back(name, std::move(content)); }

  void check_writable() const {
    for (const auto& [name, content] : files_) {
      const fs::path target = dir_ / name;
      if (fs::exists(target) && !force_)
        throw OutputExists("refusing to overwrite " + target.string() + " (pass --force)");
    }
  }

  void commit() const {
    check_writable();
    fs::create_directories(dir_);
    for (const auto& [name, content] : files_) mosc::write_file_atomic(dir_ / name, content);
  }

 private:
  fs::path dir_;
  bool force_;
  std::vector<std::pair<std::string, std::string>> files_;
};

fs::path require_out(const GlobalOptions& g) {
  if (g.out.empty()) throw UsageError("--out is required");
  return g.out;
}

void require_input(const std::string& path, const char* what) {
  if (path.empty()) throw UsageError(std::string("missing ") + what + " path");
  if (!fs::exists(path)) throw UsageError(std::string(what) + " not found: " + path);
}

mosc::PipelineConfig resolve_config(const GlobalOptions& g) {
  mosc::PipelineConfig cfg;
  if (!g.config.empty()) {
    require_input(g.config, "config file");
    cfg = mosc::load_config(g.config);
  }
  if (g.seed) cfg.run.seed = *g.seed;
  if (g.threads) cfg.run.threads = *g.threads;
  return cfg;
}

mosc::Dataset prepare_dataset(const std::string& path, const mosc::PipelineConfig& cfg) {
  require_input(path, "dataset");
  mosc::Dataset ds = mosc::transform_outcome(mosc::load_csv(path, cfg.outcome_column), cfg.outcome_transform);
  if (cfg.standardize) ds = mosc::standardize_features(std::move(ds));
  return ds;
}

mosc::Matrix<double> projection_for_plot(const mosc::Dataset& ds) {
  if (ds.d() >= 2) return mosc::pca_project(ds);
  mosc::Matrix<double> out = mosc::Matrix<double>::Zero(ds.n(), 2);
  out.col(0) = ds.features.col(0).array() - ds.features.col(0).mean();
  return out;
}

struct GenOptions {
  mosc::SyntheticSpec spec;
  bool no_clip = false;
};

int cmd_gen(const GlobalOptions& g, GenOptions opts) {
  auto spec = opts.spec;
  spec.clip_negative = !opts.no_clip;
  const auto data = mosc::gen_synthetic(spec, g.seed.value_or(0));
  const fs::path dir = require_out(g);

  OutputSet out(dir, g.force);
  out.add("data.csv", mosc::dataset_to_csv(data.dataset, "cost"));
  out.add("labels.csv", mosc::labels_to_csv(data.labels));
  out.commit();
  std::cout << "n=" << data.dataset.n() << " d=" << data.dataset.d() << " k_true=" << spec.n_clusters << '\n';
  return 0;
}

int cmd_fit(const GlobalOptions& g, const std::string& data_path) {
  const auto cfg = resolve_config(g);
  const fs::path dir = require_out(g);
  const auto ds = prepare_dataset(data_path, cfg);

  OutputSet probe(dir, g.force);
  for (const char* name : kFitOutputs) probe.add(name, "");
  probe.check_writable();

  const auto report = mosc::run(ds, cfg.run);
  OutputSet files(dir, g.force);
  files.add("report.json", mosc::report_to_json(report, cfg, ds).dump(1) + "\n");
  files.add("trajectory.csv", mosc::trajectory_csv(report));
  files.add("pool_scatter.csv", mosc::pool_scatter_csv(report));
  files.add("pca.csv", mosc::pca_csv(projection_for_plot(ds), report.selected_labels));
  files.add("k_frequency.csv", mosc::k_frequency_csv(report));
  files.add("cluster_sizes.csv", mosc::cluster_sizes_csv(report));
  files.commit();

  std::cout << "selected candidate " << report.selected_candidate << " with k=" << report.selected.k()
            << " f=" << report.selected_f << " g=" << report.selected_g << " front=" << report.final_front.size()
            << " iterations=" << report.history.size() << " (" << report.wall_seconds << " s)\n";
  return 0;
}

int cmd_compare(const GlobalOptions& g, const std::string& data_path) {
  const auto cfg = resolve_config(g);
  const fs::path dir = require_out(g);
  const auto ds = prepare_dataset(data_path, cfg);

  OutputSet probe(dir, g.force);
  probe.add("comparison.csv", "");
  probe.add("comparison.json", "");
  probe.check_writable();

  const auto table = mosc::compare(ds, cfg.run, cfg.silhouette_metric);
  OutputSet files(dir, g.force);
  files.add("comparison.csv", mosc::comparison_to_csv(table));
  files.add("comparison.json", mosc::comparison_to_json(table).dump(1) + "\n");
  files.commit();
  std::cout << mosc::comparison_to_csv(table);
  return 0;
}

int cmd_explain(const GlobalOptions& g, const std::string& data_path, const std::string& report_path,
                const mosc::CartParams& params) {
  const auto cfg = resolve_config(g);
  const fs::path dir = require_out(g);
  require_input(data_path, "dataset");
  require_input(report_path, "report");
  nlohmann::json report_json;
  try {
    report_json = nlohmann::json::parse(mosc::read_file(report_path));
  } catch (const nlohmann::json::parse_error& e) {
    throw mosc::DomainError(report_path + " is not valid JSON: " + e.what());
  }
  const auto saved = mosc::selection_from_json(report_json);
  // The report names the outcome column it was fitted with; the tree sees the remaining features.
  const std::string outcome = report_json.at("config").value("outcome_column", cfg.outcome_column);
  const auto ds = mosc::load_csv(data_path, outcome);

  if (saved.n != ds.n())
    throw mosc::DimensionError("report labels cover " + std::to_string(saved.n) + " rows, dataset has " +
                               std::to_string(ds.n()));
  std::vector<int> distinct(saved.labels.data(), saved.labels.data() + saved.labels.size());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 2) throw mosc::DomainError("need >= 2 clusters to explain; report has " +
                                                   std::to_string(distinct.size()));

  OutputSet probe(dir, g.force);
  for (const char* name : {"rules.txt", "tree.json", "surrogate.json"}) probe.add(name, "");
  probe.check_writable();

  const std::uint64_t split_seed = g.seed.value_or(0);
  const auto ev = mosc::evaluate_surrogate(ds.features, saved.labels, split_seed, params);
  nlohmann::json summary = {{"split_seed", split_seed},
                            {"n_train", ev.n_train},
                            {"n_test", ev.n_test},
                            {"train_misclassification", ev.train_error},
                            {"test_misclassification", ev.test_error},
                            {"depth", ev.tree.depth()},
                            {"leaves", ev.tree.leaves()},
                            {"params",
                             {{"max_depth", params.max_depth},
                              {"min_samples_split", params.min_samples_split},
                              {"min_impurity_decrease", params.min_impurity_decrease}}}};
  OutputSet files(dir, g.force);
  files.add("rules.txt", mosc::tree_to_rules(ev.tree, ds.feature_names));
  files.add("tree.json", mosc::tree_to_json(ev.tree, ds.feature_names).dump(1) + "\n");
  files.add("surrogate.json", summary.dump(1) + "\n");
  files.commit();
  std::cout << mosc::tree_to_rules(ev.tree, ds.feature_names) << "held-out misclassification: " << ev.test_error
            << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-objective semi-supervised clustering"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--seed", g.seed, "Random seed (overrides the config file)");
  app.add_option("--out", g.out, "Output directory");
  app.add_flag("--force", g.force, "Overwrite existing output files");
  app.add_option("--threads", g.threads, "Worker threads for candidate evaluation")->check(CLI::PositiveNumber);
  app.add_option("--config", g.config, "Key-value config file");

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic Gaussian-blob dataset");
  gen_cmd->add_option("--clusters", gen.spec.n_clusters, "Number of blobs")->capture_default_str();
  gen_cmd->add_option("--points", gen.spec.points_per_cluster, "Points per blob")->capture_default_str();
  gen_cmd->add_option("--dim", gen.spec.d, "Feature count")->capture_default_str();
  gen_cmd->add_option("--center-lo", gen.spec.center_lo, "Lower bound of the center box")->capture_default_str();
  gen_cmd->add_option("--center-hi", gen.spec.center_hi, "Upper bound of the center box")->capture_default_str();
  gen_cmd->add_option("--spread", gen.spec.spread, "Per-coordinate noise sd")->capture_default_str();
  gen_cmd->add_option("--outcome-means", gen.spec.outcome_means, "One outcome mean per blob")
      ->delimiter(',')
      ->capture_default_str();
  gen_cmd->add_option("--outcome-noise", gen.spec.outcome_noise, "Outcome noise sd")->capture_default_str();
  gen_cmd->add_option("--min-separation", gen.spec.min_center_separation, "Minimum distance between true centers")
      ->capture_default_str();
  gen_cmd->add_flag("--no-clip", gen.no_clip, "Allow negative values");

  std::string data_path;
  auto* fit_cmd = app.add_subcommand("fit", "Run the optimizer and export the report and plot data");
  fit_cmd->add_option("data", data_path, "Dataset CSV");

  auto* cmp_cmd = app.add_subcommand("compare", "Compare multi-objective and single-objective runs");
  cmp_cmd->add_option("data", data_path, "Dataset CSV");

  std::string report_path;
  mosc::CartParams cart;
  auto* exp_cmd = app.add_subcommand("explain", "Fit a decision-tree surrogate to a report's clusters");
  exp_cmd->add_option("data", data_path, "Dataset CSV");
  exp_cmd->add_option("--report", report_path, "report.json written by fit");
  exp_cmd->add_option("--max-depth", cart.max_depth)->capture_default_str();
  exp_cmd->add_option("--min-samples-split", cart.min_samples_split)->capture_default_str();
  exp_cmd->add_option("--min-impurity-decrease", cart.min_impurity_decrease)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen_cmd) return cmd_gen(g, gen);
    if (*fit_cmd) return cmd_fit(g, data_path);
    if (*cmp_cmd) return cmd_compare(g, data_path);
    if (*exp_cmd) return cmd_explain(g, data_path, report_path, cart);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const OutputExists& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitExists;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
