#include "mosc/config.hpp"

#include "mosc/io.hpp"

#include <charconv>
#include <sstream>

namespace mosc {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_value(const std::string& key, const std::string& value, int line) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size())
    throw DomainError("config line " + std::to_string(line) + ": bad value '" + value + "' for " + key);
  return out;
}

bool parse_bool(const std::string& key, const std::string& value, int line) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw DomainError("config line " + std::to_string(line) + ": bad boolean '" + value + "' for " + key);
}

CostKind parse_cost(const std::string& value) {
  if (value == "sum") return CostKind::sum;
  if (value == "mean") return CostKind::mean;
  throw DomainError("unknown cost kind '" + value + "' (expected sum or mean)");
}

}  // namespace

PipelineConfig parse_config(const std::string& text) {
  PipelineConfig cfg;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string stripped = trim(raw);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw DomainError("config line " + std::to_string(line) + ": expected key = value");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    auto& run = cfg.run;
    if (key == "n_pool") run.n_pool = parse_value<int>(key, value, line);
    else if (key == "K") run.max_clusters = parse_value<int>(key, value, line);
    else if (key == "tau_max") run.tau_max = parse_value<int>(key, value, line);
    else if (key == "alpha") run.alpha = parse_value<double>(key, value, line);
    else if (key == "c_alpha") run.c_alpha = parse_value<double>(key, value, line);
    else if (key == "c_gamma") run.c_gamma = parse_value<double>(key, value, line);
    else if (key == "M") run.folds = parse_value<int>(key, value, line);
    else if (key == "seed") run.seed = parse_value<std::uint64_t>(key, value, line);
    else if (key == "dominance") run.dominance = parse_dominance_mode(value);
    else if (key == "objective") run.objective = parse_objective_mode(value);
    else if (key == "cost") run.cost = parse_cost(value);
    else if (key == "reseed_empty") run.reseed_empty = parse_bool(key, value, line);
    else if (key == "threads") run.threads = parse_value<int>(key, value, line);
    else if (key == "outcome_column") cfg.outcome_column = value;
    else if (key == "outcome_transform") cfg.outcome_transform = parse_outcome_transform(value);
    else if (key == "standardize") cfg.standardize = parse_bool(key, value, line);
    else if (key == "silhouette_metric") cfg.silhouette_metric = parse_distance_metric(value);
    else throw DomainError("config line " + std::to_string(line) + ": unknown key '" + key + "'");
  }
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw IoError("config file not found: " + path.string());
  return parse_config(read_file(path));
}

std::string config_to_text(const PipelineConfig& cfg) {
  const auto& r = cfg.run;
  std::ostringstream out;
  out << "n_pool = " << r.n_pool << '\n'
      << "K = " << r.max_clusters << '\n'
      << "tau_max = " << r.tau_max << '\n'
      << "alpha = " << format_double(r.alpha) << '\n'
      << "c_alpha = " << format_double(r.c_alpha) << '\n'
      << "c_gamma = " << format_double(r.c_gamma) << '\n'
      << "M = " << r.folds << '\n'
      << "seed = " << r.seed << '\n'
      << "dominance = " << to_string(r.dominance) << '\n'
      << "objective = " << to_string(r.objective) << '\n'
      << "cost = " << (r.cost == CostKind::sum ? "sum" : "mean") << '\n'
      << "reseed_empty = " << (r.reseed_empty ? "true" : "false") << '\n'
      << "threads = " << r.threads << '\n'
      << "outcome_column = " << cfg.outcome_column << '\n'
      << "outcome_transform = " << to_string(cfg.outcome_transform) << '\n'
      << "standardize = " << (cfg.standardize ? "true" : "false") << '\n'
      << "silhouette_metric = " << to_string(cfg.silhouette_metric) << '\n';
  return out.str();
}

}  // namespace mosc
