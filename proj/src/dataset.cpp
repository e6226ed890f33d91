#include "mosc/dataset.hpp"

#include "mosc/io.hpp"

#include <algorithm>
#include <charconv>
#include <random>
#include <sstream>
#include <string_view>

namespace mosc {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    cells.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return cells;
}

bool parse_number(std::string_view cell, double& out) {
  if (cell.empty()) return false;
  if (cell.front() == '+') cell.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return ec == std::errc{} && ptr == cell.data() + cell.size() && std::isfinite(out);
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto pos = text.find('\n', start);
    if (pos == std::string_view::npos) pos = text.size();
    auto line = text.substr(start, pos - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = pos + 1;
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  return lines;
}

}  // namespace

OutcomeTransform parse_outcome_transform(const std::string& name) {
  if (name == "log1p") return OutcomeTransform::log1p;
  if (name == "log") return OutcomeTransform::log;
  if (name == "identity") return OutcomeTransform::identity;
  throw DomainError("unknown outcome transform '" + name + "' (expected log1p, log or identity)");
}

std::string to_string(OutcomeTransform mode) {
  switch (mode) {
    case OutcomeTransform::log1p: return "log1p";
    case OutcomeTransform::log: return "log";
    case OutcomeTransform::identity: return "identity";
  }
  return "identity";
}

Dataset load_csv(const std::filesystem::path& path, const std::string& outcome_column) {
  if (!std::filesystem::exists(path)) throw IoError("dataset file not found: " + path.string());
  const std::string text = read_file(path);
  std::string_view body = text;
  if (body.starts_with("\xEF\xBB\xBF")) body.remove_prefix(3);
  const auto lines = split_lines(body);
  if (lines.empty()) throw IoError(path.string() + ": missing header row");

  const auto header = split_commas(lines.front());
  Index outcome_idx = -1;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] == outcome_column) {
      if (outcome_idx >= 0)
        throw DomainError(path.string() + ": duplicate outcome column '" + outcome_column + "'");
      outcome_idx = static_cast<Index>(j);
    }
  }
  if (outcome_idx < 0)
    throw DomainError(path.string() + ": outcome column not found: '" + outcome_column + "'");

  const Index n = static_cast<Index>(lines.size()) - 1;
  const Index cols = static_cast<Index>(header.size());
  if (n < 2) throw DomainError(path.string() + ": need at least 2 data rows, found " + std::to_string(n));

  Dataset ds;
  ds.features.resize(n, cols - 1);
  ds.outcome.resize(n);
  for (Index j = 0; j < cols; ++j)
    if (j != outcome_idx) ds.feature_names.emplace_back(header[static_cast<std::size_t>(j)]);

  for (Index i = 0; i < n; ++i) {
    const auto cells = split_commas(lines[static_cast<std::size_t>(i + 1)]);
    if (static_cast<Index>(cells.size()) != cols)
      throw DomainError(path.string() + ": row " + std::to_string(i + 1) + " has " +
                        std::to_string(cells.size()) + " cells, header has " + std::to_string(cols));
    Index fj = 0;
    for (Index j = 0; j < cols; ++j) {
      double v = 0.0;
      const auto cell = cells[static_cast<std::size_t>(j)];
      if (!parse_number(cell, v))
        throw DomainError(path.string() + ": non-numeric value '" + std::string(cell) + "' at row " +
                          std::to_string(i + 1) + ", column '" +
                          std::string(header[static_cast<std::size_t>(j)]) + "'");
      if (j == outcome_idx)
        ds.outcome(i) = v;
      else
        ds.features(i, fj++) = v;
    }
  }
  ds.validate();
  return ds;
}

std::string dataset_to_csv(const Dataset& ds, const std::string& outcome_column) {
  std::ostringstream out;
  for (Index j = 0; j < ds.d(); ++j) {
    out << (ds.feature_names.empty() ? "x" + std::to_string(j) : ds.feature_names[static_cast<std::size_t>(j)])
        << ',';
  }
  out << outcome_column << '\n';
  for (Index i = 0; i < ds.n(); ++i) {
    for (Index j = 0; j < ds.d(); ++j) out << format_double(ds.features(i, j)) << ',';
    out << format_double(ds.outcome(i)) << '\n';
  }
  return out.str();
}

void write_csv(const std::filesystem::path& path, const Dataset& ds, const std::string& outcome_column) {
  write_file_atomic(path, dataset_to_csv(ds, outcome_column));
}

std::string labels_to_csv(const Labels& labels) {
  std::ostringstream out;
  out << "label\n";
  for (Index i = 0; i < labels.size(); ++i) out << labels(i) << '\n';
  return out.str();
}

void write_labels_csv(const std::filesystem::path& path, const Labels& labels) {
  write_file_atomic(path, labels_to_csv(labels));
}

Labels read_labels_csv(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  const auto lines = split_lines(text);
  if (lines.empty()) throw IoError(path.string() + ": empty label file");
  Labels labels(static_cast<Index>(lines.size()) - 1);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cell = trim(lines[i]);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || ptr != cell.data() + cell.size())
      throw DomainError(path.string() + ": bad label at row " + std::to_string(i));
    labels(static_cast<Index>(i) - 1) = v;
  }
  return labels;
}

void SyntheticSpec::validate() const {
  if (n_clusters < 2) throw DomainError("n_clusters must be >= 2");
  if (points_per_cluster < 2) throw DomainError("points_per_cluster must be >= 2");
  if (d < 1) throw DomainError("d must be >= 1");
  if (!(center_hi >= center_lo)) throw DomainError("center box upper bound below lower bound");
  if (!(spread > 0.0)) throw DomainError("spread must be > 0");
  if (!(outcome_noise >= 0.0)) throw DomainError("outcome_noise must be >= 0");
  if (static_cast<int>(outcome_means.size()) != n_clusters)
    throw DomainError("outcome_means needs one value per cluster (" + std::to_string(n_clusters) + ")");
  if (!(min_center_separation >= 0.0)) throw DomainError("min_center_separation must be >= 0");
}

SyntheticData gen_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  spec.validate();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> box(spec.center_lo, spec.center_hi);
  std::normal_distribution<double> unit(0.0, 1.0);

  Matrix<double> centers(spec.n_clusters, spec.d);
  constexpr int kMaxAttempts = 100000;
  for (int c = 0; c < spec.n_clusters; ++c) {
    for (int attempt = 0;; ++attempt) {
      if (attempt == kMaxAttempts)
        throw DomainError("cannot place centers with the requested separation inside the box");
      for (int j = 0; j < spec.d; ++j) centers(c, j) = box(rng);
      bool ok = true;
      for (int p = 0; p < c && ok; ++p)
        ok = (centers.row(c) - centers.row(p)).norm() >= spec.min_center_separation;
      if (ok) break;
    }
  }

  const Index n = static_cast<Index>(spec.n_clusters) * spec.points_per_cluster;
  SyntheticData out;
  out.true_centers = centers;
  out.labels.resize(n);
  out.dataset.features.resize(n, spec.d);
  out.dataset.outcome.resize(n);
  for (int j = 0; j < spec.d; ++j) out.dataset.feature_names.push_back("x" + std::to_string(j));

  Index row = 0;
  for (int c = 0; c < spec.n_clusters; ++c) {
    for (int p = 0; p < spec.points_per_cluster; ++p, ++row) {
      out.labels(row) = c;
      for (int j = 0; j < spec.d; ++j) {
        double v = centers(c, j) + spec.spread * unit(rng);
        if (spec.clip_negative) v = std::max(v, 0.0);
        out.dataset.features(row, j) = v;
      }
      double y = spec.outcome_means[static_cast<std::size_t>(c)] + spec.outcome_noise * unit(rng);
      if (spec.clip_negative) y = std::max(y, 0.0);
      out.dataset.outcome(row) = y;
    }
  }
  return out;
}

}  // namespace mosc
