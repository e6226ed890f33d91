#include "mosc/evolve.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <thread>

namespace mosc {

DominanceMode parse_dominance_mode(const std::string& name) {
  if (name == "paper_strict") return DominanceMode::paper_strict;
  if (name == "standard") return DominanceMode::standard;
  throw DomainError("unknown dominance mode '" + name + "' (expected paper_strict or standard)");
}

std::string to_string(DominanceMode mode) {
  return mode == DominanceMode::paper_strict ? "paper_strict" : "standard";
}

ObjectiveMode parse_objective_mode(const std::string& name) {
  if (name == "multi") return ObjectiveMode::multi;
  if (name == "f_only") return ObjectiveMode::f_only;
  if (name == "g_only") return ObjectiveMode::g_only;
  throw DomainError("unknown objective mode '" + name + "' (expected multi, f_only or g_only)");
}

std::string to_string(ObjectiveMode mode) {
  switch (mode) {
    case ObjectiveMode::multi: return "multi";
    case ObjectiveMode::f_only: return "f_only";
    case ObjectiveMode::g_only: return "g_only";
  }
  return "multi";
}

void RunConfig::validate() const {
  if (max_clusters < 2) throw DomainError("K must be >= 2");
  if (n_pool < max_clusters - 1)
    throw DomainError("n_pool must be >= K-1 so every k in 2..K gets a candidate");
  if (tau_max < 1) throw DomainError("tau_max must be >= 1");
  if (!(alpha > 0.5 && alpha <= 1.0)) throw DomainError("alpha must lie in (0.5, 1]");
  if (!(c_alpha > 0.0)) throw DomainError("c_alpha must be > 0");
  if (!(c_gamma > 0.0)) throw DomainError("c_gamma must be > 0");
  if (folds < 2) throw DomainError("folds must be >= 2");
  if (threads < 1) throw DomainError("threads must be >= 1");
}

std::mt19937_64 derived_rng(std::uint64_t seed, std::uint64_t purpose, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(purpose), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

std::vector<CandidateSet> init_pool(const Dataset& ds, const RunConfig& cfg) {
  cfg.validate();
  if (ds.n() < cfg.max_clusters)
    throw DomainError("dataset has " + std::to_string(ds.n()) + " rows, fewer than K=" +
                      std::to_string(cfg.max_clusters) + " distinct centers");
  std::vector<CandidateSet> pool(static_cast<std::size_t>(cfg.n_pool));
  std::vector<Index> rows(static_cast<std::size_t>(ds.n()));
  for (int c = 0; c < cfg.n_pool; ++c) {
    const int k = 2 + c % (cfg.max_clusters - 1);
    auto rng = derived_rng(cfg.seed, static_cast<std::uint64_t>(StreamPurpose::pool), static_cast<std::uint64_t>(c));
    // Partial Fisher-Yates: the first k slots become a uniform sample without replacement.
    std::iota(rows.begin(), rows.end(), Index{0});
    auto& centers = pool[static_cast<std::size_t>(c)].centers;
    centers.resize(k, ds.d());
    for (int j = 0; j < k; ++j) {
      std::uniform_int_distribution<Index> pick(j, ds.n() - 1);
      std::swap(rows[static_cast<std::size_t>(j)], rows[static_cast<std::size_t>(pick(rng))]);
      centers.row(j) = ds.features.row(rows[static_cast<std::size_t>(j)]);
    }
  }
  return pool;
}

FoldAssignment run_folds(const Dataset& ds, const RunConfig& cfg) {
  auto rng = derived_rng(cfg.seed, static_cast<std::uint64_t>(StreamPurpose::folds), 0);
  return make_folds(ds.n(), cfg.folds, rng());
}

Evaluation evaluate_candidate(const Dataset& ds, const CandidateSet& cs, const FoldAssignment& folds, CostKind cost) {
  Evaluation ev;
  ev.allocation = allocation_distance(ds.features, cs.centers);
  ev.f = clustering_cost(ev.allocation, cost);
  const auto cv = cv_rmse_detailed(ev.allocation, ds.outcome, folds);
  ev.g = cv.value;
  ev.empty_training_cluster = cv.empty_training_cluster;
  return ev;
}

namespace {

template <typename Fn>
void parallel_for(Index count, int threads, Fn&& fn) {
  if (threads <= 1 || count < 2) {
    for (Index i = 0; i < count; ++i) fn(i);
    return;
  }
  const Index workers = std::min<Index>(threads, count);
  std::vector<std::jthread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (Index w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (Index i = w; i < count; i += workers) fn(i);
    });
}

ParetoArchive front_for(const Matrix<double>& values, const RunConfig& cfg) {
  switch (cfg.objective) {
    case ObjectiveMode::multi: return pareto_front(values, cfg.dominance);
    case ObjectiveMode::f_only: return scalar_front(values.col(0));
    case ObjectiveMode::g_only: return scalar_front(values.col(1));
  }
  return pareto_front(values, cfg.dominance);
}

}  // namespace

RunReport run(const Dataset& ds, const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  ds.validate();
  cfg.validate();

  RunReport report;
  report.config = cfg;
  std::vector<CandidateSet> pool = init_pool(ds, cfg);
  report.initial_pool = pool;
  for (const auto& cs : pool) report.candidate_k.push_back(static_cast<int>(cs.k()));
  const FoldAssignment folds = run_folds(ds, cfg);

  const Index n_pool = static_cast<Index>(pool.size());
  std::vector<std::mt19937_64> streams;
  streams.reserve(pool.size());
  for (Index c = 0; c < n_pool; ++c)
    streams.push_back(derived_rng(cfg.seed, static_cast<std::uint64_t>(StreamPurpose::sgd), static_cast<std::uint64_t>(c)));
  std::vector<bool> frozen(pool.size(), false);
  std::vector<Evaluation> evals(pool.size());
  ParetoArchive front;

  for (int tau = 0; tau < cfg.tau_max; ++tau) {
    parallel_for(n_pool, cfg.threads, [&](Index c) {
      evals[static_cast<std::size_t>(c)] = evaluate_candidate(ds, pool[static_cast<std::size_t>(c)], folds, cfg.cost);
    });
    Matrix<double> values(n_pool, 2);
    for (Index c = 0; c < n_pool; ++c) {
      const auto& ev = evals[static_cast<std::size_t>(c)];
      values(c, 0) = ev.f;
      values(c, 1) = ev.g;
      if (ev.empty_training_cluster) ++report.empty_training_events;
    }
    report.history.push_back(values);
    front = front_for(values, cfg);
    for (Index c : front.non_finite) {
      if (!frozen[static_cast<std::size_t>(c)]) report.frozen.push_back(c);
      frozen[static_cast<std::size_t>(c)] = true;
    }
    if (front.members.empty()) {
      report.degenerate = true;
      break;
    }
    report.front_history.push_back(front.members);
    // Updates after the last evaluation would never be scored.
    if (tau + 1 == cfg.tau_max) break;

    std::vector<bool> on_front(pool.size(), false);
    for (Index c : front.members) on_front[static_cast<std::size_t>(c)] = true;

    for (Index c = 0; c < n_pool; ++c) {
      const auto cu = static_cast<std::size_t>(c);
      if (on_front[cu] || frozen[cu]) continue;
      const auto& alloc = evals[cu].allocation;
      auto& centers = pool[cu].centers;
      auto& rng = streams[cu];

      std::vector<std::vector<Index>> members(static_cast<std::size_t>(centers.rows()));
      for (Index i = 0; i < alloc.n(); ++i) members[static_cast<std::size_t>(alloc.labels(i))].push_back(i);

      for (Index j = 0; j < centers.rows(); ++j) {
        const auto& bucket = members[static_cast<std::size_t>(j)];
        if (bucket.empty()) {
          ++report.skipped_empty_updates;
          if (cfg.reseed_empty) {
            std::uniform_int_distribution<Index> pick(0, ds.n() - 1);
            centers.row(j) = ds.features.row(pick(rng));
          }
          continue;
        }
        std::uniform_int_distribution<std::size_t> pick(0, bucket.size() - 1);
        const Index z = bucket[pick(rng)];
        const double step = learning_rate(cfg, static_cast<Index>(bucket.size()));
        if ((centers.row(j) - ds.features.row(z)).lpNorm<1>() == 0.0) ++report.skipped_zero_distance_updates;
        centers.row(j) = sgd_update(centers.row(j).transpose(), ds.features.row(z).transpose(), step).transpose();
      }
    }
  }

  if (front.members.empty()) throw Error("every candidate produced a non-finite objective; nothing to select");
  report.final_front = front;
  report.final_pool = pool;

  const Matrix<double>& last = report.history.back();
  Matrix<double> front_values(front.size(), 2);
  for (Index p = 0; p < front.size(); ++p) front_values.row(p) = last.row(front.members[static_cast<std::size_t>(p)]);
  Index chosen = 0;
  if (cfg.objective == ObjectiveMode::multi) {
    report.selection = select_final(front_values);
    chosen = report.selection.chosen;
  }
  // Single-objective fronts hold only minimizers; the lowest index wins.
  report.selected_candidate = front.members[static_cast<std::size_t>(chosen)];

  const auto sel = static_cast<std::size_t>(report.selected_candidate);
  report.selected = pool[sel];
  const auto ev = evaluate_candidate(ds, pool[sel], folds, cfg.cost);
  report.selected_labels = ev.allocation.labels;
  report.cluster_sizes = ev.allocation.counts;
  report.selected_f = ev.f;
  report.selected_g = ev.g;

  report.k_frequency.assign(static_cast<std::size_t>(cfg.max_clusters + 1), 0);
  for (Index c : front.members) ++report.k_frequency[static_cast<std::size_t>(report.candidate_k[static_cast<std::size_t>(c)])];

  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace mosc
