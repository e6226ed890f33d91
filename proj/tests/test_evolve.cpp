#include "mosc/evolve.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <map>
#include <random>

using namespace mosc;

namespace {

Dataset small_blobs(std::uint64_t seed, int per_cluster = 30) {
  SyntheticSpec spec;
  spec.points_per_cluster = per_cluster;
  spec.d = 2;
  spec.min_center_separation = 1000.0;
  return transform_outcome(gen_synthetic(spec, seed).dataset, OutcomeTransform::log1p);
}

RunConfig small_config() {
  RunConfig cfg;
  cfg.n_pool = 12;
  cfg.max_clusters = 5;
  cfg.tau_max = 15;
  cfg.folds = 5;
  cfg.seed = 4;
  return cfg;
}

}  // namespace

TEST_CASE("learning_rate analytic cases") {
  const RunConfig cfg;
  CHECK(learning_rate(cfg, 15) == 250.0);
  CHECK(learning_rate(cfg, 255) == 31.25);
  CHECK(learning_rate(cfg, 0) == 2000.0);
  for (Index n = 0; n < 500; ++n) CHECK(learning_rate(cfg, n + 1) < learning_rate(cfg, n));
}

TEST_CASE("sgd_update examples") {
  const Vector<double> a = sgd_update(Vector<double>{{3, 1}}, Vector<double>{{1, 1}}, 31.25);
  CHECK(a == Vector<double>{{-28.25, 1}});
  const Vector<double> b = sgd_update(Vector<double>{{0, 0}}, Vector<double>{{1, 1}}, 2.0);
  CHECK(b == Vector<double>{{1, 1}});
  const Vector<double> c{{4, -2, 7}};
  CHECK(sgd_update(c, c, 100.0) == c);
}

TEST_CASE("sgd step length equals the learning rate") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> unit;
  std::uniform_real_distribution<double> rate(0.01, 3000.0);
  for (int rep = 0; rep < 300; ++rep) {
    Vector<double> x(4), z(4);
    for (Index j = 0; j < 4; ++j) {
      x(j) = 100.0 * unit(rng);
      z(j) = 100.0 * unit(rng);
    }
    const double a = rate(rng);
    REQUIRE((sgd_update(x, z, a) - x).lpNorm<1>() == doctest::Approx(a).epsilon(1e-10));
  }
}

TEST_CASE("pareto_front examples") {
  const Matrix<double> v1{{1, 2}, {2, 1}, {3, 3}};
  CHECK(pareto_front(v1, DominanceMode::paper_strict).members == std::vector<Index>{0, 1});
  CHECK(pareto_front(v1, DominanceMode::standard).members == std::vector<Index>{0, 1});
  const Matrix<double> v2{{1, 2}, {1, 2}};
  CHECK(pareto_front(v2, DominanceMode::paper_strict).members == std::vector<Index>{0, 1});
  CHECK(pareto_front(v2, DominanceMode::standard).members == std::vector<Index>{0, 1});
  const Matrix<double> v3{{1, 3}, {1, 2}};
  CHECK(pareto_front(v3, DominanceMode::paper_strict).members == std::vector<Index>{0, 1});
  CHECK(pareto_front(v3, DominanceMode::standard).members == std::vector<Index>{1});
}

TEST_CASE("pareto_front keeps non-finite rows off the front") {
  const Matrix<double> v{{1, std::numeric_limits<double>::quiet_NaN()}, {2, 2}, {5, 5}};
  const auto front = pareto_front(v, DominanceMode::paper_strict);
  CHECK(front.members == std::vector<Index>{1});
  CHECK(front.non_finite == std::vector<Index>{0});
}

TEST_CASE("scalar_front returns every minimizer") {
  CHECK(scalar_front(Vector<double>{{3, 1, 2, 1}}).members == std::vector<Index>{1, 3});
}

TEST_CASE("select_final on the three-member example") {
  const Matrix<double> v{{1, 30}, {2, 20}, {6, 10}};
  const auto sel = select_final(v);
  CHECK(sel.normalized(0, 0) == doctest::Approx(-0.7559289460184544).epsilon(1e-12));
  CHECK(sel.normalized(1, 0) == doctest::Approx(-0.3779644730092272).epsilon(1e-12));
  CHECK(sel.normalized(2, 0) == doctest::Approx(1.1338934190276817).epsilon(1e-12));
  CHECK(sel.normalized(0, 1) == doctest::Approx(1.0));
  CHECK(sel.normalized(1, 1) == doctest::Approx(0.0));
  CHECK(sel.normalized(2, 1) == doctest::Approx(-1.0));
  CHECK(sel.ideal(0) == doctest::Approx(-0.7559289460184544));
  CHECK(sel.ideal(1) == doctest::Approx(-1.0));
  CHECK(sel.similarities(0) == doctest::Approx(-0.2727272727272728).epsilon(1e-12));
  CHECK(sel.similarities(1) == doctest::Approx(0.6030226891555271).epsilon(1e-12));
  CHECK(sel.similarities(2) == doctest::Approx(0.07537783614444094).epsilon(1e-12));
  CHECK(sel.chosen == 1);
}

TEST_CASE("select_final edge cases") {
  SUBCASE("identical members tie to index 0") {
    const auto sel = select_final(Matrix<double>{{2, 5}, {2, 5}});
    CHECK(sel.similarities(0) == sel.similarities(1));
    CHECK(sel.chosen == 0);
  }
  SUBCASE("single member") {
    const auto sel = select_final(Matrix<double>{{2, 5}});
    CHECK(sel.chosen == 0);
  }
  SUBCASE("cosine identities") {
    CHECK(cosine_similarity(Vector<double>{{1, 0}}, Vector<double>{{0, 1}}) == 0.0);
    CHECK(cosine_similarity(Vector<double>{{3, 4}}, Vector<double>{{3, 4}}) == doctest::Approx(1.0));
  }
}

TEST_CASE("select_final agrees with the direct oracle and ignores column scale") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::uniform_real_distribution<double> scale(0.01, 100.0);
  for (int rep = 0; rep < 200; ++rep) {
    const Index np = 2 + rep % 9;
    Matrix<double> v(np, 2);
    std::vector<double> f, g;
    for (Index p = 0; p < np; ++p) {
      v(p, 0) = u(rng);
      v(p, 1) = u(rng);
      f.push_back(v(p, 0));
      g.push_back(v(p, 1));
    }
    const auto sel = select_final(v);
    const auto ref = oracle::select_direct(f, g);
    REQUIRE(sel.chosen == static_cast<Index>(ref.chosen));
    for (Index p = 0; p < np; ++p)
      REQUIRE(sel.similarities(p) == doctest::Approx(ref.similarities[static_cast<std::size_t>(p)]).epsilon(1e-12));
    Matrix<double> scaled = v;
    scaled.col(rep % 2) *= scale(rng);
    REQUIRE(select_final(scaled).chosen == sel.chosen);
  }
}

TEST_CASE("init_pool distributes k round-robin") {
  const Dataset ds = small_blobs(1);
  RunConfig cfg;
  auto pool = init_pool(ds, cfg);
  std::map<Index, int> freq;
  for (const auto& cs : pool) ++freq[cs.k()];
  CHECK(freq.size() == 10);
  for (const auto& [k, count] : freq) CHECK(count == 10);

  cfg.n_pool = 5;
  cfg.max_clusters = 4;
  pool = init_pool(ds, cfg);
  std::vector<Index> ks;
  for (const auto& cs : pool) ks.push_back(cs.k());
  CHECK(ks == std::vector<Index>{2, 3, 4, 2, 3});
}

TEST_CASE("init_pool draws distinct data rows") {
  const Dataset ds = small_blobs(2);
  const auto pool = init_pool(ds, small_config());
  for (const auto& cs : pool) {
    for (Index j = 0; j < cs.k(); ++j) {
      bool found = false;
      for (Index i = 0; i < ds.n() && !found; ++i) found = ds.features.row(i) == cs.centers.row(j);
      CHECK(found);
      for (Index l = j + 1; l < cs.k(); ++l) CHECK(cs.centers.row(j) != cs.centers.row(l));
    }
  }
}

TEST_CASE("RunConfig validation") {
  RunConfig cfg;
  cfg.n_pool = 9;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = RunConfig{};
  cfg.alpha = 0.5;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg.alpha = 1.0;
  CHECK_NOTHROW(cfg.validate());
  cfg.tau_max = 0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
}

TEST_CASE("run with tau_max = 1 selects from the initial front") {
  const Dataset ds = small_blobs(3);
  RunConfig cfg = small_config();
  cfg.tau_max = 1;
  const auto report = run(ds, cfg);
  REQUIRE(report.history.size() == 1);
  REQUIRE(report.front_history.size() == 1);
  const auto& front = report.front_history[0];
  CHECK(std::find(front.begin(), front.end(), report.selected_candidate) != front.end());
  CHECK(report.selected.centers == report.initial_pool[static_cast<std::size_t>(report.selected_candidate)].centers);
}

TEST_CASE("run is deterministic and thread-count independent") {
  const Dataset ds = small_blobs(5);
  RunConfig cfg = small_config();
  const auto a = run(ds, cfg);
  const auto b = run(ds, cfg);
  cfg.threads = 3;
  const auto c = run(ds, cfg);
  for (const auto* other : {&b, &c}) {
    REQUIRE(other->history.size() == a.history.size());
    for (std::size_t t = 0; t < a.history.size(); ++t) CHECK(other->history[t] == a.history[t]);
    CHECK(other->front_history == a.front_history);
    CHECK(other->selected.centers == a.selected.centers);
    CHECK(other->selected_labels == a.selected_labels);
  }
}

TEST_CASE("recorded fronts are internally non-dominated and front members stay put") {
  const Dataset ds = small_blobs(6);
  RunConfig cfg = small_config();
  cfg.tau_max = 25;
  const auto report = run(ds, cfg);
  for (std::size_t t = 0; t < report.history.size(); ++t) {
    const auto& h = report.history[t];
    const auto& front = report.front_history[t];
    CHECK(!front.empty());
    for (Index a : front)
      for (Index b : front)
        CHECK_FALSE(dominates(h(a, 0), h(a, 1), h(b, 0), h(b, 1), cfg.dominance));
    if (t + 1 < report.history.size())
      for (Index a : front) CHECK(report.history[t + 1].row(a) == h.row(a));
  }
  // Final pool holds the centers evaluated at the last iteration.
  const auto folds = run_folds(ds, cfg);
  const auto last = report.history.back();
  for (std::size_t c = 0; c < report.final_pool.size(); ++c) {
    const auto ev = evaluate_candidate(ds, report.final_pool[c], folds);
    CHECK(ev.f == last(static_cast<Index>(c), 0));
    CHECK(ev.g == last(static_cast<Index>(c), 1));
  }
}

TEST_CASE("zero-noise optimum stays on the front") {
  SyntheticSpec spec;
  spec.points_per_cluster = 10;
  spec.d = 2;
  spec.spread = 1e-200;
  spec.outcome_noise = 0.0;
  spec.center_lo = 100.0;
  spec.min_center_separation = 1000.0;
  const Dataset ds = gen_synthetic(spec, 12).dataset;
  RunConfig cfg;
  cfg.n_pool = 30;
  cfg.max_clusters = 4;
  cfg.tau_max = 20;
  cfg.folds = 5;
  const auto report = run(ds, cfg);
  bool seen = false;
  for (std::size_t t = 0; t < report.history.size(); ++t) {
    for (Index c = 0; c < report.history[t].rows(); ++c) {
      if (report.history[t](c, 0) != 0.0) continue;
      seen = true;
      for (std::size_t u = t; u < report.history.size(); ++u) {
        const auto& front = report.front_history[u];
        CHECK(std::find(front.begin(), front.end(), c) != front.end());
        CHECK(report.history[u](c, 0) == 0.0);
      }
    }
  }
  CHECK(seen);
}

TEST_CASE("single-objective modes select an argmin") {
  const Dataset ds = small_blobs(7);
  RunConfig cfg = small_config();
  for (auto mode : {ObjectiveMode::f_only, ObjectiveMode::g_only}) {
    cfg.objective = mode;
    const auto report = run(ds, cfg);
    const int col = mode == ObjectiveMode::f_only ? 0 : 1;
    CHECK(report.history.back()(report.selected_candidate, col) == report.history.back().col(col).minCoeff());
    CHECK(report.selection.similarities.size() == 0);
  }
}

TEST_CASE("k_frequency counts final front members") {
  const Dataset ds = small_blobs(8);
  const auto report = run(ds, small_config());
  int total = 0;
  for (int f : report.k_frequency) total += f;
  CHECK(total == report.final_front.size());
  CHECK(report.cluster_sizes.sum() == ds.n());
}
