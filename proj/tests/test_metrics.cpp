#include "mosc/metrics.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace mosc;

TEST_CASE("silhouette on the 1-D example") {
  const Matrix<double> x{{0}, {1}, {10}, {11}};
  const Labels labels{{0, 0, 1, 1}};
  const double asw = silhouette(x, labels);
  CHECK(asw == doctest::Approx(0.899749373433584).epsilon(1e-12));
  CHECK(asw == doctest::Approx(oracle::silhouette_naive(x, {0, 0, 1, 1}, true)).epsilon(1e-14));
  // Point 0: a = 1, b = 10.5; point 1: a = 1, b = 9.5.
  CHECK((10.5 - 1.0) / 10.5 == doctest::Approx(0.9047619047619048));
  CHECK((9.5 - 1.0) / 9.5 == doctest::Approx(0.8947368421052632));
}

TEST_CASE("silhouette edge conventions") {
  SUBCASE("mutually equidistant points give zero") {
    // Vertices of a regular simplex: every pairwise L2 distance is sqrt(2).
    const Matrix<double> x = Matrix<double>::Identity(4, 4);
    CHECK(silhouette(x, Labels{{0, 0, 1, 1}}, DistanceMetric::L2) == doctest::Approx(0.0));
  }
  SUBCASE("singleton contributes zero") {
    const Matrix<double> x{{0}, {1}, {50}};
    // Points 0 and 1: a = 1, b = 50 and 49.
    const double expected = ((49.0 / 50.0) + (48.0 / 49.0)) / 3.0;
    CHECK(silhouette(x, Labels{{4, 4, 9}}) == doctest::Approx(expected).epsilon(1e-12));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(silhouette(Matrix<double>{{0}, {1}, {2}}, Labels{{1, 1, 1}}), DomainError);
    CHECK_THROWS_AS(silhouette(Matrix<double>{{0}, {1}}, Labels{{0, 1}}), DomainError);
  }
}

TEST_CASE("silhouette on random labelings: bounds, oracle agreement, relabel invariance") {
  std::mt19937_64 rng(404);
  std::normal_distribution<double> unit;
  for (int rep = 0; rep < 150; ++rep) {
    const Index n = 5 + rep % 20;
    const int k = 2 + rep % 4;
    Matrix<double> x(n, 3);
    for (Index i = 0; i < x.size(); ++i) x.data()[i] = unit(rng);
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = static_cast<int>(i % k);
    std::shuffle(labels.begin(), labels.end(), rng);
    Labels lab(n), shifted(n);
    for (Index i = 0; i < n; ++i) {
      lab(i) = labels[static_cast<std::size_t>(i)];
      shifted(i) = 7 - 3 * lab(i);
    }
    const bool l1 = rep % 2 == 0;
    const auto metric = l1 ? DistanceMetric::L1 : DistanceMetric::L2;
    const double s = silhouette(x, lab, metric);
    REQUIRE(s >= -1.0);
    REQUIRE(s <= 1.0);
    REQUIRE(s == doctest::Approx(oracle::silhouette_naive(x, labels, l1)).epsilon(1e-12));
    REQUIRE(silhouette(x, shifted, metric) == doctest::Approx(s).epsilon(1e-12));
  }
}

TEST_CASE("compare runs all three modes from one initial pool") {
  SyntheticSpec spec;
  spec.points_per_cluster = 25;
  spec.d = 2;
  spec.min_center_separation = 1000.0;
  const Dataset ds = transform_outcome(gen_synthetic(spec, 2).dataset, OutcomeTransform::log1p);
  RunConfig cfg;
  cfg.n_pool = 10;
  cfg.max_clusters = 5;
  cfg.tau_max = 10;
  cfg.folds = 5;
  std::vector<RunReport> reports;
  const auto table = compare(ds, cfg, DistanceMetric::L1, &reports);
  REQUIRE(reports.size() == 3);
  CHECK(table.models[0].mode == ObjectiveMode::multi);
  CHECK(table.models[1].mode == ObjectiveMode::f_only);
  CHECK(table.models[2].mode == ObjectiveMode::g_only);
  for (const auto& m : table.models) {
    CHECK(m.initial_pool_fingerprint == table.models[0].initial_pool_fingerprint);
    CHECK(m.optimal_cv >= 0.0);
    CHECK(m.pool_mean_cv >= 0.0);
    CHECK(m.pool_sd_cv >= 0.0);
    if (std::isfinite(m.optimal_asw)) {
      CHECK(m.optimal_asw >= -1.0);
      CHECK(m.optimal_asw <= 1.0);
    }
  }
  for (std::size_t c = 0; c < reports[0].initial_pool.size(); ++c) {
    CHECK(reports[1].initial_pool[c].centers == reports[0].initial_pool[c].centers);
    CHECK(reports[2].initial_pool[c].centers == reports[0].initial_pool[c].centers);
  }
  CHECK(table.models[0].optimal_cv == doctest::Approx(reports[0].selected_g));
  CHECK(table.models[1].optimal_cv == doctest::Approx(reports[1].selected_g));
}

TEST_CASE("zero-noise blobs give a near-perfect silhouette for the multi selection") {
  SyntheticSpec spec;
  spec.points_per_cluster = 20;
  spec.d = 2;
  spec.spread = 1e-200;
  spec.outcome_noise = 0.0;
  spec.center_lo = 100.0;
  spec.min_center_separation = 1000.0;
  const auto data = gen_synthetic(spec, 9);
  const Dataset ds = transform_outcome(data.dataset, OutcomeTransform::log1p);
  CHECK(silhouette(ds, data.labels) > 0.9);
  RunConfig cfg;
  cfg.n_pool = 20;
  cfg.max_clusters = 4;
  cfg.tau_max = 20;
  cfg.folds = 5;
  const auto table = compare(ds, cfg);
  CHECK(table.models[0].optimal_asw > 0.9);
}
