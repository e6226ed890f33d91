#include "mosc/assignment.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace mosc;

TEST_CASE("allocation_distance on a small example") {
  const Matrix<double> z{{0, 0}, {1, 0}, {5, 5}};
  const Matrix<double> x{{0, 0}, {5, 5}};
  const auto a = allocation_distance(z, x);
  CHECK(a.distances == Matrix<double>{{0, 10}, {1, 9}, {10, 0}});
  CHECK(a.indicator == Matrix<double>{{1, 0}, {1, 0}, {0, 1}});
  CHECK(a.labels == Labels{{0, 0, 1}});
  CHECK(a.counts == Eigen::VectorXi{{2, 1}});
  CHECK(clustering_cost(a) == 1.0);
  CHECK(clustering_cost(a, CostKind::mean) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("clustering_cost examples") {
  CHECK(clustering_cost(allocation_distance(Matrix<double>{{0, 0}, {2, 0}}, Matrix<double>{{1, 0}, {9, 9}})) == 2.0);
  CHECK(clustering_cost(allocation_distance(Matrix<double>{{1, 1}, {4, 4}}, Matrix<double>{{1, 1}, {4, 4}})) == 0.0);
}

TEST_CASE("ties go to the lowest center index") {
  const auto a = allocation_distance(Matrix<double>{{1, 0}}, Matrix<double>{{0, 0}, {2, 0}});
  CHECK(a.distances(0, 0) == a.distances(0, 1));
  CHECK(a.labels(0) == 0);
  const auto b = allocation_distance(Matrix<double>{{5, 0}}, Matrix<double>{{0, 0}, {10, 0}, {5, 5}, {5, -5}});
  CHECK(b.labels(0) == 0);
}

TEST_CASE("duplicate centers leave the later copy empty") {
  const Matrix<double> z{{1, 1}, {2, 2}, {9, 9}};
  const auto a = allocation_distance(z, Matrix<double>{{3, 3}, {3, 3}});
  CHECK(a.counts == Eigen::VectorXi{{3, 0}});
  CHECK(a.nonempty_clusters() == 1);
  const auto b = allocation_distance(z, Matrix<double>{{1, 1}, {1, 1}, {9, 9}});
  CHECK(b.counts == Eigen::VectorXi{{2, 0, 1}});
}

TEST_CASE("column mismatch is a dimension error") {
  const Matrix<double> z = Matrix<double>::Zero(3, 2);
  const Matrix<double> x = Matrix<double>::Zero(2, 3);
  CHECK_THROWS_AS(allocation_distance(z, x), DimensionError);
}

TEST_CASE("matches a brute-force scan on random instances") {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> small(1, 6);
  std::uniform_int_distribution<int> grid(-3, 3);
  for (int rep = 0; rep < 200; ++rep) {
    const Index n = small(rng) * 5, d = small(rng), k = small(rng) + 1;
    Matrix<double> z(n, d), x(k, d);
    // Integer grid so ties actually happen.
    for (Index i = 0; i < z.size(); ++i) z.data()[i] = grid(rng);
    for (Index i = 0; i < x.size(); ++i) x.data()[i] = grid(rng);
    const auto a = allocation_distance(z, x);
    const auto ref = oracle::brute_force_nearest(z, x);
    for (Index i = 0; i < n; ++i) {
      REQUIRE(a.labels(i) == ref.labels[static_cast<std::size_t>(i)]);
      for (Index j = 0; j < k; ++j)
        REQUIRE(a.distances(i, j) == ref.distances[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    }
  }
}

TEST_CASE("adding a center never increases the cost") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> unit;
  for (int rep = 0; rep < 100; ++rep) {
    Matrix<double> z(30, 3), x(4, 3);
    for (Index i = 0; i < z.size(); ++i) z.data()[i] = unit(rng);
    for (Index i = 0; i < x.size(); ++i) x.data()[i] = unit(rng);
    Matrix<double> bigger(5, 3);
    bigger.topRows(4) = x;
    bigger.row(4) = z.row(rep % 30);
    CHECK(clustering_cost(allocation_distance(z, bigger)) <= clustering_cost(allocation_distance(z, x)));
  }
}

TEST_CASE("float scalar path agrees with double") {
  const Matrix<float> z{{0.5f, 1.5f}, {3.0f, 3.0f}};
  const Matrix<float> x{{0.0f, 0.0f}, {3.0f, 2.0f}};
  const auto a = allocation_distance(z, x);
  CHECK(a.labels == Labels{{0, 1}});
  CHECK(clustering_cost(a) == doctest::Approx(3.0f));
}

TEST_CASE("candidate validation") {
  CandidateSet cs;
  cs.centers = Matrix<double>::Zero(1, 2);
  CHECK_THROWS_AS(cs.validate(), DomainError);
  cs.centers = Matrix<double>::Zero(2, 2);
  CHECK_NOTHROW(cs.validate());
  cs.centers(1, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(cs.validate(), DomainError);
}
