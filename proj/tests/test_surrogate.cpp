#include "mosc/surrogate.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace mosc;

TEST_CASE("gini of a balanced two-class node") {
  CHECK(gini({{0, 2}, {1, 2}}) == doctest::Approx(0.5));
  CHECK(gini({{3, 7}}) == 0.0);
  CHECK(gini({}) == 0.0);
}

TEST_CASE("one-dimensional split at the midpoint") {
  const Matrix<double> x{{1}, {2}, {8}, {9}};
  const Labels y{{0, 0, 1, 1}};
  CartParams params;
  params.min_samples_split = 2;
  const auto tree = cart_fit(x, y, params);
  REQUIRE(tree.splits() == 1);
  CHECK(tree.nodes[0].feature == 0);
  CHECK(tree.nodes[0].threshold == 5.0);
  CHECK(misclassification_rate(y, cart_predict(tree, x)) == 0.0);
  CHECK(cart_predict(tree, Matrix<double>{{0}, {10}}) == Labels{{0, 1}});
  // Exactly on the threshold routes left.
  CHECK(cart_predict(tree, Matrix<double>{{5.0}}) == Labels{{0}});
  CHECK(cart_predict(tree, Matrix<double>{{std::nextafter(5.0, 6.0)}}) == Labels{{1}});

  const auto ref = oracle::exhaustive_best_split(x, {0, 0, 1, 1});
  CHECK(ref.feature == 0);
  CHECK(ref.threshold == 5.0);
}

TEST_CASE("pure input is a single leaf") {
  const auto tree = cart_fit(Matrix<double>{{1}, {2}, {3}}, Labels{{4, 4, 4}});
  CHECK(tree.nodes.size() == 1);
  CHECK(tree.nodes[0].leaf);
  CHECK(cart_predict(tree, Matrix<double>{{-100}, {100}}) == Labels{{4, 4}});
}

TEST_CASE("majority ties go to the lowest label") {
  CartParams params;
  params.max_depth = 0;
  const auto tree = cart_fit(Matrix<double>{{1}, {2}, {3}, {4}}, Labels{{5, 2, 5, 2}}, params);
  CHECK(tree.nodes[0].label == 2);
}

TEST_CASE("root split matches the exhaustive oracle on random data") {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> grid(0, 9);
  std::uniform_int_distribution<int> lab(0, 2);
  for (int rep = 0; rep < 100; ++rep) {
    const Index n = 20 + rep % 30;
    Matrix<double> x(n, 3);
    Labels y(n);
    std::vector<int> yv;
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < 3; ++j) x(i, j) = grid(rng);
      y(i) = lab(rng);
      yv.push_back(y(i));
    }
    CartParams params;
    params.max_depth = 1;
    params.min_samples_split = 2;
    params.min_impurity_decrease = 0.0;
    const auto tree = cart_fit(x, y, params);
    const auto ref = oracle::exhaustive_best_split(x, yv);
    if (ref.feature < 0 || tree.nodes[0].leaf) continue;
    // Compare by achieved impurity; equal-impurity splits may be chosen differently.
    std::map<int, int> left, right;
    for (Index i = 0; i < n; ++i)
      (x(i, tree.nodes[0].feature) <= tree.nodes[0].threshold ? left : right)[y(i)]++;
    int nl = 0, nr = 0;
    for (auto& [k, c] : left) nl += c;
    for (auto& [k, c] : right) nr += c;
    const double imp = (nl * oracle::gini_counts(left) + nr * oracle::gini_counts(right)) / n;
    REQUIRE(imp == doctest::Approx(ref.child_impurity).epsilon(1e-12));
  }
}

TEST_CASE("depth limit and growth stop") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> unit;
  Matrix<double> x(300, 2);
  Labels y(300);
  for (Index i = 0; i < 300; ++i) {
    x(i, 0) = unit(rng);
    x(i, 1) = unit(rng);
    y(i) = static_cast<int>(i % 3);
  }
  int prev_leaves = 0;
  for (int depth = 0; depth <= 5; ++depth) {
    CartParams params;
    params.max_depth = depth;
    const auto tree = cart_fit(x, y, params);
    CHECK(tree.depth() <= depth);
    CHECK(tree.leaves() >= prev_leaves);
    prev_leaves = static_cast<int>(tree.leaves());
    for (const auto& node : tree.nodes)
      if (!node.leaf) CHECK(node.samples >= params.min_samples_split);
  }
}

TEST_CASE("separable clusters are reproduced; shuffled labels are at chance") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> unit;
  const Index n = 1000;
  Matrix<double> x(n, 4);
  Labels y(n);
  for (Index i = 0; i < n; ++i) {
    y(i) = static_cast<int>(i % 3);
    for (Index j = 0; j < 4; ++j) x(i, j) = 1000.0 * y(i) * (j == 0 ? 1.0 : 0.3) + 50.0 * unit(rng);
  }
  const auto good = evaluate_surrogate(x, y, 5);
  CHECK(good.test_error <= 0.05);
  CHECK(good.n_train == 500);
  CHECK(good.n_test == 500);

  Labels shuffled = y;
  std::shuffle(shuffled.data(), shuffled.data() + n, rng);
  const auto chance = evaluate_surrogate(x, shuffled, 5);
  CHECK(std::abs(chance.test_error - 2.0 / 3.0) <= 0.15);

  CHECK(evaluate_surrogate(x, y, 5).test_error == good.test_error);
}

TEST_CASE("rule text") {
  const Matrix<double> x{{1}, {2}, {8}, {9}};
  CartParams params;
  params.min_samples_split = 2;
  const auto tree = cart_fit(x, Labels{{0, 0, 1, 1}}, params);
  CHECK(tree_to_rules(tree, {"visits"}) ==
        "if visits <= 5 then\n"
        "  cluster 0  (n=2)\n"
        "else\n"
        "  cluster 1  (n=2)\n");
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(cart_fit(Matrix<double>{{1}, {2}}, Labels{{0}}), DimensionError);
  const auto tree = cart_fit(Matrix<double>{{1, 2}, {3, 4}}, Labels{{0, 1}});
  CHECK_THROWS_AS(cart_predict(tree, Matrix<double>{{1}}), DimensionError);
  CartParams bad;
  bad.min_samples_split = 1;
  CHECK_THROWS_AS(cart_fit(Matrix<double>{{1}, {2}}, Labels{{0, 1}}, bad), DomainError);
}
