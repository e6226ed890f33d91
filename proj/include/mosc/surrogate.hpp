#pragma once

#include "mosc/types.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace mosc {

struct CartParams {
  int max_depth = 5;
  int min_samples_split = 20;
  double min_impurity_decrease = 1e-4;

  void validate() const;
};

// Internal nodes route `x[feature] <= threshold` to left, everything else to right.
struct TreeNode {
  bool leaf = true;
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  int label = 0;
  std::map<int, Index> class_counts;
  double impurity = 0.0;
  Index samples = 0;
  int depth = 0;
};

struct DecisionTree {
  // nodes[0] is the root; children always follow their parent.
  std::vector<TreeNode> nodes;
  Index n_features = 0;

  int depth() const;
  Index leaves() const;
  Index splits() const { return static_cast<Index>(nodes.size()) - leaves(); }
};

// Gini impurity 1 - sum p_c^2 of a set of class counts.
double gini(const std::map<int, Index>& counts);

// Greedy CART with Gini impurity. Thresholds are midpoints between consecutive
// distinct sorted values.
DecisionTree cart_fit(const Matrix<double>& features, const Labels& labels, const CartParams& params = {});

int cart_predict_row(const DecisionTree& tree, const Eigen::Ref<const Vector<double>>& row);
Labels cart_predict(const DecisionTree& tree, const Matrix<double>& features);

double misclassification_rate(const Labels& truth, const Labels& predicted);

struct SurrogateEvaluation {
  DecisionTree tree;
  double test_error = 0.0;
  double train_error = 0.0;
  Index n_train = 0;
  Index n_test = 0;
};

// Seeded 50/50 split: fit on one half, misclassification rate on the other.
SurrogateEvaluation evaluate_surrogate(const Matrix<double>& features, const Labels& labels, std::uint64_t split_seed,
                                       const CartParams& params = {});

// Nested "if <feature> <= t then ... else ..." rule text.
std::string tree_to_rules(const DecisionTree& tree, const std::vector<std::string>& feature_names);

}  // namespace mosc
