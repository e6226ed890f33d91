#include "mosc/surrogate.hpp"

#include "mosc/io.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

namespace mosc {

void CartParams::validate() const {
  if (max_depth < 0) throw DomainError("max_depth must be >= 0");
  if (min_samples_split < 2) throw DomainError("min_samples_split must be >= 2");
  if (!(min_impurity_decrease >= 0.0)) throw DomainError("min_impurity_decrease must be >= 0");
}

int DecisionTree::depth() const {
  int d = 0;
  for (const auto& node : nodes) d = std::max(d, node.depth);
  return d;
}

Index DecisionTree::leaves() const {
  return std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& node) { return node.leaf; });
}

double gini(const std::map<int, Index>& counts) {
  Index total = 0;
  for (const auto& [label, c] : counts) total += c;
  if (total == 0) return 0.0;
  double sum_sq = 0.0;
  for (const auto& [label, c] : counts) {
    const double p = static_cast<double>(c) / static_cast<double>(total);
    sum_sq += p * p;
  }
  return 1.0 - sum_sq;
}

namespace {

double gini_dense(const std::vector<Index>& counts, Index total) {
  if (total == 0) return 0.0;
  double sum_sq = 0.0;
  for (Index c : counts) {
    const double p = static_cast<double>(c) / static_cast<double>(total);
    sum_sq += p * p;
  }
  return 1.0 - sum_sq;
}

struct Split {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double decrease = 0.0;
};

class Builder {
 public:
  Builder(const Matrix<double>& x, const Labels& y, const CartParams& params)
      : x_(x), params_(params) {
    for (Index i = 0; i < y.size(); ++i) classes_.push_back(y(i));
    std::sort(classes_.begin(), classes_.end());
    classes_.erase(std::unique(classes_.begin(), classes_.end()), classes_.end());
    dense_.resize(static_cast<std::size_t>(y.size()));
    for (Index i = 0; i < y.size(); ++i)
      dense_[static_cast<std::size_t>(i)] =
          static_cast<int>(std::lower_bound(classes_.begin(), classes_.end(), y(i)) - classes_.begin());
  }

  DecisionTree build() {
    std::vector<Index> rows(dense_.size());
    std::iota(rows.begin(), rows.end(), Index{0});
    tree_.n_features = x_.cols();
    grow(rows, 0);
    return std::move(tree_);
  }

 private:
  int grow(std::vector<Index>& rows, int depth) {
    const int id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    std::vector<Index> counts(classes_.size(), 0);
    for (Index r : rows) ++counts[static_cast<std::size_t>(dense_[static_cast<std::size_t>(r)])];

    TreeNode node;
    node.depth = depth;
    node.samples = static_cast<Index>(rows.size());
    node.impurity = gini_dense(counts, node.samples);
    std::size_t majority = 0;
    for (std::size_t c = 0; c < counts.size(); ++c) {
      if (counts[c] > 0) node.class_counts[classes_[c]] = counts[c];
      if (counts[c] > counts[majority]) majority = c;
    }
    node.label = classes_[majority];

    const bool can_split = node.impurity > 0.0 && depth < params_.max_depth &&
                           node.samples >= static_cast<Index>(params_.min_samples_split);
    Split best;
    if (can_split) best = best_split(rows, counts, node.impurity);
    if (best.found && best.decrease > 0.0 && best.decrease >= params_.min_impurity_decrease) {
      std::vector<Index> left;
      std::vector<Index> right;
      for (Index r : rows) (x_(r, best.feature) <= best.threshold ? left : right).push_back(r);
      node.leaf = false;
      node.feature = best.feature;
      node.threshold = best.threshold;
      rows.clear();
      rows.shrink_to_fit();
      tree_.nodes[static_cast<std::size_t>(id)] = node;
      const int l = grow(left, depth + 1);
      const int r = grow(right, depth + 1);
      tree_.nodes[static_cast<std::size_t>(id)].left = l;
      tree_.nodes[static_cast<std::size_t>(id)].right = r;
      return id;
    }
    tree_.nodes[static_cast<std::size_t>(id)] = node;
    return id;
  }

  Split best_split(const std::vector<Index>& rows, const std::vector<Index>& counts, double parent) const {
    Split best;
    const Index n = static_cast<Index>(rows.size());
    std::vector<Index> order(rows);
    std::vector<Index> left(counts.size());
    std::vector<Index> right(counts.size());
    for (Index f = 0; f < x_.cols(); ++f) {
      std::sort(order.begin(), order.end(), [&](Index a, Index b) {
        const double va = x_(a, f), vb = x_(b, f);
        return va < vb || (va == vb && a < b);
      });
      std::fill(left.begin(), left.end(), 0);
      right = counts;
      for (Index pos = 0; pos + 1 < n; ++pos) {
        const auto c = static_cast<std::size_t>(dense_[static_cast<std::size_t>(order[static_cast<std::size_t>(pos)])]);
        ++left[c];
        --right[c];
        const double lo = x_(order[static_cast<std::size_t>(pos)], f);
        const double hi = x_(order[static_cast<std::size_t>(pos + 1)], f);
        if (!(lo < hi)) continue;
        const Index nl = pos + 1;
        const Index nr = n - nl;
        const double child = (static_cast<double>(nl) * gini_dense(left, nl) +
                              static_cast<double>(nr) * gini_dense(right, nr)) /
                             static_cast<double>(n);
        const double decrease = parent - child;
        if (!best.found || decrease > best.decrease) {
          double t = lo + (hi - lo) / 2.0;
          if (!(t < hi)) t = lo;
          best = {true, static_cast<int>(f), t, decrease};
        }
      }
    }
    return best;
  }

  const Matrix<double>& x_;
  CartParams params_;
  std::vector<int> classes_;
  std::vector<int> dense_;
  DecisionTree tree_;
};

}  // namespace

DecisionTree cart_fit(const Matrix<double>& features, const Labels& labels, const CartParams& params) {
  params.validate();
  if (features.rows() == 0 || labels.size() == 0) throw DomainError("cannot fit a tree on empty input");
  if (features.rows() != labels.size()) throw DimensionError("features and labels disagree on row count");
  if (features.cols() < 1) throw DomainError("need at least one feature");
  return Builder(features, labels, params).build();
}

int cart_predict_row(const DecisionTree& tree, const Eigen::Ref<const Vector<double>>& row) {
  if (row.size() != tree.n_features)
    throw DimensionError("row has " + std::to_string(row.size()) + " features, tree expects " +
                         std::to_string(tree.n_features));
  std::size_t id = 0;
  while (!tree.nodes[id].leaf) {
    const auto& node = tree.nodes[id];
    id = static_cast<std::size_t>(row(node.feature) <= node.threshold ? node.left : node.right);
  }
  return tree.nodes[id].label;
}

Labels cart_predict(const DecisionTree& tree, const Matrix<double>& features) {
  if (tree.nodes.empty()) throw DomainError("empty tree");
  if (features.cols() != tree.n_features)
    throw DimensionError("input has " + std::to_string(features.cols()) + " features, tree expects " +
                         std::to_string(tree.n_features));
  Labels out(features.rows());
  for (Index i = 0; i < features.rows(); ++i) out(i) = cart_predict_row(tree, features.row(i).transpose());
  return out;
}

double misclassification_rate(const Labels& truth, const Labels& predicted) {
  if (truth.size() != predicted.size()) throw DimensionError("label vectors differ in length");
  if (truth.size() == 0) return 0.0;
  return static_cast<double>((truth.array() != predicted.array()).count()) / static_cast<double>(truth.size());
}

SurrogateEvaluation evaluate_surrogate(const Matrix<double>& features, const Labels& labels, std::uint64_t split_seed,
                                       const CartParams& params) {
  const Index n = features.rows();
  if (n < 4) throw DomainError("surrogate evaluation needs at least 4 rows");
  if (labels.size() != n) throw DimensionError("features and labels disagree on row count");

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::mt19937_64 rng(split_seed);
  std::shuffle(order.begin(), order.end(), rng);
  const Index n_train = n / 2;

  SurrogateEvaluation ev;
  ev.n_train = n_train;
  ev.n_test = n - n_train;
  Matrix<double> x_train(n_train, features.cols());
  Labels y_train(n_train);
  Matrix<double> x_test(ev.n_test, features.cols());
  Labels y_test(ev.n_test);
  for (Index p = 0; p < n; ++p) {
    const Index row = order[static_cast<std::size_t>(p)];
    if (p < n_train) {
      x_train.row(p) = features.row(row);
      y_train(p) = labels(row);
    } else {
      x_test.row(p - n_train) = features.row(row);
      y_test(p - n_train) = labels(row);
    }
  }
  ev.tree = cart_fit(x_train, y_train, params);
  ev.train_error = misclassification_rate(y_train, cart_predict(ev.tree, x_train));
  ev.test_error = misclassification_rate(y_test, cart_predict(ev.tree, x_test));
  return ev;
}

namespace {

void write_rules(const DecisionTree& tree, const std::vector<std::string>& names, std::size_t id, int indent,
                 std::ostringstream& out) {
  const auto& node = tree.nodes[id];
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  if (node.leaf) {
    out << pad << "cluster " << node.label << "  (n=" << node.samples << ")\n";
    return;
  }
  const std::string name = static_cast<std::size_t>(node.feature) < names.size()
                               ? names[static_cast<std::size_t>(node.feature)]
                               : "x" + std::to_string(node.feature);
  out << pad << "if " << name << " <= " << format_double(node.threshold) << " then\n";
  write_rules(tree, names, static_cast<std::size_t>(node.left), indent + 1, out);
  out << pad << "else\n";
  write_rules(tree, names, static_cast<std::size_t>(node.right), indent + 1, out);
}

}  // namespace

std::string tree_to_rules(const DecisionTree& tree, const std::vector<std::string>& feature_names) {
  std::ostringstream out;
  if (!tree.nodes.empty()) write_rules(tree, feature_names, 0, 0, out);
  return out.str();
}

}  // namespace mosc
