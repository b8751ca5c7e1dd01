#include "fsgm/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "fsgm/error.hpp"
#include "fsgm/random.hpp"

namespace fsgm {

void ForestSpec::check(std::size_t dim) const {
  if (n_trees == 0 || max_depth == 0 || min_leaf == 0) {
    throw Error("forest spec: n_trees, max_depth and min_leaf must be positive");
  }
  if (features_per_split > dim) {
    throw Error("forest spec: features_per_split " +
                std::to_string(features_per_split) + " exceeds dim " +
                std::to_string(dim));
  }
}

std::size_t ForestSpec::resolved_features_per_split(std::size_t dim) const {
  if (features_per_split != 0) return features_per_split;
  const auto m = static_cast<std::size_t>(
      std::ceil(std::sqrt(static_cast<double>(dim))));
  return std::clamp<std::size_t>(m, 1, std::max<std::size_t>(dim, 1));
}

DecisionTree::DecisionTree(std::vector<Node> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw Error("decision tree: no nodes");
  const int n = static_cast<int>(nodes_.size());
  for (const Node& node : nodes_) {
    if (node.feature == Node::kLeaf) continue;
    if (node.feature < 0 || node.left <= 0 || node.right <= 0 ||
        node.left >= n || node.right >= n) {
      throw Error("decision tree: malformed split node");
    }
  }
}

int DecisionTree::predict(std::span<const double> x) const {
  std::size_t at = 0;
  for (;;) {
    const Node& node = nodes_[at];
    if (node.feature == Node::kLeaf) return node.label;
    const auto f = static_cast<std::size_t>(node.feature);
    if (f >= x.size()) throw Error("decision tree: feature index out of range");
    at = static_cast<std::size_t>(x[f] < node.threshold ? node.left
                                                        : node.right);
  }
}

std::size_t DecisionTree::depth() const {
  // Children always follow their parent in the array.
  std::vector<std::size_t> level(nodes_.size(), 0);
  std::size_t deepest = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& node = nodes_[i];
    if (node.feature == Node::kLeaf) {
      deepest = std::max(deepest, level[i]);
      continue;
    }
    level[static_cast<std::size_t>(node.left)] = level[i] + 1;
    level[static_cast<std::size_t>(node.right)] = level[i] + 1;
  }
  return deepest;
}

Forest::Forest(std::size_t dim, std::vector<DecisionTree> trees)
    : dim_(dim), trees_(std::move(trees)) {}

int Forest::predict(std::span<const double> x) const {
  if (x.size() != dim_) {
    throw Error("forest: expected " + std::to_string(dim_) +
                " features, got " + std::to_string(x.size()));
  }
  std::size_t ones = 0;
  for (const DecisionTree& tree : trees_) ones += tree.predict(x) == 1;
  return 2 * ones > trees_.size() ? 1 : 0;
}

namespace {

struct Split {
  int feature = DecisionTree::Node::kLeaf;
  double threshold = 0.0;
  double score = -1.0;  // larger is purer
};

class TreeGrower {
 public:
  TreeGrower(const Dataset& data, const ForestSpec& spec, std::uint64_t seed)
      : data_(data),
        spec_(spec),
        features_per_split_(spec.resolved_features_per_split(data.dim())),
        stream_(seed) {}

  DecisionTree grow(std::vector<std::size_t> rows) {
    nodes_.clear();
    build(rows, 0);
    return DecisionTree(std::move(nodes_));
  }

 private:
  int build(std::vector<std::size_t>& rows, std::size_t depth) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    std::size_t ones = 0;
    for (std::size_t r : rows) ones += data_[r].y == 1;
    const std::size_t n = rows.size();
    nodes_[id].label = 2 * ones > n ? 1 : 0;

    if (depth >= spec_.max_depth || ones == 0 || ones == n ||
        n < 2 * spec_.min_leaf) {
      return id;
    }
    const Split best = find_split(rows, ones);
    if (best.feature == DecisionTree::Node::kLeaf) return id;

    std::vector<std::size_t> left, right;
    for (std::size_t r : rows) {
      (data_[r].x[best.feature] < best.threshold ? left : right).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    const int l = build(left, depth + 1);
    const int r = build(right, depth + 1);
    nodes_[id].feature = best.feature;
    nodes_[id].threshold = best.threshold;
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
  }

  // Visits features in random order until features_per_split of them have
  // offered at least one admissible threshold.
  Split find_split(const std::vector<std::size_t>& rows, std::size_t ones) {
    const std::size_t d = data_.dim();
    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), 0);
    Split best;
    std::size_t evaluated = 0;
    for (std::size_t i = 0; i < d && evaluated < features_per_split_; ++i) {
      const std::size_t j = i + stream_.below(d - i);
      std::swap(order[i], order[j]);
      if (scan_feature(rows, ones, order[i], best)) ++evaluated;
    }
    return best;
  }

  bool scan_feature(const std::vector<std::size_t>& rows, std::size_t ones,
                    std::size_t feature, Split& best) {
    column_.clear();
    for (std::size_t r : rows) {
      column_.emplace_back(data_[r].x[feature], data_[r].y);
    }
    std::sort(column_.begin(), column_.end());
    const std::size_t n = column_.size();
    const double total1 = static_cast<double>(ones);
    const double total0 = static_cast<double>(n - ones);
    double left1 = 0.0;
    bool admissible = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      left1 += column_[i].second;
      const std::size_t nl = i + 1;
      const std::size_t nr = n - nl;
      if (nl < spec_.min_leaf) continue;
      if (nr < spec_.min_leaf) break;
      if (!(column_[i].first < column_[i + 1].first)) continue;
      admissible = true;
      const double left0 = static_cast<double>(nl) - left1;
      const double right1 = total1 - left1;
      const double right0 = total0 - left0;
      // Minimizing weighted Gini == maximizing sum of (count^2 / size).
      const double score =
          (left0 * left0 + left1 * left1) / static_cast<double>(nl) +
          (right0 * right0 + right1 * right1) / static_cast<double>(nr);
      if (score > best.score) {
        best.score = score;
        best.feature = static_cast<int>(feature);
        best.threshold = 0.5 * (column_[i].first + column_[i + 1].first);
        // Guard against the midpoint rounding onto the upper value.
        if (!(best.threshold > column_[i].first)) {
          best.threshold = column_[i + 1].first;
        }
      }
    }
    return admissible;
  }

  const Dataset& data_;
  const ForestSpec& spec_;
  std::size_t features_per_split_;
  RngStream stream_;
  std::vector<DecisionTree::Node> nodes_;
  std::vector<std::pair<double, int>> column_;
};

}  // namespace

DecisionTree grow_tree(const Dataset& train, std::span<const std::size_t> rows,
                       const ForestSpec& spec, std::uint64_t seed) {
  spec.check(train.dim());
  if (rows.empty()) throw Error("grow_tree: no rows");
  TreeGrower grower(train, spec, seed);
  return grower.grow(std::vector<std::size_t>(rows.begin(), rows.end()));
}

Forest train_forest(const Dataset& train, const ForestSpec& spec) {
  if (train.empty()) throw Error("train_forest: empty training set");
  spec.check(train.dim());
  const std::size_t n = train.size();
  std::vector<DecisionTree> trees;
  trees.reserve(spec.n_trees);
  std::vector<std::size_t> rows(n);
  for (std::size_t t = 0; t < spec.n_trees; ++t) {
    RngStream stream(derive_seed(spec.seed, t));
    for (std::size_t& r : rows) r = stream.below(n);
    TreeGrower grower(train, spec, stream.next_u64());
    trees.push_back(grower.grow(rows));
  }
  return Forest(train.dim(), std::move(trees));
}

}  // namespace fsgm
