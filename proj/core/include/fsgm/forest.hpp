#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fsgm/dataset.hpp"

namespace fsgm {

struct ForestSpec {
  std::size_t n_trees = 100;
  std::size_t max_depth = 8;
  std::size_t min_leaf = 2;
  // 0 selects ceil(sqrt(d)).
  std::size_t features_per_split = 0;
  std::uint64_t seed = 0;

  void check(std::size_t dim) const;
  std::size_t resolved_features_per_split(std::size_t dim) const;
};

// Binary decision tree stored as a flat node array; node 0 is the root.
class DecisionTree {
 public:
  struct Node {
    // Leaves have feature == kLeaf and carry `label`.
    static constexpr int kLeaf = -1;
    int feature = kLeaf;
    double threshold = 0.0;  // x[feature] < threshold goes left
    int left = -1;
    int right = -1;
    int label = 0;
  };

  DecisionTree() = default;
  // Throws if child links are out of range or a node is neither a leaf nor a
  // full split.
  explicit DecisionTree(std::vector<Node> nodes);

  int predict(std::span<const double> x) const;
  std::span<const Node> nodes() const { return nodes_; }
  std::size_t depth() const;

 private:
  std::vector<Node> nodes_;
};

// Bagged Gini trees with majority voting (ties vote 0).
class Forest {
 public:
  Forest() = default;
  Forest(std::size_t dim, std::vector<DecisionTree> trees);

  std::size_t dim() const { return dim_; }
  int predict(std::span<const double> x) const;
  std::span<const DecisionTree> trees() const { return trees_; }

 private:
  std::size_t dim_ = 0;
  std::vector<DecisionTree> trees_;
};

// Each tree draws its own bootstrap of the rows and its own feature subsets
// from a stream derived from (spec.seed, tree index), so the forest does not
// depend on the order in which trees are grown. Only x and y are read.
Forest train_forest(const Dataset& train, const ForestSpec& spec);

// A single Gini tree on exactly the given rows (no bagging); exposed for
// testing the split search.
DecisionTree grow_tree(const Dataset& train,
                       std::span<const std::size_t> rows,
                       const ForestSpec& spec, std::uint64_t seed);

}  // namespace fsgm
