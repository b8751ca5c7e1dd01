#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fsgm/dataset.hpp"

namespace fsgm {

struct NeighborResult {
  std::vector<std::size_t> indices;
  std::vector<double> distances;  // ascending, matches indices
};

double euclidean_distance(std::span<const double> a, std::span<const double> b);

// Per-feature z-score transform fitted on a dataset. Zero-variance features
// are centered but left unscaled.
class Standardizer {
 public:
  Standardizer() = default;
  Standardizer(std::vector<double> mean, std::vector<double> scale);
  static Standardizer fit(const Dataset& dataset);
  static Standardizer identity(std::size_t dim);

  std::size_t dim() const { return mean_.size(); }
  std::vector<double> apply(std::span<const double> x) const;
  Dataset apply(const Dataset& dataset) const;

  std::span<const double> mean() const { return mean_; }
  std::span<const double> scale() const { return scale_; }

 private:
  std::vector<double> mean_;
  std::vector<double> scale_;
};

// Exact k nearest members of the `target` subgroup, by brute-force scan.
// Ties are broken by ascending dataset index. `exclude` removes one index from
// consideration (the query's own row, when it lies in the target).
//
// Throws "insufficient target subgroup" when fewer than k candidates remain.
NeighborResult knn_in_subgroup(const Dataset& dataset,
                               std::span<const double> query,
                               SubgroupKey target, std::size_t k,
                               std::optional<std::size_t> exclude = {});

// Same search over a precomputed candidate list (the target's indices).
NeighborResult knn_among(const Dataset& dataset, std::span<const double> query,
                         std::span<const std::size_t> candidates,
                         std::size_t k,
                         std::optional<std::size_t> exclude = {});

}  // namespace fsgm
