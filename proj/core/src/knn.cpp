#include "fsgm/knn.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "fsgm/error.hpp"

namespace fsgm {

double euclidean_distance(std::span<const double> a,
                          std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error("euclidean_distance: length mismatch (" +
                std::to_string(a.size()) + " vs " + std::to_string(b.size()) +
                ")");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

Standardizer::Standardizer(std::vector<double> mean, std::vector<double> scale)
    : mean_(std::move(mean)), scale_(std::move(scale)) {
  if (mean_.size() != scale_.size()) {
    throw Error("Standardizer: mean/scale length mismatch");
  }
  for (double s : scale_) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw Error("Standardizer: scales must be positive and finite");
    }
  }
}

Standardizer Standardizer::identity(std::size_t dim) {
  return Standardizer(std::vector<double>(dim, 0.0),
                      std::vector<double>(dim, 1.0));
}

Standardizer Standardizer::fit(const Dataset& dataset) {
  Standardizer s;
  const std::size_t d = dataset.dim();
  s.mean_.assign(d, 0.0);
  s.scale_.assign(d, 1.0);
  if (dataset.empty()) return s;
  const double n = static_cast<double>(dataset.size());
  for (const Sample& row : dataset) {
    for (std::size_t j = 0; j < d; ++j) s.mean_[j] += row.x[j];
  }
  for (double& m : s.mean_) m /= n;
  std::vector<double> var(d, 0.0);
  for (const Sample& row : dataset) {
    for (std::size_t j = 0; j < d; ++j) {
      const double c = row.x[j] - s.mean_[j];
      var[j] += c * c;
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    const double sd = std::sqrt(var[j] / n);
    s.scale_[j] = sd > 1e-12 ? sd : 1.0;
  }
  return s;
}

std::vector<double> Standardizer::apply(std::span<const double> x) const {
  if (x.size() != mean_.size()) throw Error("Standardizer: dimension mismatch");
  std::vector<double> out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    out[j] = (x[j] - mean_[j]) / scale_[j];
  }
  return out;
}

Dataset Standardizer::apply(const Dataset& dataset) const {
  std::vector<Sample> rows;
  rows.reserve(dataset.size());
  for (const Sample& s : dataset) rows.push_back({apply(s.x), s.y, s.z});
  return Dataset(dataset.dim(), std::move(rows));
}

NeighborResult knn_among(const Dataset& dataset, std::span<const double> query,
                         std::span<const std::size_t> candidates,
                         std::size_t k, std::optional<std::size_t> exclude) {
  if (k == 0) throw Error("knn: k must be positive");
  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(candidates.size());
  for (std::size_t idx : candidates) {
    if (exclude && *exclude == idx) continue;
    scored.emplace_back(euclidean_distance(query, dataset[idx].x), idx);
  }
  if (scored.size() < k) {
    throw Error("insufficient target subgroup: " + std::to_string(k) +
                " neighbors requested, " + std::to_string(scored.size()) +
                " available");
  }
  // Lexicographic (distance, index) gives the index tie-break.
  std::partial_sort(scored.begin(), scored.begin() + static_cast<long>(k),
                    scored.end());
  NeighborResult out;
  out.indices.reserve(k);
  out.distances.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    out.distances.push_back(scored[i].first);
    out.indices.push_back(scored[i].second);
  }
  return out;
}

NeighborResult knn_in_subgroup(const Dataset& dataset,
                               std::span<const double> query,
                               SubgroupKey target, std::size_t k,
                               std::optional<std::size_t> exclude) {
  const auto members = subgroup_indices(dataset, target);
  try {
    return knn_among(dataset, query, members, k, exclude);
  } catch (const Error& e) {
    throw Error(std::string(e.what()) + " in target subgroup " +
                to_string(target));
  }
}

}  // namespace fsgm
