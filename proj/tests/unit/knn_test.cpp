#include <cmath>

#include <gtest/gtest.h>

#include "fsgm/error.hpp"
#include "fsgm/knn.hpp"
#include "fsgm/random.hpp"
#include "oracles.hpp"

namespace fsgm {
namespace {

using oracle::make_dataset;

TEST(EuclideanDistance, Examples) {
  const std::vector<double> a = {0, 0}, b = {3, 4};
  EXPECT_DOUBLE_EQ(euclidean_distance(a, a), 0.0);
  EXPECT_DOUBLE_EQ(euclidean_distance(a, b), 5.0);
  EXPECT_THROW(euclidean_distance(a, std::vector<double>{1.0}), Error);
}

TEST(EuclideanDistance, Symmetric) {
  RngStream s(1);
  for (int i = 0; i < 1000; ++i) {
    const auto a = gaussian_vector(s, std::vector<double>(5, 0.0), 5);
    const auto b = gaussian_vector(s, std::vector<double>(5, 0.0), 5);
    EXPECT_EQ(euclidean_distance(a, b), euclidean_distance(b, a));
  }
}

TEST(KnnInSubgroup, OneDimensionalHandSort) {
  // Target (0,1) members sit at 5, 1, 2; a decoy in another subgroup at 0.5.
  const Dataset d = make_dataset(
      1, {{5, 0, 1}, {0.5, 1, 1}, {1, 0, 1}, {2, 0, 1}});
  const std::vector<double> q = {0.0};
  const NeighborResult r = knn_in_subgroup(d, q, {0, 1}, 2);
  EXPECT_EQ(r.indices, (std::vector<std::size_t>{2, 3}));
  EXPECT_EQ(r.distances, (std::vector<double>{1.0, 2.0}));
}

TEST(KnnInSubgroup, WholeSubgroupSortedWhenKEqualsSize) {
  const Dataset d = make_dataset(1, {{3, 1, 0}, {-1, 1, 0}, {2, 1, 0}});
  const std::vector<double> q = {0.0};
  const NeighborResult r = knn_in_subgroup(d, q, {1, 0}, 3);
  EXPECT_EQ(r.indices, (std::vector<std::size_t>{1, 2, 0}));
}

TEST(KnnInSubgroup, TiesByIndex) {
  const Dataset d = make_dataset(1, {{1, 0, 0}, {-1, 0, 0}, {1, 0, 0}});
  const std::vector<double> q = {0.0};
  EXPECT_EQ(knn_in_subgroup(d, q, {0, 0}, 2).indices,
            (std::vector<std::size_t>{0, 1}));
}

TEST(KnnInSubgroup, ExcludesSelf) {
  const Dataset d = make_dataset(1, {{0, 0, 0}, {1, 0, 0}, {3, 0, 0}});
  const NeighborResult r = knn_in_subgroup(d, d[0].x, {0, 0}, 2, 0);
  EXPECT_EQ(r.indices, (std::vector<std::size_t>{1, 2}));
}

TEST(KnnInSubgroup, InsufficientTargetThrows) {
  const Dataset d = make_dataset(1, {{0, 0, 0}, {1, 1, 1}});
  const std::vector<double> q = {0.0};
  try {
    knn_in_subgroup(d, q, {1, 1}, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("insufficient target subgroup"),
              std::string::npos);
  }
  EXPECT_THROW(knn_in_subgroup(d, d[1].x, {1, 1}, 1, 1), Error);
}

Dataset random_dataset(RngStream& s, std::size_t n, std::size_t dim,
                       bool coarse) {
  std::vector<Sample> rows;
  for (std::size_t i = 0; i < n; ++i) {
    Sample x;
    for (std::size_t j = 0; j < dim; ++j) {
      // Coarse grids force many exact distance ties.
      x.x.push_back(coarse ? static_cast<double>(s.below(3))
                           : s.standard_normal());
    }
    x.y = static_cast<int>(s.below(2));
    x.z = static_cast<int>(s.below(2));
    rows.push_back(std::move(x));
  }
  return Dataset(dim, std::move(rows));
}

TEST(KnnProperties, MatchesBruteForceOracle) {
  RngStream s(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const bool coarse = trial % 2 == 0;
    const Dataset d = random_dataset(s, 20 + s.below(181), 1 + s.below(4), coarse);
    const SubgroupKey key{static_cast<int>(s.below(2)), static_cast<int>(s.below(2))};
    const std::size_t members = subgroup_indices(d, key).size();
    if (members == 0) continue;
    const std::size_t k = 1 + s.below(members);
    std::vector<double> q(d.dim());
    for (double& v : q) v = coarse ? static_cast<double>(s.below(3)) : s.standard_normal();
    const NeighborResult r = knn_in_subgroup(d, q, key, k);
    EXPECT_EQ(r.indices, oracle::knn(d, q, key.y, key.z, k));
    for (std::size_t i = 0; i < r.indices.size(); ++i) {
      EXPECT_EQ(d[r.indices[i]].y, key.y);
      EXPECT_EQ(d[r.indices[i]].z, key.z);
      if (i) EXPECT_LE(r.distances[i - 1], r.distances[i]);
    }
  }
}

TEST(KnnProperties, PrefixMonotone) {
  RngStream s(7);
  for (int trial = 0; trial < 100; ++trial) {
    const Dataset d = random_dataset(s, 80, 2, trial % 2 == 0);
    const auto members = subgroup_indices(d, {1, 0}).size();
    const std::vector<double> q = {0.5, 1.0};
    std::vector<std::size_t> prev;
    for (std::size_t k = 1; k <= members; ++k) {
      const auto cur = knn_in_subgroup(d, q, {1, 0}, k).indices;
      ASSERT_EQ(cur.size(), k);
      EXPECT_TRUE(std::equal(prev.begin(), prev.end(), cur.begin()));
      prev = cur;
    }
  }
}

TEST(Standardizer, FitGivesZeroMeanUnitScale) {
  const Dataset d = make_dataset(2, {{1, 10, 0, 0}, {3, 10, 1, 0}, {5, 10, 0, 1}});
  const Standardizer st = Standardizer::fit(d);
  const Dataset t = st.apply(d);
  double m = 0, v = 0;
  for (const Sample& x : t) m += x.x[0];
  for (const Sample& x : t) v += x.x[0] * x.x[0];
  EXPECT_NEAR(m / 3, 0.0, 1e-12);
  EXPECT_NEAR(v / 3, 1.0, 1e-12);
  // Constant column is centered only.
  for (const Sample& x : t) EXPECT_DOUBLE_EQ(x.x[1], 0.0);
  EXPECT_THROW(Standardizer({0.0}, {0.0}), Error);
}

}  // namespace
}  // namespace fsgm
