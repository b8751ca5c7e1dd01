#include <cmath>

#include <gtest/gtest.h>

#include "fsgm/error.hpp"
#include "fsgm/mlp.hpp"
#include "fsgm/random.hpp"
#include "oracles.hpp"

namespace fsgm {
namespace {

TEST(MlpSpec, Validation) {
  MlpSpec s;
  EXPECT_NO_THROW(s.check());
  s.learning_rate = 0;
  EXPECT_THROW(s.check(), Error);
  s = MlpSpec{};
  s.hidden_units = 0;
  EXPECT_THROW(s.check(), Error);
}

TEST(Mlp, ParameterCountChecked) {
  EXPECT_THROW(Mlp(3, 2, std::vector<double>(5), Standardizer::identity(3)),
               Error);
  EXPECT_NO_THROW(Mlp(3, 2, std::vector<double>(3 * 2 + 2 + 2 + 1),
                      Standardizer::identity(3)));
}

TEST(Mlp, HandComputedLogit) {
  // input 2, hidden 2: W1 = [[1, -1], [2, 0]], b1 = [0, -1], w2 = [1, 3], b2 = -0.5
  const Mlp m(2, 2, {1, -1, 2, 0, 0, -1, 1, 3, -0.5}, Standardizer::identity(2));
  // x = (1, 2): h = relu(-1), relu(2 - 1) = 0, 1; out = 3 - 0.5
  EXPECT_DOUBLE_EQ(m.logit(std::vector<double>{1, 2}), 2.5);
  EXPECT_EQ(m.predict(std::vector<double>{1, 2}), 1);
  // x = (0, 0): h = 0, 0 => out = -0.5
  EXPECT_EQ(m.predict(std::vector<double>{0, 0}), 0);
}

double norm(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

TEST(Mlp, GradientMatchesCentralDifferences) {
  RngStream rng(31);
  double worst = 0;
  for (int net = 0; net < 100; ++net) {
    const std::size_t d = 1 + rng.below(4), h = 1 + rng.below(6), n = 2 + rng.below(8);
    Mlp m = Mlp::random(d, h, rng.next_u64());
    for (double& p : m.mutable_parameters()) p += 0.1 * rng.standard_normal();
    std::vector<std::vector<double>> x(n, std::vector<double>(d));
    std::vector<int> y(n);
    std::vector<std::size_t> rows(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (double& v : x[i]) v = rng.standard_normal();
      y[i] = static_cast<int>(rng.below(2));
      rows[i] = i;
    }
    std::vector<double> g;
    m.loss_and_gradient(x, y, rows, &g);
    const std::vector<double> start(m.parameters().begin(), m.parameters().end());
    const auto fd = oracle::central_gradient(
        start,
        [&](const std::vector<double>& p) {
          std::copy(p.begin(), p.end(), m.mutable_parameters().begin());
          return m.loss_and_gradient(x, y, rows, nullptr);
        },
        1e-6);
    std::vector<double> diff(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) diff[i] = g[i] - fd[i];
    const double rel = norm(diff) / std::max({norm(g), norm(fd), 1e-12});
    worst = std::max(worst, rel);
    EXPECT_LE(rel, 1e-4) << "network " << net;
  }
  RecordProperty("worst_relative_error", std::to_string(worst));
}

TEST(TrainMlp, SolvesXorClusters) {
  RngStream rng(4);
  std::vector<Sample> rows;
  const double cx[4] = {-2, -2, 2, 2}, cy[4] = {-2, 2, -2, 2};
  const int lab[4] = {0, 1, 1, 0};
  for (int c = 0; c < 4; ++c) {
    for (int i = 0; i < 50; ++i) {
      rows.push_back({{cx[c] + 0.4 * rng.standard_normal(),
                       cy[c] + 0.4 * rng.standard_normal()},
                      lab[c], i % 2});
    }
  }
  const Dataset d(2, rows);
  MlpSpec s;
  s.hidden_units = 8;
  s.epochs = 300;
  s.learning_rate = 0.05;
  s.seed = 2;
  const Mlp m = train_mlp(d, s);
  std::size_t hits = 0;
  for (const Sample& x : d) hits += m.predict(x.x) == x.y;
  EXPECT_GE(static_cast<double>(hits) / d.size(), 0.95);
}

TEST(TrainMlp, ConstantLabels) {
  const Dataset d = oracle::make_dataset(
      2, {{0, 1, 1, 0}, {1, 0, 1, 1}, {2, 2, 1, 0}, {-1, 3, 1, 1}});
  MlpSpec s;
  s.epochs = 50;
  const Mlp m = train_mlp(d, s);
  for (const Sample& x : d) EXPECT_EQ(m.predict(x.x), 1);
  EXPECT_THROW(train_mlp(Dataset(2, {}), s), Error);
}

TEST(TrainMlp, DeterministicAndUsesTrainingStatistics) {
  const Dataset d = oracle::make_dataset(
      1, {{100, 0, 0}, {110, 1, 0}, {120, 0, 1}, {130, 1, 1}});
  MlpSpec s;
  s.epochs = 5;
  s.seed = 8;
  const Mlp a = train_mlp(d, s), b = train_mlp(d, s);
  EXPECT_TRUE(std::equal(a.parameters().begin(), a.parameters().end(),
                         b.parameters().begin()));
  EXPECT_NEAR(a.input_transform().mean()[0], 115.0, 1e-12);
}

}  // namespace
}  // namespace fsgm
