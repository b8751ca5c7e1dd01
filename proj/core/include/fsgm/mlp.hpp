#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fsgm/dataset.hpp"
#include "fsgm/knn.hpp"

namespace fsgm {

struct MlpSpec {
  std::size_t hidden_units = 32;
  std::size_t epochs = 200;
  double learning_rate = 0.01;
  std::size_t batch_size = 32;
  std::uint64_t seed = 0;

  void check() const;
};

// One hidden ReLU layer feeding a single sigmoid output, trained on binary
// cross-entropy. Inputs are z-scored with statistics from the training set.
//
// Parameters live in one flat vector laid out as
//   [W1 (hidden x input, row-major) | b1 (hidden) | w2 (hidden) | b2].
class Mlp {
 public:
  Mlp() = default;
  Mlp(std::size_t input_dim, std::size_t hidden_units,
      std::vector<double> parameters, Standardizer input_transform);

  // He-initialized network with an identity input transform.
  static Mlp random(std::size_t input_dim, std::size_t hidden_units,
                    std::uint64_t seed);

  std::size_t input_dim() const { return input_dim_; }
  std::size_t hidden_units() const { return hidden_; }
  std::span<const double> parameters() const { return params_; }
  std::span<double> mutable_parameters() { return params_; }
  const Standardizer& input_transform() const { return transform_; }

  // Pre-sigmoid output for a raw (untransformed) feature row.
  double logit(std::span<const double> x) const;
  int predict(std::span<const double> x) const { return logit(x) >= 0.0; }

  // Mean binary cross-entropy over `rows` of `inputs` (already transformed)
  // and, when `gradient` is non-null, its gradient w.r.t. parameters().
  double loss_and_gradient(std::span<const std::vector<double>> inputs,
                           std::span<const int> labels,
                           std::span<const std::size_t> rows,
                           std::vector<double>* gradient) const;

 private:
  double forward(std::span<const double> x, std::vector<double>& hidden) const;

  std::size_t input_dim_ = 0;
  std::size_t hidden_ = 0;
  std::vector<double> params_;
  Standardizer transform_;
};

// Mini-batch SGD with a fixed epoch budget; deterministic given spec.seed.
// Only x and y are read.
Mlp train_mlp(const Dataset& train, const MlpSpec& spec);

}  // namespace fsgm
