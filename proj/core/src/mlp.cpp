#include "fsgm/mlp.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "fsgm/error.hpp"
#include "fsgm/random.hpp"

namespace fsgm {
namespace {

std::size_t parameter_count(std::size_t input_dim, std::size_t hidden) {
  return hidden * input_dim + hidden + hidden + 1;
}

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

// -[y log σ(t) + (1 - y) log(1 - σ(t))] without overflow.
double bce_with_logit(double t, int y) {
  return std::max(t, 0.0) - t * y + std::log1p(std::exp(-std::abs(t)));
}

}  // namespace

void MlpSpec::check() const {
  if (hidden_units == 0 || epochs == 0 || batch_size == 0) {
    throw Error("mlp spec: hidden_units, epochs and batch_size must be positive");
  }
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw Error("mlp spec: learning_rate must be positive");
  }
}

Mlp::Mlp(std::size_t input_dim, std::size_t hidden_units,
         std::vector<double> parameters, Standardizer input_transform)
    : input_dim_(input_dim),
      hidden_(hidden_units),
      params_(std::move(parameters)),
      transform_(std::move(input_transform)) {
  if (params_.size() != parameter_count(input_dim_, hidden_)) {
    throw Error("mlp: expected " +
                std::to_string(parameter_count(input_dim_, hidden_)) +
                " parameters, got " + std::to_string(params_.size()));
  }
  if (transform_.dim() != input_dim_) {
    throw Error("mlp: input transform dimension mismatch");
  }
}

Mlp Mlp::random(std::size_t input_dim, std::size_t hidden_units,
                std::uint64_t seed) {
  RngStream stream(seed);
  std::vector<double> params(parameter_count(input_dim, hidden_units), 0.0);
  const double w1_scale = std::sqrt(2.0 / static_cast<double>(input_dim));
  const double w2_scale = std::sqrt(1.0 / static_cast<double>(hidden_units));
  const std::size_t w1_end = hidden_units * input_dim;
  for (std::size_t i = 0; i < w1_end; ++i) {
    params[i] = w1_scale * stream.standard_normal();
  }
  const std::size_t w2_begin = w1_end + hidden_units;
  for (std::size_t i = 0; i < hidden_units; ++i) {
    params[w2_begin + i] = w2_scale * stream.standard_normal();
  }
  return Mlp(input_dim, hidden_units, std::move(params),
             Standardizer::identity(input_dim));
}

double Mlp::forward(std::span<const double> x,
                    std::vector<double>& hidden) const {
  const double* w1 = params_.data();
  const double* b1 = w1 + hidden_ * input_dim_;
  const double* w2 = b1 + hidden_;
  const double b2 = w2[hidden_];
  hidden.resize(hidden_);
  double out = b2;
  for (std::size_t h = 0; h < hidden_; ++h) {
    const double* row = w1 + h * input_dim_;
    double a = b1[h];
    for (std::size_t j = 0; j < input_dim_; ++j) a += row[j] * x[j];
    hidden[h] = a > 0.0 ? a : 0.0;
    out += w2[h] * hidden[h];
  }
  return out;
}

double Mlp::logit(std::span<const double> x) const {
  if (x.size() != input_dim_) {
    throw Error("mlp: expected " + std::to_string(input_dim_) +
                " features, got " + std::to_string(x.size()));
  }
  std::vector<double> hidden;
  return forward(transform_.apply(x), hidden);
}

double Mlp::loss_and_gradient(std::span<const std::vector<double>> inputs,
                              std::span<const int> labels,
                              std::span<const std::size_t> rows,
                              std::vector<double>* gradient) const {
  if (rows.empty()) throw Error("mlp: empty batch");
  if (gradient) gradient->assign(params_.size(), 0.0);
  const double inv_n = 1.0 / static_cast<double>(rows.size());
  const std::size_t b1_off = hidden_ * input_dim_;
  const std::size_t w2_off = b1_off + hidden_;
  const std::size_t b2_off = w2_off + hidden_;
  const double* w2 = params_.data() + w2_off;

  std::vector<double> hidden;
  double loss = 0.0;
  for (std::size_t r : rows) {
    const std::vector<double>& x = inputs[r];
    const double t = forward(x, hidden);
    loss += bce_with_logit(t, labels[r]);
    if (!gradient) continue;
    double* g = gradient->data();
    const double dt = (sigmoid(t) - labels[r]) * inv_n;
    g[b2_off] += dt;
    for (std::size_t h = 0; h < hidden_; ++h) {
      g[w2_off + h] += dt * hidden[h];
      if (hidden[h] <= 0.0) continue;
      const double da = dt * w2[h];
      g[b1_off + h] += da;
      double* gw = g + h * input_dim_;
      for (std::size_t j = 0; j < input_dim_; ++j) gw[j] += da * x[j];
    }
  }
  return loss * inv_n;
}

Mlp train_mlp(const Dataset& train, const MlpSpec& spec) {
  spec.check();
  if (train.empty()) throw Error("train_mlp: empty training set");
  const std::size_t d = train.dim();

  RngStream stream(spec.seed);
  Mlp model = Mlp::random(d, spec.hidden_units, stream.next_u64());
  Standardizer transform = Standardizer::fit(train);

  std::vector<std::vector<double>> inputs;
  std::vector<int> labels;
  inputs.reserve(train.size());
  labels.reserve(train.size());
  for (const Sample& s : train) {
    inputs.push_back(transform.apply(s.x));
    labels.push_back(s.y);
  }

  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> gradient;
  std::span<double> params = model.mutable_parameters();
  for (std::size_t epoch = 0; epoch < spec.epochs; ++epoch) {
    shuffle(stream, order);
    for (std::size_t start = 0; start < order.size();
         start += spec.batch_size) {
      const std::size_t stop =
          std::min(order.size(), start + spec.batch_size);
      const std::span<const std::size_t> batch(order.data() + start,
                                               stop - start);
      model.loss_and_gradient(inputs, labels, batch, &gradient);
      for (std::size_t p = 0; p < params.size(); ++p) {
        params[p] -= spec.learning_rate * gradient[p];
      }
    }
  }
  return Mlp(d, spec.hidden_units,
             std::vector<double>(params.begin(), params.end()),
             std::move(transform));
}

}  // namespace fsgm
