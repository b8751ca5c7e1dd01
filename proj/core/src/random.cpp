#include "fsgm/random.hpp"

#include <cmath>
#include <string>

#include "fsgm/error.hpp"

namespace fsgm {

std::uint64_t mix_seed(std::uint64_t value) {
  value += 0x9E3779B97F4A7C15ULL;
  value = (value ^ (value >> 30)) * 0xBF58476D1CE4E5B9ULL;
  value = (value ^ (value >> 27)) * 0x94D049BB133111EBULL;
  return value ^ (value >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t offset) {
  return mix_seed(mix_seed(base) ^ mix_seed(offset * 0xD1B54A32D192ED03ULL));
}

MixupAlpha::MixupAlpha(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw Error("mixup alpha must be a positive finite real, got " +
                std::to_string(alpha));
  }
}

double RngStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::uniform_open() {
  double u;
  do {
    u = uniform();
  } while (u == 0.0);
  return u;
}

std::uint64_t RngStream::below(std::uint64_t n) {
  if (n == 0) throw Error("RngStream::below: empty range");
  // Reject the top partial block so every residue is equally likely.
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n + 1) % n;
  std::uint64_t r;
  do {
    r = engine_();
  } while (r > limit);
  return r % n;
}

double RngStream::standard_normal() {
  if (has_spare_normal_) {
    has_spare_normal_ = false;
    return spare_normal_;
  }
  // Marsaglia polar method.
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double scale = std::sqrt(-2.0 * std::log(s) / s);
  spare_normal_ = v * scale;
  has_spare_normal_ = true;
  return u * scale;
}

double RngStream::log_gamma_variate(double shape) {
  if (!(shape > 0.0)) throw Error("gamma shape must be positive");
  if (shape < 1.0) {
    // Gamma(a) = Gamma(a + 1) * U^(1/a)
    return log_gamma_variate(shape + 1.0) + std::log(uniform_open()) / shape;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = standard_normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_open();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2 ||
        std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) {
      return std::log(d) + std::log(v);
    }
  }
}

double beta_sample(RngStream& stream, MixupAlpha alpha) {
  const double lg1 = stream.log_gamma_variate(alpha.value());
  const double lg2 = stream.log_gamma_variate(alpha.value());
  // g1 / (g1 + g2) evaluated in log space.
  return 1.0 / (1.0 + std::exp(lg2 - lg1));
}

std::vector<double> gaussian_vector(RngStream& stream,
                                    std::span<const double> mean,
                                    std::size_t dim) {
  if (mean.size() != dim) {
    throw Error("gaussian_vector: mean has length " +
                std::to_string(mean.size()) + ", expected " +
                std::to_string(dim));
  }
  std::vector<double> out(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    out[i] = mean[i] + stream.standard_normal();
  }
  return out;
}

std::size_t uniform_index(RngStream& stream,
                          std::span<const std::size_t> candidates) {
  if (candidates.empty()) throw Error("empty source subgroup");
  return candidates[stream.below(candidates.size())];
}

}  // namespace fsgm
