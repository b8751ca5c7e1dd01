#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace fsgm {

// Fixed offsets for the named sub-streams of one experiment replicate.
// Changing how one stage consumes randomness never perturbs another's draws.
enum class StreamId : std::uint64_t {
  kDataGen = 1,
  kTestGen = 2,
  kAugmentation = 3,
  kModelInit = 4,
  kBootstrap = 5,
  kSplit = 6,
  kAlphaSearch = 7,
};

// SplitMix64 finalizer; used to derive well-separated seeds.
std::uint64_t mix_seed(std::uint64_t value);

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t offset);
inline std::uint64_t derive_seed(std::uint64_t base, StreamId id) {
  return derive_seed(base, static_cast<std::uint64_t>(id));
}

// Positive Beta(alpha, alpha) shape parameter.
class MixupAlpha {
 public:
  explicit MixupAlpha(double alpha);
  double value() const { return alpha_; }

 private:
  double alpha_;
};

// Seeded, single-owner random stream.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the
// standard. All distributions are implemented here rather than taken from
// <random>, whose distribution algorithms are implementation-defined.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  // Child stream for a named stage; does not advance this stream.
  RngStream substream(StreamId id) const {
    return RngStream(derive_seed(seed_, id));
  }
  RngStream substream(std::uint64_t offset) const {
    return RngStream(derive_seed(seed_, offset));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on (0, 1); never returns 0.
  double uniform_open();
  // Unbiased uniform integer in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n);

  double standard_normal();
  // Gamma(shape, 1) via Marsaglia-Tsang, returned as its natural log so that
  // small shapes do not underflow.
  double log_gamma_variate(double shape);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

// λ ~ Beta(α, α) as g1 / (g1 + g2) with g_i ~ Gamma(α).
double beta_sample(RngStream& stream, MixupAlpha alpha);

// Independent Normal(mean_i, 1) per coordinate.
std::vector<double> gaussian_vector(RngStream& stream,
                                    std::span<const double> mean,
                                    std::size_t dim);

// Uniform choice with replacement; throws "empty source subgroup" on empty
// input.
std::size_t uniform_index(RngStream& stream,
                          std::span<const std::size_t> candidates);

// Fisher-Yates with this library's own index draws.
template <typename T>
void shuffle(RngStream& stream, std::vector<T>& items) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(stream.below(i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace fsgm
