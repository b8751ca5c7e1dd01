#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "fsgm/dataset.hpp"
#include "fsgm/random.hpp"

namespace fsgm {

// ---------------------------------------------------------------------------
// Pairwise mixup primitives.
//
// A mixed sample sits at (1 - λ) x_s + λ x_t. Its class and group labels are
// the indicator of the interpolated label reaching 1/2, so the mixed sample
// inherits the labels of whichever parent it is closer to, with the target's
// labels winning the exact tie at λ = 1/2.
// ---------------------------------------------------------------------------

std::vector<double> mix_features(std::span<const double> x_s,
                                 std::span<const double> x_t, double lambda);
int mix_label(int y_s, int y_t, double lambda);
int mix_group(int z_s, int z_t, double lambda);
Sample mix_samples(const Sample& source, const Sample& target, double lambda);

// Interpolation direction from a source subgroup toward a target subgroup.
struct MixPair {
  SubgroupKey source;
  SubgroupKey target;

  friend bool operator==(const MixPair&, const MixPair&) = default;
  friend auto operator<=>(const MixPair&, const MixPair&) = default;
};

// "10>00" style text form.
std::string to_string(const MixPair& pair);
MixPair parse_mix_pair(const std::string& text);
std::vector<MixPair> parse_mix_pairs(const std::string& comma_separated);

struct FsgmConfig {
  std::vector<MixPair> pairs;
  std::size_t k = 5;
  double alpha = 1.0;
  std::size_t new_count = 0;  // T'
  std::uint64_t seed = 0;
  // Standardize features dataset-wide before the neighbor search. Mixing
  // always uses the raw features.
  bool standardize_knn = false;

  // Throws on empty or duplicate pairs, source == target, k == 0, T' == 0,
  // or alpha <= 0.
  void check() const;
};

// One iteration of the sampling loop: a source row, its neighbors in the
// target subgroup, and the single λ shared by the whole batch.
struct MixBatch {
  MixPair pair;
  std::size_t source_index = 0;
  std::vector<std::size_t> neighbor_indices;
  double lambda = 0.0;
  std::size_t emitted = 0;  // < neighbor_indices.size() only for the last batch
};

struct AugmentationReport {
  Dataset produced;  // D'
  std::map<MixPair, std::size_t> per_pair_counts;
  std::size_t lambda_draws = 0;
  std::vector<MixBatch> batches;
};

// Fair subgroup mixup. Pairs are visited round-robin; each iteration draws a
// source row uniformly (with replacement) from the pair's source subgroup,
// finds its k nearest neighbors in the target subgroup, draws one
// λ ~ Beta(α, α) and emits k mixed samples. The final batch is truncated so
// that exactly T' samples are produced.
AugmentationReport fsgm_augment(const Dataset& dataset,
                                const FsgmConfig& config);

// Mixup between uniformly drawn cross-class pairs, fresh λ per pair.
Dataset vanilla_mixup(const Dataset& dataset, std::size_t new_count,
                      MixupAlpha alpha, std::uint64_t seed);

// Copies of uniformly drawn rows with the group label flipped.
Dataset group_swap_augment(const Dataset& dataset, std::size_t new_count,
                           std::uint64_t seed);

// The original rows followed by (total_size - |D|) uniform resamples.
Dataset bootstrap(const Dataset& dataset, std::size_t total_size,
                  std::uint64_t seed);

// Provenance tag used when dumping augmented datasets.
enum class Origin { kOriginal, kFsgm, kVanilla, kSwap, kBootstrap };
std::string to_string(Origin origin);

}  // namespace fsgm
