#include "fsgm/augment.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <sstream>

#include "fsgm/error.hpp"
#include "fsgm/knn.hpp"

namespace fsgm {
namespace {

void check_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error("mixup lambda must lie in [0,1], got " +
                std::to_string(lambda));
  }
}

int mix_indicator(int a, int b, double lambda) {
  check_lambda(lambda);
  return (1.0 - lambda) * a + lambda * b >= 0.5 ? 1 : 0;
}

}  // namespace

std::vector<double> mix_features(std::span<const double> x_s,
                                 std::span<const double> x_t, double lambda) {
  check_lambda(lambda);
  if (x_s.size() != x_t.size()) {
    throw Error("mix_features: length mismatch");
  }
  std::vector<double> out(x_s.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = (1.0 - lambda) * x_s[i] + lambda * x_t[i];
  }
  return out;
}

int mix_label(int y_s, int y_t, double lambda) {
  return mix_indicator(y_s, y_t, lambda);
}

int mix_group(int z_s, int z_t, double lambda) {
  return mix_indicator(z_s, z_t, lambda);
}

Sample mix_samples(const Sample& source, const Sample& target, double lambda) {
  return Sample{mix_features(source.x, target.x, lambda),
                mix_label(source.y, target.y, lambda),
                mix_group(source.z, target.z, lambda)};
}

std::string to_string(const MixPair& pair) {
  return to_string(pair.source) + ">" + to_string(pair.target);
}

MixPair parse_mix_pair(const std::string& text) {
  const auto arrow = text.find('>');
  if (arrow == std::string::npos) {
    throw Error("invalid mix pair '" + text + "' (expected e.g. \"10>00\")");
  }
  return MixPair{parse_subgroup_key(text.substr(0, arrow)),
                 parse_subgroup_key(text.substr(arrow + 1))};
}

std::vector<MixPair> parse_mix_pairs(const std::string& comma_separated) {
  std::vector<MixPair> out;
  std::stringstream in(comma_separated);
  std::string item;
  while (std::getline(in, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
    if (!item.empty()) out.push_back(parse_mix_pair(item));
  }
  return out;
}

void FsgmConfig::check() const {
  if (pairs.empty()) throw Error("fsgm: at least one mix pair is required");
  std::set<MixPair> seen;
  for (const MixPair& p : pairs) {
    if (p.source == p.target) {
      throw Error("fsgm: pair " + to_string(p) +
                  " has identical source and target");
    }
    if (!seen.insert(p).second) {
      throw Error("fsgm: duplicate pair " + to_string(p));
    }
  }
  if (k == 0) throw Error("fsgm: k must be at least 1");
  if (new_count == 0) throw Error("fsgm: T' must be at least 1");
  (void)MixupAlpha(alpha);
}

AugmentationReport fsgm_augment(const Dataset& dataset,
                                const FsgmConfig& config) {
  config.check();

  struct PairPlan {
    std::vector<std::size_t> sources;
    std::vector<std::size_t> targets;
  };
  std::vector<PairPlan> plans;
  for (const MixPair& p : config.pairs) {
    PairPlan plan{subgroup_indices(dataset, p.source),
                  subgroup_indices(dataset, p.target)};
    if (plan.sources.empty()) {
      throw Error("empty source subgroup " + to_string(p.source));
    }
    if (plan.targets.size() < config.k) {
      throw Error("insufficient target subgroup " + to_string(p.target) +
                  ": k=" + std::to_string(config.k) + " but only " +
                  std::to_string(plan.targets.size()) + " members");
    }
    plans.push_back(std::move(plan));
  }

  std::optional<Dataset> standardized;
  if (config.standardize_knn) {
    standardized = Standardizer::fit(dataset).apply(dataset);
  }
  const Dataset& search_space = standardized ? *standardized : dataset;

  RngStream stream(config.seed);
  const MixupAlpha alpha(config.alpha);
  AugmentationReport report;
  std::vector<Sample> produced;
  produced.reserve(config.new_count);

  for (std::size_t iteration = 0; produced.size() < config.new_count;
       ++iteration) {
    const std::size_t slot = iteration % config.pairs.size();
    const MixPair& pair = config.pairs[slot];
    const PairPlan& plan = plans[slot];

    MixBatch batch{pair, uniform_index(stream, plan.sources), {}, 0.0, 0};
    const std::optional<std::size_t> exclude =
        pair.source == pair.target ? std::optional(batch.source_index)
                                   : std::nullopt;
    batch.neighbor_indices =
        knn_among(search_space, search_space[batch.source_index].x,
                  plan.targets, config.k, exclude)
            .indices;
    batch.lambda = beta_sample(stream, alpha);
    ++report.lambda_draws;

    const Sample& source = dataset[batch.source_index];
    for (std::size_t j : batch.neighbor_indices) {
      if (produced.size() == config.new_count) break;
      produced.push_back(mix_samples(source, dataset[j], batch.lambda));
      ++batch.emitted;
    }
    report.per_pair_counts[pair] += batch.emitted;
    report.batches.push_back(std::move(batch));
  }

  report.produced = Dataset(dataset.dim(), std::move(produced));
  return report;
}

Dataset vanilla_mixup(const Dataset& dataset, std::size_t new_count,
                      MixupAlpha alpha, std::uint64_t seed) {
  const auto class0 = [&] {
    auto a = subgroup_indices(dataset, {0, 0});
    auto b = subgroup_indices(dataset, {0, 1});
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    return a;
  }();
  const auto class1 = [&] {
    auto a = subgroup_indices(dataset, {1, 0});
    auto b = subgroup_indices(dataset, {1, 1});
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    return a;
  }();
  if (class0.empty() || class1.empty()) {
    throw Error("vanilla mixup needs both classes present");
  }
  RngStream stream(seed);
  std::vector<Sample> out;
  out.reserve(new_count);
  for (std::size_t n = 0; n < new_count; ++n) {
    // Beta(α, α) is symmetric, so a fixed class-0 -> class-1 orientation
    // yields the same distribution as a random one.
    const std::size_t i = uniform_index(stream, class0);
    const std::size_t j = uniform_index(stream, class1);
    const double lambda = beta_sample(stream, alpha);
    out.push_back(mix_samples(dataset[i], dataset[j], lambda));
  }
  return Dataset(dataset.dim(), std::move(out));
}

Dataset group_swap_augment(const Dataset& dataset, std::size_t new_count,
                           std::uint64_t seed) {
  if (dataset.empty()) throw Error("group swap: empty dataset");
  RngStream stream(seed);
  std::vector<Sample> out;
  out.reserve(new_count);
  for (std::size_t n = 0; n < new_count; ++n) {
    Sample copy = dataset[stream.below(dataset.size())];
    copy.z = 1 - copy.z;
    out.push_back(std::move(copy));
  }
  return Dataset(dataset.dim(), std::move(out));
}

Dataset bootstrap(const Dataset& dataset, std::size_t total_size,
                  std::uint64_t seed) {
  if (dataset.empty()) throw Error("bootstrap: empty dataset");
  if (total_size < dataset.size()) {
    throw Error("bootstrap: total size " + std::to_string(total_size) +
                " is smaller than the dataset (" +
                std::to_string(dataset.size()) + ")");
  }
  RngStream stream(seed);
  std::vector<Sample> out(dataset.begin(), dataset.end());
  out.reserve(total_size);
  while (out.size() < total_size) {
    out.push_back(dataset[stream.below(dataset.size())]);
  }
  return Dataset(dataset.dim(), std::move(out));
}

std::string to_string(Origin origin) {
  switch (origin) {
    case Origin::kOriginal: return "original";
    case Origin::kFsgm: return "fsgm";
    case Origin::kVanilla: return "vanilla";
    case Origin::kSwap: return "swap";
    case Origin::kBootstrap: return "bootstrap";
  }
  return "unknown";
}

}  // namespace fsgm
