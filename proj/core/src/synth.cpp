#include "fsgm/synth.hpp"

#include <cmath>
#include <numbers>

#include "fsgm/error.hpp"
#include "fsgm/random.hpp"

namespace fsgm {

void ShiftSpec::check() const {
  if (dim == 0) throw Error("shift spec: dim must be positive");
  if (!(class_shift_magnitude >= 0.0) || !(group_shift_magnitude >= 0.0)) {
    throw Error("shift spec: magnitudes must be nonnegative");
  }
  if (!std::isfinite(angle)) throw Error("shift spec: angle must be finite");
  if (dim < 2 && std::abs(std::sin(angle)) > 1e-12 &&
      group_shift_magnitude > 0.0) {
    throw Error("shift spec: a non-collinear angle needs dim >= 2");
  }
}

std::vector<double> ShiftVectors::mean(SubgroupKey key) const {
  std::vector<double> out(class_shift[key.y]);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] += group_shift[key.z][i];
  }
  return out;
}

ShiftVectors shift_vectors(const ShiftSpec& spec) {
  spec.check();
  ShiftVectors v;
  std::vector<double> b1(spec.dim, 0.0);
  std::vector<double> c1(spec.dim, 0.0);
  b1[0] = spec.class_shift_magnitude;
  c1[0] = spec.group_shift_magnitude * std::cos(spec.angle);
  if (spec.dim >= 2) c1[1] = spec.group_shift_magnitude * std::sin(spec.angle);

  auto negate = [](std::vector<double> x) {
    for (double& e : x) e = -e;
    return x;
  };
  v.class_shift = {negate(b1), b1};
  v.group_shift = {negate(c1), c1};
  return v;
}

Dataset gen_conditional_gaussian(const ScenarioConfig& config) {
  if (config.counts.total() == 0) {
    throw Error("scenario '" + config.name + "' has zero total count");
  }
  const ShiftVectors shifts = shift_vectors(config.shifts);
  RngStream stream(config.seed);
  std::vector<Sample> rows;
  rows.reserve(config.counts.total());
  for (SubgroupKey key : kAllSubgroups) {
    const std::vector<double> mean = shifts.mean(key);
    for (std::size_t n = 0; n < config.counts.at(key); ++n) {
      rows.push_back({gaussian_vector(stream, mean, config.shifts.dim), key.y,
                      key.z});
    }
  }
  shuffle(stream, rows);
  return Dataset(config.shifts.dim, std::move(rows));
}

namespace {

SubgroupTable table(std::size_t t00, std::size_t t10, std::size_t t01,
                    std::size_t t11) {
  SubgroupTable t;
  t.counts[0][0] = t00;
  t.counts[1][0] = t10;
  t.counts[0][1] = t01;
  t.counts[1][1] = t11;
  return t;
}

}  // namespace

ScenarioConfig preset_scenario(const std::string& name) {
  ScenarioConfig config;
  config.name = name;
  config.shifts = ShiftSpec{};
  if (name == "unbalanced-groups") {
    config.counts = table(10, 10, 100, 100);
  } else if (name == "unbalanced-class") {
    config.counts = table(100, 60, 100, 10);
  } else if (name == "underrepresented-subgroup") {
    config.counts = table(200, 10, 200, 200);
    config.shifts.angle = std::numbers::pi / 6.0;
  } else {
    throw Error("unknown scenario '" + name + "'");
  }
  return config;
}

std::vector<std::string> preset_names() {
  return {"unbalanced-groups", "unbalanced-class", "underrepresented-subgroup"};
}

ScenarioConfig balanced_test_config(const ScenarioConfig& train,
                                    std::size_t per_subgroup,
                                    std::uint64_t seed) {
  ScenarioConfig test = train;
  test.name = train.name + "/test";
  test.counts = table(per_subgroup, per_subgroup, per_subgroup, per_subgroup);
  test.seed = seed;
  return test;
}

}  // namespace fsgm
