#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fsgm/dataset.hpp"

namespace fsgm {

// Class and group mean shifts. B(1) lies along e1 with length
// class_shift_magnitude; C(1) has length group_shift_magnitude and makes
// `angle` radians with B(1) in the (e1, e2) plane. B(0) = -B(1), C(0) = -C(1).
struct ShiftSpec {
  double class_shift_magnitude = 1.0;
  double group_shift_magnitude = 1.0;
  double angle = 1.5707963267948966;  // pi / 2
  std::size_t dim = 10;

  void check() const;
};

struct ShiftVectors {
  std::array<std::vector<double>, 2> class_shift;  // B(y)
  std::array<std::vector<double>, 2> group_shift;  // C(z)

  // B(y) + C(z), the mean of subgroup (y, z).
  std::vector<double> mean(SubgroupKey key) const;
};

ShiftVectors shift_vectors(const ShiftSpec& spec);

struct ScenarioConfig {
  std::string name;
  SubgroupTable counts;
  ShiftSpec shifts;
  std::uint64_t seed = 0;
};

// x | (y, z) ~ Normal(B(y) + C(z), I_d), exactly counts[y][z] rows per cell,
// emitted in a seed-determined shuffled order.
Dataset gen_conditional_gaussian(const ScenarioConfig& config);

// Names: "unbalanced-groups", "unbalanced-class", "underrepresented-subgroup".
ScenarioConfig preset_scenario(const std::string& name);
std::vector<std::string> preset_names();

// Held-out companion to a scenario: same shifts, `per_subgroup` rows in every
// cell.
ScenarioConfig balanced_test_config(const ScenarioConfig& train,
                                    std::size_t per_subgroup,
                                    std::uint64_t seed);

}  // namespace fsgm
