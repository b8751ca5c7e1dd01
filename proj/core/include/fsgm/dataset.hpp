#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace fsgm {

// One labeled, group-annotated row. Labels are integers so that a stored
// sample can never carry a fractional label; mixup interpolates them as reals
// only transiently.
struct Sample {
  std::vector<double> x;
  int y = 0;
  int z = 0;

  friend bool operator==(const Sample&, const Sample&) = default;
};

// Identity of a (class, group) cell.
struct SubgroupKey {
  int y = 0;
  int z = 0;

  friend bool operator==(const SubgroupKey&, const SubgroupKey&) = default;
  friend auto operator<=>(const SubgroupKey&, const SubgroupKey&) = default;
};

// Renders a key as "yz", e.g. "10" for class 1, group 0.
std::string to_string(SubgroupKey key);
// Parses the two-character "yz" form; throws on anything else.
SubgroupKey parse_subgroup_key(const std::string& text);

inline constexpr std::array<SubgroupKey, 4> kAllSubgroups = {
    SubgroupKey{0, 0}, SubgroupKey{0, 1}, SubgroupKey{1, 0}, SubgroupKey{1, 1}};

// Immutable ordered collection of samples sharing one feature dimension.
//
// Construction does not validate; call validate() (or require_valid()) on
// data from untrusted sources. Everything produced by this library is valid.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::size_t dim, std::vector<Sample> samples);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }

  const Sample& operator[](std::size_t i) const { return samples_[i]; }
  std::span<const Sample> samples() const { return samples_; }

  auto begin() const { return samples_.cbegin(); }
  auto end() const { return samples_.cend(); }

  // Rows at the given indices, in the given order (duplicates allowed).
  Dataset select(std::span<const std::size_t> indices) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<Sample> samples_;
};

// D ∪ D' as an ordered concatenation; dimensions must match unless one side
// is empty.
Dataset concat(const Dataset& a, const Dataset& b);

// 2x2 count table indexed [y][z].
struct SubgroupTable {
  std::array<std::array<std::size_t, 2>, 2> counts{};

  std::size_t at(SubgroupKey key) const { return counts[key.y][key.z]; }
  std::size_t total() const;

  friend bool operator==(const SubgroupTable&, const SubgroupTable&) = default;
};

// Class proportions within each group, indexed [y][z]:
// cell = T_yz / (T_0z + T_1z).
using SubgroupProportions = std::array<std::array<double, 2>, 2>;

SubgroupTable subgroup_counts(const Dataset& dataset);

// Throws "empty group column" if either group has no samples.
SubgroupProportions subgroup_proportions(const SubgroupTable& table);

// Ascending indices i with (y_i, z_i) == key.
std::vector<std::size_t> subgroup_indices(const Dataset& dataset,
                                          SubgroupKey key);

struct Violation {
  enum class Kind { kNonFinite, kWrongLength, kLabelRange, kGroupRange };
  Kind kind;
  std::size_t index;
  std::string message;
};

// Empty result means the dataset is well formed.
std::vector<Violation> validate(const Dataset& dataset);

// Throws fsgm::Error listing the first few violations.
void require_valid(const Dataset& dataset);

}  // namespace fsgm
