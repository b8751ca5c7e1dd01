#include "fsgm/dataset.hpp"

#include <cmath>
#include <sstream>

#include "fsgm/error.hpp"

namespace fsgm {

std::string to_string(SubgroupKey key) {
  return std::to_string(key.y) + std::to_string(key.z);
}

SubgroupKey parse_subgroup_key(const std::string& text) {
  auto bit = [&](char c) {
    if (c != '0' && c != '1') {
      throw Error("invalid subgroup key '" + text + "' (expected two of 0/1)");
    }
    return c - '0';
  };
  if (text.size() != 2) {
    throw Error("invalid subgroup key '" + text + "' (expected e.g. \"10\")");
  }
  return SubgroupKey{bit(text[0]), bit(text[1])};
}

Dataset::Dataset(std::size_t dim, std::vector<Sample> samples)
    : dim_(dim), samples_(std::move(samples)) {}

Dataset Dataset::select(std::span<const std::size_t> indices) const {
  std::vector<Sample> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= samples_.size()) throw Error("select: index out of range");
    out.push_back(samples_[i]);
  }
  return Dataset(dim_, std::move(out));
}

Dataset concat(const Dataset& a, const Dataset& b) {
  if (a.empty() && a.dim() == 0) return b;
  if (b.empty() && b.dim() == 0) return a;
  if (a.dim() != b.dim()) {
    throw Error("concat: dimension mismatch (" + std::to_string(a.dim()) +
                " vs " + std::to_string(b.dim()) + ")");
  }
  std::vector<Sample> out;
  out.reserve(a.size() + b.size());
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return Dataset(a.dim(), std::move(out));
}

std::size_t SubgroupTable::total() const {
  return counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1];
}

SubgroupTable subgroup_counts(const Dataset& dataset) {
  SubgroupTable table;
  for (const Sample& s : dataset) {
    if (s.y < 0 || s.y > 1 || s.z < 0 || s.z > 1) {
      throw Error("subgroup_counts: label out of range; validate() first");
    }
    ++table.counts[s.y][s.z];
  }
  return table;
}

SubgroupProportions subgroup_proportions(const SubgroupTable& table) {
  SubgroupProportions out{};
  for (int z = 0; z < 2; ++z) {
    const std::size_t column = table.counts[0][z] + table.counts[1][z];
    if (column == 0) {
      throw Error("empty group column (z=" + std::to_string(z) + ")");
    }
    for (int y = 0; y < 2; ++y) {
      out[y][z] = static_cast<double>(table.counts[y][z]) /
                  static_cast<double>(column);
    }
  }
  return out;
}

std::vector<std::size_t> subgroup_indices(const Dataset& dataset,
                                          SubgroupKey key) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (dataset[i].y == key.y && dataset[i].z == key.z) out.push_back(i);
  }
  return out;
}

std::vector<Violation> validate(const Dataset& dataset) {
  std::vector<Violation> out;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const Sample& s = dataset[i];
    const std::string at = "sample " + std::to_string(i) + ": ";
    if (s.x.size() != dataset.dim()) {
      out.push_back({Violation::Kind::kWrongLength, i,
                     at + "feature length " + std::to_string(s.x.size()) +
                         " != dim " + std::to_string(dataset.dim())});
    }
    for (std::size_t j = 0; j < s.x.size(); ++j) {
      if (!std::isfinite(s.x[j])) {
        out.push_back({Violation::Kind::kNonFinite, i,
                       at + "non-finite feature at column " +
                           std::to_string(j)});
        break;
      }
    }
    if (s.y != 0 && s.y != 1) {
      out.push_back({Violation::Kind::kLabelRange, i,
                     at + "label y=" + std::to_string(s.y) + " not in {0,1}"});
    }
    if (s.z != 0 && s.z != 1) {
      out.push_back({Violation::Kind::kGroupRange, i,
                     at + "group z=" + std::to_string(s.z) + " not in {0,1}"});
    }
  }
  return out;
}

void require_valid(const Dataset& dataset) {
  const auto violations = validate(dataset);
  if (violations.empty()) return;
  std::ostringstream msg;
  msg << violations.size() << " dataset violation(s):";
  for (std::size_t i = 0; i < violations.size() && i < 5; ++i) {
    msg << "\n  " << violations[i].message;
  }
  throw Error(msg.str());
}

}  // namespace fsgm
