#pragma once

#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "fsgm/experiment.hpp"

namespace fsgm {

// Flat "key = value" settings with dotted section prefixes, e.g.
//
//   # comment
//   experiment.seed = 7
//   fsgm.pairs = 00>10, 10>00
//   forest.n_trees = 100
//
// Later entries override earlier ones.
using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

ConfigEntries parse_config(std::istream& in);
ConfigEntries load_config_file(const std::string& path);

// Applies entries in order; unknown keys and malformed values throw with the
// offending key named.
void apply_config(const ConfigEntries& entries, ExperimentConfig& config);

// Every key apply_config accepts, for help output.
std::vector<std::string> config_keys();

}  // namespace fsgm
