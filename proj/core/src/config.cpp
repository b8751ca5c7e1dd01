#include "fsgm/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "fsgm/error.hpp"

namespace fsgm {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream in(value);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw Error("config: " + key + " expects a number, got '" + v + "'");
  }
  return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw Error("config: " + key + " expects a nonnegative integer, got '" + v +
                "'");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw Error("config: " + key + " expects true/false, got '" + v + "'");
}

using Setter = std::function<void(ExperimentConfig&, const std::string& key,
                                  const std::string& value)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"experiment.seed",
       [](auto& c, auto& k, auto& v) { c.seed = to_u64(k, v); }},
      {"experiment.replicates",
       [](auto& c, auto& k, auto& v) { c.replicates = to_u64(k, v); }},
      {"experiment.methods",
       [](auto& c, auto&, auto& v) {
         c.methods.clear();
         for (const auto& m : split_list(v)) c.methods.push_back(parse_method(m));
       }},
      {"experiment.models",
       [](auto& c, auto&, auto& v) {
         c.models.clear();
         for (const auto& m : split_list(v)) {
           c.models.push_back(parse_model_kind(m));
         }
       }},
      {"data.scenario", [](auto& c, auto&, auto& v) { c.scenario = v; }},
      {"data.csv", [](auto& c, auto&, auto& v) { c.csv_path = v; }},
      {"data.test_fraction",
       [](auto& c, auto& k, auto& v) { c.test_fraction = to_double(k, v); }},
      {"data.test_per_subgroup",
       [](auto& c, auto& k, auto& v) { c.test_per_subgroup = to_u64(k, v); }},
      {"synth.class_shift",
       [](auto& c, auto& k, auto& v) { c.class_shift = to_double(k, v); }},
      {"synth.group_shift",
       [](auto& c, auto& k, auto& v) { c.group_shift = to_double(k, v); }},
      {"synth.angle",
       [](auto& c, auto& k, auto& v) { c.angle = to_double(k, v); }},
      {"synth.dim", [](auto& c, auto& k, auto& v) { c.dim = to_u64(k, v); }},
      {"csv.features",
       [](auto& c, auto&, auto& v) { c.schema.features = split_list(v); }},
      {"csv.label", [](auto& c, auto&, auto& v) { c.schema.label = v; }},
      {"csv.label_positive",
       [](auto& c, auto&, auto& v) { c.schema.label_positive = v; }},
      {"csv.label_negative",
       [](auto& c, auto&, auto& v) { c.schema.label_negative = v; }},
      {"csv.group", [](auto& c, auto&, auto& v) { c.schema.group = v; }},
      {"csv.group_one", [](auto& c, auto&, auto& v) { c.schema.group_one = v; }},
      {"csv.group_zero",
       [](auto& c, auto&, auto& v) { c.schema.group_zero = v; }},
      {"csv.header",
       [](auto& c, auto& k, auto& v) { c.schema.header = to_bool(k, v); }},
      {"csv.delimiter",
       [](auto& c, auto& k, auto& v) {
         if (v == "tab" || v == "\\t") {
           c.schema.delimiter = '\t';
         } else if (v.size() == 1) {
           c.schema.delimiter = v[0];
         } else {
           throw Error("config: " + k + " expects one character or 'tab'");
         }
       }},
      {"fsgm.pairs",
       [](auto& c, auto&, auto& v) { c.pairs = parse_mix_pairs(v); }},
      {"fsgm.k", [](auto& c, auto& k, auto& v) { c.k = to_u64(k, v); }},
      {"fsgm.standardize_knn",
       [](auto& c, auto& k, auto& v) {
         if (v == "auto") {
           c.standardize_knn.reset();
         } else {
           c.standardize_knn = to_bool(k, v);
         }
       }},
      {"alpha.grid",
       [](auto& c, auto& k, auto& v) {
         c.alpha_grid.clear();
         for (const auto& a : split_list(v)) {
           c.alpha_grid.push_back(to_double(k, a));
         }
       }},
      {"alpha.protocol",
       [](auto& c, auto& k, auto& v) {
         if (v == "validation") {
           c.alpha_protocol = AlphaProtocol::kValidation;
         } else if (v == "test-leaky") {
           c.alpha_protocol = AlphaProtocol::kTestLeaky;
         } else {
           throw Error("config: " + k +
                       " expects 'validation' or 'test-leaky', got '" + v +
                       "'");
         }
       }},
      {"alpha.validation_fraction",
       [](auto& c, auto& k, auto& v) {
         c.validation_fraction = to_double(k, v);
       }},
      {"alpha.record_leaky",
       [](auto& c, auto& k, auto& v) { c.record_leaky = to_bool(k, v); }},
      {"forest.n_trees",
       [](auto& c, auto& k, auto& v) { c.forest.n_trees = to_u64(k, v); }},
      {"forest.max_depth",
       [](auto& c, auto& k, auto& v) { c.forest.max_depth = to_u64(k, v); }},
      {"forest.min_leaf",
       [](auto& c, auto& k, auto& v) { c.forest.min_leaf = to_u64(k, v); }},
      {"forest.features_per_split",
       [](auto& c, auto& k, auto& v) {
         c.forest.features_per_split = to_u64(k, v);
       }},
      {"mlp.hidden_units",
       [](auto& c, auto& k, auto& v) { c.mlp.hidden_units = to_u64(k, v); }},
      {"mlp.epochs",
       [](auto& c, auto& k, auto& v) { c.mlp.epochs = to_u64(k, v); }},
      {"mlp.learning_rate",
       [](auto& c, auto& k, auto& v) { c.mlp.learning_rate = to_double(k, v); }},
      {"mlp.batch_size",
       [](auto& c, auto& k, auto& v) { c.mlp.batch_size = to_u64(k, v); }},
  };
  return table;
}

}  // namespace

ConfigEntries parse_config(std::istream& in) {
  ConfigEntries out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error("config line " + std::to_string(line_no) +
                  ": expected 'key = value'");
    }
    std::string key = trim(line.substr(0, eq));
    if (key.empty()) {
      throw Error("config line " + std::to_string(line_no) + ": empty key");
    }
    out.emplace_back(std::move(key), trim(line.substr(eq + 1)));
  }
  return out;
}

ConfigEntries load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config '" + path + "'");
  return parse_config(in);
}

void apply_config(const ConfigEntries& entries, ExperimentConfig& config) {
  for (const auto& [key, value] : entries) {
    const auto it = setters().find(key);
    if (it == setters().end()) throw Error("config: unknown key '" + key + "'");
    it->second(config, key, value);
  }
}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& [key, _] : setters()) out.push_back(key);
  return out;
}

}  // namespace fsgm
