#include "fsgm/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <tuple>

#include "fsgm/error.hpp"
#include "fsgm/random.hpp"

namespace fsgm {

std::string to_string(Method method) {
  switch (method) {
    case Method::kOriginal: return "original";
    case Method::kFsgm: return "fsgm";
    case Method::kVanillaMixup: return "vanilla-mixup";
    case Method::kGroupSwap: return "group-swap";
  }
  return "unknown";
}

Method parse_method(const std::string& text) {
  if (text == "original") return Method::kOriginal;
  if (text == "fsgm") return Method::kFsgm;
  if (text == "vanilla-mixup" || text == "vanilla") return Method::kVanillaMixup;
  if (text == "group-swap" || text == "swap") return Method::kGroupSwap;
  throw Error("unknown method '" + text +
              "' (expected original, fsgm, vanilla-mixup or group-swap)");
}

bool uses_alpha(Method method) {
  return method == Method::kFsgm || method == Method::kVanillaMixup;
}

std::vector<MixPair> default_pairs(const std::string& scenario) {
  const SubgroupKey s00{0, 0}, s10{1, 0}, s11{1, 1};
  if (scenario == "unbalanced-groups" || scenario == "law-school") {
    // Within the group, across classes.
    return {{s00, s10}, {s10, s00}};
  }
  if (scenario == "unbalanced-class") {
    // Within the minority class, across groups.
    return {{s10, s11}, {s11, s10}};
  }
  if (scenario == "underrepresented-subgroup") {
    return {{s10, s11}, {s10, s00}};
  }
  throw Error("no default mix pairs for scenario '" + scenario + "'");
}

std::pair<Dataset, Dataset> train_test_split(const Dataset& dataset,
                                             double test_fraction,
                                             std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw Error("train_test_split: fraction must lie in (0, 1)");
  }
  std::vector<std::vector<std::size_t>> cells;
  for (SubgroupKey key : kAllSubgroups) {
    cells.push_back(subgroup_indices(dataset, key));
  }

  // Largest-remainder apportionment of the held-out total across cells.
  const auto target = static_cast<std::size_t>(
      std::llround(test_fraction * static_cast<double>(dataset.size())));
  std::vector<std::size_t> take(cells.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const double quota = test_fraction * static_cast<double>(cells[c].size());
    take[c] = static_cast<std::size_t>(std::floor(quota));
    assigned += take[c];
    remainders.emplace_back(-(quota - std::floor(quota)), c);
  }
  std::stable_sort(remainders.begin(), remainders.end());
  for (std::size_t i = 0; assigned < target && i < remainders.size(); ++i) {
    const std::size_t c = remainders[i].second;
    if (take[c] < cells[c].size()) {
      ++take[c];
      ++assigned;
    }
  }
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const std::size_t n = cells[c].size();
    if (n >= 2) {
      take[c] = std::clamp<std::size_t>(take[c], 1, n - 1);
    } else {
      take[c] = 0;
    }
  }

  RngStream stream(seed);
  std::vector<std::size_t> train_idx, test_idx;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    shuffle(stream, cells[c]);
    test_idx.insert(test_idx.end(), cells[c].begin(),
                    cells[c].begin() + static_cast<long>(take[c]));
    train_idx.insert(train_idx.end(),
                     cells[c].begin() + static_cast<long>(take[c]),
                     cells[c].end());
  }
  if (train_idx.empty() || test_idx.empty()) {
    throw Error("train_test_split: degenerate split (" +
                std::to_string(train_idx.size()) + " train / " +
                std::to_string(test_idx.size()) + " test rows)");
  }
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(test_idx.begin(), test_idx.end());
  return {dataset.select(train_idx), dataset.select(test_idx)};
}

TrainingSet build_training_set(const Dataset& train, const MethodParams& params,
                               std::uint64_t seed) {
  const std::size_t t = train.size();
  if (t == 0) throw Error("empty training set");
  const std::uint64_t aug_seed = derive_seed(seed, StreamId::kAugmentation);

  TrainingSet out;
  Origin added = Origin::kBootstrap;
  Dataset extra;
  switch (params.method) {
    case Method::kOriginal: {
      out.data = bootstrap(train, 2 * t, derive_seed(seed, StreamId::kBootstrap));
      out.origins.assign(t, Origin::kOriginal);
      out.origins.resize(2 * t, Origin::kBootstrap);
      return out;
    }
    case Method::kFsgm: {
      FsgmConfig config;
      config.pairs = params.pairs;
      config.k = params.k;
      config.alpha = params.alpha;
      config.new_count = t;
      config.seed = aug_seed;
      config.standardize_knn = params.standardize_knn;
      extra = fsgm_augment(train, config).produced;
      added = Origin::kFsgm;
      break;
    }
    case Method::kVanillaMixup:
      extra = vanilla_mixup(train, t, MixupAlpha(params.alpha), aug_seed);
      added = Origin::kVanilla;
      break;
    case Method::kGroupSwap:
      extra = group_swap_augment(train, t, aug_seed);
      added = Origin::kSwap;
      break;
  }
  out.data = concat(train, extra);
  out.origins.assign(t, Origin::kOriginal);
  out.origins.resize(out.data.size(), added);
  return out;
}

MethodRun run_method(const Dataset& train, const MethodParams& params,
                     const ModelSpec& spec, std::uint64_t seed) {
  const TrainingSet set = build_training_set(train, params, seed);
  if (set.data.size() != 2 * train.size()) {
    throw Error("budget violation: " + to_string(params.method) + " produced " +
                std::to_string(set.data.size()) + " training rows, expected " +
                std::to_string(2 * train.size()));
  }
  ModelSpec seeded = spec;
  const std::uint64_t model_seed = derive_seed(seed, StreamId::kModelInit);
  seeded.forest.seed = model_seed;
  seeded.mlp.seed = model_seed;
  return MethodRun{train_model(set.data, seeded), set.data.size()};
}

AlphaSearchResult score_alpha_grid(const Dataset& fit, const Dataset& score,
                                   const MethodParams& params,
                                   const ModelSpec& spec,
                                   std::vector<double> grid,
                                   std::uint64_t seed) {
  if (grid.empty()) throw Error("alpha search: empty grid");
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  AlphaSearchResult result;
  double best = -std::numeric_limits<double>::infinity();
  for (double alpha : grid) {
    (void)MixupAlpha(alpha);
    MethodParams p = params;
    p.alpha = alpha;
    const MethodRun run = run_method(fit, p, spec, seed);
    const EvalResult e = evaluate(run.model, score);
    const AlphaScore s{alpha, e.accuracy, e.fairness};
    if (s.score() > best) {
      best = s.score();
      result.chosen = alpha;
    }
    result.scores.push_back(s);
  }
  return result;
}

AlphaSearchResult alpha_search(const Dataset& train, const MethodParams& params,
                               const ModelSpec& spec,
                               const std::vector<double>& grid,
                               double validation_fraction, std::uint64_t seed) {
  if (grid.empty()) throw Error("alpha search: empty grid");
  if (grid.size() == 1) return {grid.front(), {}};
  const auto [fit, validation] = train_test_split(
      train, validation_fraction, derive_seed(seed, StreamId::kAlphaSearch));
  return score_alpha_grid(fit, validation, params, spec, grid, seed);
}

void ExperimentConfig::check() const {
  if (methods.empty()) throw Error("config: no methods selected");
  if (models.empty()) throw Error("config: no models selected");
  if (replicates == 0) throw Error("config: replicates must be >= 1");
  if (alpha_grid.empty()) throw Error("config: empty alpha grid");
  for (double a : alpha_grid) (void)MixupAlpha(a);
  if (k == 0) throw Error("config: fsgm.k must be >= 1");
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) {
    throw Error("config: alpha.validation_fraction must lie in (0, 1)");
  }
  if (uses_csv()) {
    schema.check();
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
      throw Error("config: data.test_fraction must lie in (0, 1)");
    }
  } else {
    scenario_config();
    if (test_per_subgroup == 0) {
      throw Error("config: data.test_per_subgroup must be >= 1");
    }
  }
  mlp.check();
}

std::vector<MixPair> ExperimentConfig::resolved_pairs() const {
  if (!pairs.empty()) return pairs;
  return default_pairs(uses_csv() ? "law-school" : scenario);
}

ScenarioConfig ExperimentConfig::scenario_config() const {
  ScenarioConfig sc = preset_scenario(scenario);
  if (class_shift) sc.shifts.class_shift_magnitude = *class_shift;
  if (group_shift) sc.shifts.group_shift_magnitude = *group_shift;
  if (angle) sc.shifts.angle = *angle;
  if (dim) sc.shifts.dim = *dim;
  sc.shifts.check();
  return sc;
}

std::uint64_t replicate_seed(std::uint64_t master_seed, std::size_t replicate) {
  return derive_seed(master_seed, 1000 + replicate);
}

std::pair<Dataset, Dataset> replicate_data(const ExperimentConfig& config,
                                           std::size_t replicate,
                                           const Dataset* csv_data) {
  const std::uint64_t seed = replicate_seed(config.seed, replicate);
  if (config.uses_csv()) {
    if (!csv_data) throw Error("replicate_data: CSV data not loaded");
    return train_test_split(*csv_data, config.test_fraction,
                            derive_seed(seed, StreamId::kSplit));
  }
  ScenarioConfig train_cfg = config.scenario_config();
  train_cfg.seed = derive_seed(seed, StreamId::kDataGen);
  const ScenarioConfig test_cfg = balanced_test_config(
      train_cfg, config.test_per_subgroup, derive_seed(seed, StreamId::kTestGen));
  return {gen_conditional_gaussian(train_cfg),
          gen_conditional_gaussian(test_cfg)};
}

ResultRow run_cell(const ExperimentConfig& config, const Dataset& train,
                   const Dataset& test, Method method, ModelKind model,
                   std::size_t replicate) {
  ResultRow row;
  row.method = method;
  row.model = model;
  row.replicate = replicate;
  row.seed = replicate_seed(config.seed, replicate);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  row.eval.accuracy = row.eval.dp_gap_signed = row.eval.fairness = nan;
  try {
    MethodParams params;
    params.method = method;
    if (method == Method::kFsgm) params.pairs = config.resolved_pairs();
    params.k = config.k;
    params.standardize_knn = config.resolved_standardize_knn();
    ModelSpec spec{model, config.forest, config.mlp};

    if (uses_alpha(method)) {
      const AlphaSearchResult search =
          config.alpha_protocol == AlphaProtocol::kValidation
              ? alpha_search(train, params, spec, config.alpha_grid,
                             config.validation_fraction, row.seed)
              : score_alpha_grid(train, test, params, spec, config.alpha_grid,
                                 row.seed);
      params.alpha = search.chosen;
      row.alpha = search.chosen;
    }
    const MethodRun run = run_method(train, params, spec, row.seed);
    row.train_size = run.train_size;
    row.eval = evaluate(run.model, test);
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

namespace {

std::string format_value(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    out += items[i];
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> config_echo(
    const ExperimentConfig& c) {
  std::vector<std::pair<std::string, std::string>> m;
  auto num = [](double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
  };
  m.emplace_back("experiment.seed", std::to_string(c.seed));
  m.emplace_back("experiment.replicates", std::to_string(c.replicates));
  std::vector<std::string> methods, models, pairs, grid;
  for (Method x : c.methods) methods.push_back(to_string(x));
  for (ModelKind x : c.models) models.push_back(to_string(x));
  for (const MixPair& p : c.resolved_pairs()) pairs.push_back(to_string(p));
  for (double a : c.alpha_grid) grid.push_back(num(a));
  m.emplace_back("experiment.methods", join(methods));
  m.emplace_back("experiment.models", join(models));
  if (c.uses_csv()) {
    m.emplace_back("data.csv", c.csv_path);
    m.emplace_back("data.test_fraction", num(c.test_fraction));
  } else {
    const ScenarioConfig sc = c.scenario_config();
    m.emplace_back("data.scenario", c.scenario);
    m.emplace_back("data.test_per_subgroup", std::to_string(c.test_per_subgroup));
    m.emplace_back("synth.class_shift", num(sc.shifts.class_shift_magnitude));
    m.emplace_back("synth.group_shift", num(sc.shifts.group_shift_magnitude));
    m.emplace_back("synth.angle", num(sc.shifts.angle));
    m.emplace_back("synth.dim", std::to_string(sc.shifts.dim));
  }
  m.emplace_back("fsgm.pairs", join(pairs));
  m.emplace_back("fsgm.k", std::to_string(c.k));
  m.emplace_back("fsgm.standardize_knn",
                 c.resolved_standardize_knn() ? "true" : "false");
  m.emplace_back("alpha.grid", join(grid));
  m.emplace_back("alpha.protocol", c.alpha_protocol == AlphaProtocol::kValidation
                                       ? "validation"
                                       : "test-leaky");
  m.emplace_back("alpha.validation_fraction", num(c.validation_fraction));
  m.emplace_back("alpha.record_leaky", c.record_leaky ? "true" : "false");
  m.emplace_back("forest.n_trees", std::to_string(c.forest.n_trees));
  m.emplace_back("forest.max_depth", std::to_string(c.forest.max_depth));
  m.emplace_back("forest.min_leaf", std::to_string(c.forest.min_leaf));
  m.emplace_back("forest.features_per_split",
                 std::to_string(c.forest.features_per_split));
  m.emplace_back("mlp.hidden_units", std::to_string(c.mlp.hidden_units));
  m.emplace_back("mlp.epochs", std::to_string(c.mlp.epochs));
  m.emplace_back("mlp.learning_rate", num(c.mlp.learning_rate));
  m.emplace_back("mlp.batch_size", std::to_string(c.mlp.batch_size));
  return m;
}

}  // namespace

ResultTable run_experiment(const ExperimentConfig& config) {
  config.check();
  ResultTable table;
  table.metadata = config_echo(config);

  std::optional<Dataset> csv_data;
  if (config.uses_csv()) {
    csv_data = load_csv(config.csv_path, config.schema);
    require_valid(*csv_data);
  }
  const bool also_leaky = config.record_leaky &&
                          config.alpha_protocol == AlphaProtocol::kValidation;
  ExperimentConfig leaky = config;
  leaky.alpha_protocol = AlphaProtocol::kTestLeaky;
  for (std::size_t r = 0; r < config.replicates; ++r) {
    const auto [train, test] =
        replicate_data(config, r, csv_data ? &*csv_data : nullptr);
    for (Method method : config.methods) {
      for (ModelKind model : config.models) {
        table.rows.push_back(run_cell(config, train, test, method, model, r));
        if (also_leaky && uses_alpha(method)) {
          table.leaky_rows.push_back(
              run_cell(leaky, train, test, method, model, r));
        }
      }
    }
  }
  auto order = [](const ResultRow& a, const ResultRow& b) {
    return std::tuple(a.method, a.model, a.replicate) <
           std::tuple(b.method, b.model, b.replicate);
  };
  std::stable_sort(table.rows.begin(), table.rows.end(), order);
  std::stable_sort(table.leaky_rows.begin(), table.leaky_rows.end(), order);
  return table;
}

void write_results_csv(std::ostream& out, const ResultTable& table) {
  out << kResultsHeader << '\n';
  for (const ResultRow& r : table.rows) {
    out << to_string(r.method) << ',' << to_string(r.model) << ','
        << r.replicate << ',' << format_value(r.alpha) << ','
        << format_value(r.eval.accuracy) << ','
        << format_value(r.eval.dp_gap_signed) << ','
        << format_value(r.eval.fairness) << ',' << r.train_size << ','
        << r.seed << '\n';
  }
}

void emit_results(const ResultTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_results_csv(out, table);
  if (!out) throw Error("failed writing '" + path + "'");
}

std::vector<ResultRow> parse_results_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kResultsHeader) {
    throw Error("results csv: unexpected header");
  }
  std::vector<ResultRow> rows;
  std::size_t line_no = 1;
  auto number = [&](const std::string& s) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) {
      throw Error("results csv line " + std::to_string(line_no) +
                  ": bad number '" + s + "'");
    }
    return v;
  };
  auto integer = [&](const std::string& s) {
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) {
      throw Error("results csv line " + std::to_string(line_no) +
                  ": bad integer '" + s + "'");
    }
    return v;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_csv_record(line, ',');
    if (f.size() != 9) {
      throw Error("results csv line " + std::to_string(line_no) +
                  ": expected 9 fields");
    }
    ResultRow r;
    r.method = parse_method(f[0]);
    r.model = parse_model_kind(f[1]);
    r.replicate = integer(f[2]);
    r.alpha = number(f[3]);
    r.eval.accuracy = number(f[4]);
    r.eval.dp_gap_signed = number(f[5]);
    r.eval.fairness = number(f[6]);
    r.train_size = integer(f[7]);
    r.seed = integer(f[8]);
    rows.push_back(r);
  }
  return rows;
}

std::vector<SummaryLine> summarize(const ResultTable& table) {
  std::vector<SummaryLine> out;
  for (const ResultRow& r : table.rows) {
    if (!r.error.empty()) continue;
    auto it = std::find_if(out.begin(), out.end(), [&](const SummaryLine& s) {
      return s.method == r.method && s.model == r.model;
    });
    if (it == out.end()) {
      out.push_back({r.method, r.model});
      it = std::prev(out.end());
    }
    ++it->n;
    it->accuracy_mean += r.eval.accuracy;
    it->fairness_mean += r.eval.fairness;
    it->dp_gap_mean += r.eval.dp_gap_signed;
  }
  for (SummaryLine& s : out) {
    const double n = static_cast<double>(s.n);
    s.accuracy_mean /= n;
    s.fairness_mean /= n;
    s.dp_gap_mean /= n;
  }
  for (const ResultRow& r : table.rows) {
    if (!r.error.empty()) continue;
    for (SummaryLine& s : out) {
      if (s.method != r.method || s.model != r.model) continue;
      s.accuracy_std += std::pow(r.eval.accuracy - s.accuracy_mean, 2);
      s.fairness_std += std::pow(r.eval.fairness - s.fairness_mean, 2);
    }
  }
  for (SummaryLine& s : out) {
    const double denom = s.n > 1 ? static_cast<double>(s.n - 1) : 1.0;
    s.accuracy_std = std::sqrt(s.accuracy_std / denom);
    s.fairness_std = std::sqrt(s.fairness_std / denom);
  }
  return out;
}

void print_summary(std::ostream& out, const ResultTable& table) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-14s %-7s %3s  %-17s  %-17s  %s\n", "method",
                "model", "n", "accuracy", "fairness", "mean dp_gap");
  out << buf;
  for (const SummaryLine& s : summarize(table)) {
    std::snprintf(buf, sizeof buf,
                  "%-14s %-7s %3zu  %.4f +- %.4f  %.4f +- %.4f  %+.4f\n",
                  to_string(s.method).c_str(), to_string(s.model).c_str(), s.n,
                  s.accuracy_mean, s.accuracy_std, s.fairness_mean,
                  s.fairness_std, s.dp_gap_mean);
    out << buf;
  }
  std::size_t failed = 0;
  for (const ResultRow& r : table.rows) {
    if (r.error.empty()) continue;
    ++failed;
    out << "error: " << to_string(r.method) << '/' << to_string(r.model)
        << " replicate " << r.replicate << ": " << r.error << '\n';
  }
  if (failed) out << failed << " cell(s) failed\n";
}

}  // namespace fsgm
