#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fsgm/augment.hpp"
#include "fsgm/csv.hpp"
#include "fsgm/dataset.hpp"
#include "fsgm/metrics.hpp"
#include "fsgm/model.hpp"
#include "fsgm/synth.hpp"

namespace fsgm {

enum class Method { kOriginal, kFsgm, kVanillaMixup, kGroupSwap };

std::string to_string(Method method);
Method parse_method(const std::string& text);
bool uses_alpha(Method method);

// Default mix pairs per scenario: the three synthetic presets and
// "law-school" for tabular data. Throws for unknown names.
std::vector<MixPair> default_pairs(const std::string& scenario);

// Stratified by subgroup: every (y, z) cell with at least two members lands
// in both parts. The held-out total is round(fraction * T), apportioned over
// cells by largest remainder; keeping small cells on both sides can move it.
std::pair<Dataset, Dataset> train_test_split(const Dataset& dataset,
                                             double test_fraction,
                                             std::uint64_t seed);

struct MethodParams {
  Method method = Method::kOriginal;
  double alpha = 1.0;
  std::vector<MixPair> pairs;  // fsgm only
  std::size_t k = 5;           // fsgm only
  bool standardize_knn = false;
};

// The 2T-row training set a method hands to the model, with provenance.
struct TrainingSet {
  Dataset data;
  std::vector<Origin> origins;
};

// Augmentation methods append T new rows; "original" bootstraps to 2T.
TrainingSet build_training_set(const Dataset& train, const MethodParams& params,
                               std::uint64_t seed);

struct MethodRun {
  TrainedModel model;
  std::size_t train_size = 0;
};

// Builds the training set, enforces |training set| == 2T, fits the model.
// The model stream is derived from `seed` independently of the method, so all
// methods sharing a seed share model initialization.
MethodRun run_method(const Dataset& train, const MethodParams& params,
                     const ModelSpec& spec, std::uint64_t seed);

struct AlphaScore {
  double alpha = 0.0;
  double accuracy = 0.0;
  double fairness = 0.0;
  double score() const { return accuracy + fairness; }
};

struct AlphaSearchResult {
  double chosen = 0.0;
  std::vector<AlphaScore> scores;  // grid order, ascending alpha
};

// For each alpha, fits on `fit` and scores accuracy + fairness on `score`;
// returns the argmax with ties going to the smaller alpha.
AlphaSearchResult score_alpha_grid(const Dataset& fit, const Dataset& score,
                                   const MethodParams& params,
                                   const ModelSpec& spec,
                                   std::vector<double> grid,
                                   std::uint64_t seed);

// Validation protocol: scores the grid on an internal stratified split of
// `train`; the held-out test data is never consulted.
AlphaSearchResult alpha_search(const Dataset& train, const MethodParams& params,
                               const ModelSpec& spec,
                               const std::vector<double>& grid,
                               double validation_fraction, std::uint64_t seed);

enum class AlphaProtocol {
  kValidation,
  // Selects alpha by test-set accuracy + fairness. Leaks test data.
  kTestLeaky,
};

struct ExperimentConfig {
  // Data: a synthetic preset, or a CSV file when csv_path is non-empty.
  std::string scenario = "unbalanced-groups";
  std::optional<double> class_shift;
  std::optional<double> group_shift;
  std::optional<double> angle;
  std::optional<std::size_t> dim;
  std::size_t test_per_subgroup = 500;

  std::string csv_path;
  CsvSchema schema;
  double test_fraction = 0.3;

  std::vector<Method> methods = {Method::kOriginal, Method::kFsgm,
                                 Method::kVanillaMixup, Method::kGroupSwap};
  std::vector<ModelKind> models = {ModelKind::kForest, ModelKind::kMlp};
  ForestSpec forest;
  MlpSpec mlp;

  std::size_t replicates = 5;
  std::vector<double> alpha_grid = {0.1, 0.5, 1.0, 2.0, 4.0};
  AlphaProtocol alpha_protocol = AlphaProtocol::kValidation;
  double validation_fraction = 0.3;
  // Under the validation protocol, also rerun the alpha methods with the
  // test-selected alpha and keep those rows in ResultTable::leaky_rows.
  bool record_leaky = false;

  // Empty selects default_pairs() for the scenario ("law-school" for CSV).
  std::vector<MixPair> pairs;
  std::size_t k = 5;
  // Unset: on for CSV data, off for synthetic data.
  std::optional<bool> standardize_knn;

  std::uint64_t seed = 0;

  void check() const;
  bool uses_csv() const { return !csv_path.empty(); }
  std::vector<MixPair> resolved_pairs() const;
  bool resolved_standardize_knn() const { return standardize_knn.value_or(uses_csv()); }
  ScenarioConfig scenario_config() const;
};

struct ResultRow {
  Method method = Method::kOriginal;
  ModelKind model = ModelKind::kForest;
  std::size_t replicate = 0;
  double alpha = 0.0;  // 0 for methods without a mixing parameter
  EvalResult eval;
  std::size_t train_size = 0;
  std::uint64_t seed = 0;  // replicate seed
  std::string error;       // non-empty marks a failed cell
};

struct ResultTable {
  std::vector<ResultRow> rows;
  // Alpha methods rerun with alpha chosen on the test set; see record_leaky.
  std::vector<ResultRow> leaky_rows;
  // Resolved configuration echo, as config-file keys.
  std::vector<std::pair<std::string, std::string>> metadata;
};

std::uint64_t replicate_seed(std::uint64_t master_seed, std::size_t replicate);

// Train and test data of one replicate; shared by every method and model.
std::pair<Dataset, Dataset> replicate_data(const ExperimentConfig& config,
                                           std::size_t replicate,
                                           const Dataset* csv_data);

ResultRow run_cell(const ExperimentConfig& config, const Dataset& train,
                   const Dataset& test, Method method, ModelKind model,
                   std::size_t replicate);

// Every (replicate, method, model) cell, sorted by (method, model, replicate).
// A failing cell becomes an error row and the run continues.
ResultTable run_experiment(const ExperimentConfig& config);

inline constexpr const char* kResultsHeader =
    "method,model,replicate,alpha,accuracy,dp_gap_signed,fairness,train_size,"
    "seed";

void write_results_csv(std::ostream& out, const ResultTable& table);
void emit_results(const ResultTable& table, const std::string& path);
std::vector<ResultRow> parse_results_csv(std::istream& in);

struct SummaryLine {
  Method method;
  ModelKind model;
  std::size_t n = 0;
  double accuracy_mean = 0.0, accuracy_std = 0.0;
  double fairness_mean = 0.0, fairness_std = 0.0;
  double dp_gap_mean = 0.0;
};

// Mean and sample standard deviation per (method, model) over successful rows.
std::vector<SummaryLine> summarize(const ResultTable& table);
void print_summary(std::ostream& out, const ResultTable& table);

}  // namespace fsgm
