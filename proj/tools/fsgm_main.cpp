// fsgm: command-line front end for fair subgroup mixup experiments.
//
//   fsgm run      --scenario unbalanced-groups --seed 7 --out results.csv
//   fsgm run      --config law.cfg --csv law.csv --seed 7 --out law.csv.out
//   fsgm generate --scenario unbalanced-class --seed 3 --out data.csv
//   fsgm augment  --scenario unbalanced-groups --seed 3 --out aug.csv
//   fsgm train    --scenario unbalanced-groups --seed 3 --save model.json
//   fsgm predict  --model model.json --data data.csv

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fsgm/config.hpp"
#include "fsgm/csv.hpp"
#include "fsgm/error.hpp"
#include "fsgm/experiment.hpp"
#include "fsgm/metrics.hpp"
#include "fsgm/model.hpp"
#include "fsgm/random.hpp"
#include "fsgm/synth.hpp"

namespace {

// Options shared by every subcommand that needs a dataset and a config.
struct CommonOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::string scenario;
  std::string csv;

  void attach(CLI::App* app) {
    app->add_option("-c,--config", config_path, "key = value config file");
    app->add_option("--set", overrides, "override a config key (key=value)")
        ->take_all();
    app->add_option("--seed", seed, "master seed");
    app->add_option("--scenario", scenario,
                    "synthetic preset: unbalanced-groups, unbalanced-class, "
                    "underrepresented-subgroup");
    app->add_option("--csv", csv, "tabular dataset (schema via csv.* keys)");
  }

  fsgm::ExperimentConfig resolve() const {
    fsgm::ExperimentConfig config;
    if (!config_path.empty()) {
      fsgm::apply_config(fsgm::load_config_file(config_path), config);
      // data.csv inside a config file is relative to that file.
      const std::filesystem::path csv_path(config.csv_path);
      if (!config.csv_path.empty() && csv_path.is_relative()) {
        config.csv_path =
            (std::filesystem::path(config_path).parent_path() / csv_path)
                .string();
      }
    }
    fsgm::ConfigEntries entries;
    for (const auto& o : overrides) {
      const auto eq = o.find('=');
      if (eq == std::string::npos) {
        throw fsgm::Error("--set expects key=value, got '" + o + "'");
      }
      entries.emplace_back(o.substr(0, eq), o.substr(eq + 1));
    }
    fsgm::apply_config(entries, config);
    if (seed) config.seed = *seed;
    if (!scenario.empty()) {
      config.scenario = scenario;
      config.csv_path.clear();
    }
    if (!csv.empty()) config.csv_path = csv;
    return config;
  }
};

fsgm::Dataset load_training_data(const fsgm::ExperimentConfig& config) {
  if (config.uses_csv()) {
    fsgm::Dataset data = fsgm::load_csv(config.csv_path, config.schema);
    fsgm::require_valid(data);
    return data;
  }
  fsgm::ScenarioConfig sc = config.scenario_config();
  sc.seed = fsgm::derive_seed(config.seed, fsgm::StreamId::kDataGen);
  return fsgm::gen_conditional_gaussian(sc);
}

void write_meta(const fsgm::ResultTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw fsgm::Error("cannot open '" + path + "' for writing");
  out << "# resolved configuration of the run that produced the results\n";
  for (const auto& [key, value] : table.metadata) {
    out << key << " = " << value << '\n';
  }
}

fsgm::MethodParams method_params(const fsgm::ExperimentConfig& config,
                                 const std::string& method, double alpha) {
  fsgm::MethodParams p;
  p.method = fsgm::parse_method(method);
  p.alpha = alpha;
  p.pairs = config.resolved_pairs();
  p.k = config.k;
  p.standardize_knn = config.resolved_standardize_knn();
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fair subgroup mixup: augmentation, baselines and evaluation"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  std::string run_out;
  std::optional<std::size_t> replicates;
  std::vector<std::string> methods, models;
  bool leaky = false;
  auto* run = app.add_subcommand("run", "run the methods x models experiment");
  run_opts.attach(run);
  run->add_option("-o,--out", run_out, "results CSV path")->required();
  run->add_option("--replicates", replicates, "independent replicates");
  run->add_option("--methods", methods,
                  "original, fsgm, vanilla-mixup, group-swap")
      ->delimiter(',');
  run->add_option("--models", models, "forest, mlp")->delimiter(',');
  run->add_flag("--leaky-alpha", leaky,
                "select alpha on the test set (leaks test data)");
  bool both = false;
  run->add_flag("--record-leaky", both,
                "also write <out>.leaky.csv with test-selected alpha");

  CommonOptions gen_opts;
  std::string gen_out;
  std::size_t test_per_subgroup = 0;
  auto* gen = app.add_subcommand("generate", "write a synthetic scenario");
  gen_opts.attach(gen);
  gen->add_option("-o,--out", gen_out, "dataset CSV path")->required();
  gen->add_option("--test-per-subgroup", test_per_subgroup,
                  "write a balanced held-out set with this many rows per cell");

  CommonOptions aug_opts;
  std::string aug_out, aug_method = "fsgm";
  double aug_alpha = 1.0;
  auto* aug = app.add_subcommand("augment", "write D plus its augmentation");
  aug_opts.attach(aug);
  aug->add_option("-o,--out", aug_out, "augmented dataset CSV")->required();
  aug->add_option("--method", aug_method,
                  "fsgm, vanilla-mixup, group-swap or original (bootstrap)");
  aug->add_option("--alpha", aug_alpha, "Beta(alpha, alpha) parameter");

  CommonOptions train_opts;
  std::string save_path, train_method = "original", train_model = "forest";
  double train_alpha = 1.0;
  auto* train = app.add_subcommand("train", "fit one model and save it as JSON");
  train_opts.attach(train);
  train->add_option("--save", save_path, "model JSON path")->required();
  train->add_option("--method", train_method, "training-set method");
  train->add_option("--model", train_model, "forest or mlp");
  train->add_option("--alpha", train_alpha, "mixup alpha");

  CommonOptions pred_opts;
  std::string model_path, data_path, pred_out;
  auto* pred = app.add_subcommand("predict", "score a saved model on a CSV");
  pred_opts.attach(pred);
  pred->add_option("--model", model_path, "model JSON")->required();
  pred->add_option("--data", data_path,
                   "dataset CSV (x1..xd,y,z dump unless csv.* keys given)")
      ->required();
  pred->add_option("-o,--out", pred_out, "optional predictions CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      fsgm::ExperimentConfig config = run_opts.resolve();
      if (replicates) config.replicates = *replicates;
      if (!methods.empty()) {
        config.methods.clear();
        for (const auto& m : methods) config.methods.push_back(fsgm::parse_method(m));
      }
      if (!models.empty()) {
        config.models.clear();
        for (const auto& m : models) config.models.push_back(fsgm::parse_model_kind(m));
      }
      if (both) config.record_leaky = true;
      if (leaky) config.alpha_protocol = fsgm::AlphaProtocol::kTestLeaky;
      const fsgm::ResultTable table = fsgm::run_experiment(config);
      fsgm::emit_results(table, run_out);
      write_meta(table, run_out + ".meta");
      fsgm::print_summary(std::cout, table);
      if (!table.leaky_rows.empty()) {
        fsgm::ResultTable leaky_table{table.leaky_rows, {}, table.metadata};
        fsgm::emit_results(leaky_table, run_out + ".leaky.csv");
        std::cout << "\nalpha selected on test data (leaky), written to "
                  << run_out << ".leaky.csv\n";
        fsgm::print_summary(std::cout, leaky_table);
      }
      if (config.alpha_protocol == fsgm::AlphaProtocol::kTestLeaky) {
        std::cout << "note: alpha was selected on test data (--leaky-alpha)\n";
      }
      std::cout << "wrote " << run_out << " (" << table.rows.size()
                << " rows)\n";
    } else if (*gen) {
      const fsgm::ExperimentConfig config = gen_opts.resolve();
      fsgm::ScenarioConfig sc = config.scenario_config();
      sc.seed = fsgm::derive_seed(config.seed, fsgm::StreamId::kDataGen);
      if (test_per_subgroup > 0) {
        sc = fsgm::balanced_test_config(
            sc, test_per_subgroup,
            fsgm::derive_seed(config.seed, fsgm::StreamId::kTestGen));
      }
      const fsgm::Dataset data = fsgm::gen_conditional_gaussian(sc);
      const std::vector<fsgm::Origin> origins(data.size(),
                                              fsgm::Origin::kOriginal);
      fsgm::write_dataset_csv(gen_out, data, origins);
      std::cout << "wrote " << data.size() << " rows to " << gen_out << '\n';
    } else if (*aug) {
      const fsgm::ExperimentConfig config = aug_opts.resolve();
      const fsgm::Dataset data = load_training_data(config);
      const fsgm::TrainingSet set = fsgm::build_training_set(
          data, method_params(config, aug_method, aug_alpha), config.seed);
      fsgm::write_dataset_csv(aug_out, set.data, set.origins);
      std::cout << "wrote " << set.data.size() << " rows (" << data.size()
                << " original) to " << aug_out << '\n';
    } else if (*train) {
      const fsgm::ExperimentConfig config = train_opts.resolve();
      const fsgm::Dataset data = load_training_data(config);
      fsgm::ModelSpec spec{fsgm::parse_model_kind(train_model), config.forest,
                           config.mlp};
      const fsgm::MethodRun result = fsgm::run_method(
          data, method_params(config, train_method, train_alpha), spec,
          config.seed);
      fsgm::save_model(result.model, save_path);
      std::cout << "trained " << train_model << " on " << result.train_size
                << " rows; saved " << save_path << '\n';
    } else if (*pred) {
      fsgm::ExperimentConfig config = pred_opts.resolve();
      const fsgm::TrainedModel model = fsgm::load_model(model_path);
      const fsgm::CsvSchema schema = config.schema.features.empty()
                                         ? fsgm::dump_schema(model.dim())
                                         : config.schema;
      const fsgm::Dataset data = fsgm::load_csv(data_path, schema);
      const std::vector<int> predictions = fsgm::predict(model, data);
      if (!pred_out.empty()) {
        std::ofstream out(pred_out);
        out << "prediction\n";
        for (int p : predictions) out << p << '\n';
      }
      const fsgm::EvalResult r = fsgm::evaluate_predictions(predictions, data);
      std::cout << "accuracy " << r.accuracy << "\ndp_gap_signed "
                << r.dp_gap_signed << "\nfairness " << r.fairness << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "fsgm: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
