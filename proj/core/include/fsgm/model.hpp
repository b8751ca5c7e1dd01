#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fsgm/dataset.hpp"
#include "fsgm/forest.hpp"
#include "fsgm/mlp.hpp"

namespace fsgm {

enum class ModelKind { kForest, kMlp };

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& text);

struct ModelSpec {
  ModelKind kind = ModelKind::kForest;
  ForestSpec forest;
  MlpSpec mlp;
};

// A fitted classifier f : X -> {0,1}. Group labels are never part of its
// input.
class TrainedModel {
 public:
  explicit TrainedModel(Forest forest) : model_(std::move(forest)) {}
  explicit TrainedModel(Mlp mlp) : model_(std::move(mlp)) {}

  ModelKind kind() const;
  std::size_t dim() const;

  int predict(std::span<const double> x) const;

  const Forest* forest() const { return std::get_if<Forest>(&model_); }
  const Mlp* mlp() const { return std::get_if<Mlp>(&model_); }

 private:
  std::variant<Forest, Mlp> model_;
};

TrainedModel train_model(const Dataset& train, const ModelSpec& spec);

std::vector<int> predict(const TrainedModel& model,
                         std::span<const std::vector<double>> features);
std::vector<int> predict(const TrainedModel& model, const Dataset& data);

// JSON form with a fixed field order:
//   {"format": "fsgm-model", "version": 1, "kind": ..., "dim": ..., ...}
// Forests add "trees": [[[feature, threshold, left, right, label], ...], ...];
// MLPs add "hidden_units", "input_mean", "input_scale", "parameters".
std::string model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const std::string& text);

void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);

}  // namespace fsgm
