#include "fsgm/model.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fsgm/error.hpp"

namespace fsgm {

using json = nlohmann::ordered_json;

std::string to_string(ModelKind kind) {
  return kind == ModelKind::kForest ? "forest" : "mlp";
}

ModelKind parse_model_kind(const std::string& text) {
  if (text == "forest" || text == "rf") return ModelKind::kForest;
  if (text == "mlp") return ModelKind::kMlp;
  throw Error("unknown model '" + text + "' (expected forest or mlp)");
}

ModelKind TrainedModel::kind() const {
  return std::holds_alternative<Forest>(model_) ? ModelKind::kForest
                                                : ModelKind::kMlp;
}

std::size_t TrainedModel::dim() const {
  return std::visit(
      [](const auto& m) {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, Forest>) {
          return m.dim();
        } else {
          return m.input_dim();
        }
      },
      model_);
}

int TrainedModel::predict(std::span<const double> x) const {
  return std::visit([&](const auto& m) { return m.predict(x); }, model_);
}

TrainedModel train_model(const Dataset& train, const ModelSpec& spec) {
  if (spec.kind == ModelKind::kForest) {
    return TrainedModel(train_forest(train, spec.forest));
  }
  return TrainedModel(train_mlp(train, spec.mlp));
}

std::vector<int> predict(const TrainedModel& model,
                         std::span<const std::vector<double>> features) {
  std::vector<int> out;
  out.reserve(features.size());
  for (const auto& row : features) {
    if (row.size() != model.dim()) {
      throw Error("predict: row has " + std::to_string(row.size()) +
                  " features, model expects " + std::to_string(model.dim()));
    }
    out.push_back(model.predict(row));
  }
  return out;
}

std::vector<int> predict(const TrainedModel& model, const Dataset& data) {
  std::vector<int> out;
  out.reserve(data.size());
  for (const Sample& s : data) {
    if (s.x.size() != model.dim()) {
      throw Error("predict: row has " + std::to_string(s.x.size()) +
                  " features, model expects " + std::to_string(model.dim()));
    }
    out.push_back(model.predict(s.x));
  }
  return out;
}

std::string model_to_json(const TrainedModel& model) {
  json j;
  j["format"] = "fsgm-model";
  j["version"] = 1;
  j["kind"] = to_string(model.kind());
  j["dim"] = model.dim();
  if (const Forest* forest = model.forest()) {
    json trees = json::array();
    for (const DecisionTree& tree : forest->trees()) {
      json nodes = json::array();
      for (const auto& n : tree.nodes()) {
        nodes.push_back({n.feature, n.threshold, n.left, n.right, n.label});
      }
      trees.push_back(std::move(nodes));
    }
    j["trees"] = std::move(trees);
  } else {
    const Mlp& mlp = *model.mlp();
    j["hidden_units"] = mlp.hidden_units();
    const auto mean = mlp.input_transform().mean();
    const auto scale = mlp.input_transform().scale();
    j["input_mean"] = std::vector<double>(mean.begin(), mean.end());
    j["input_scale"] = std::vector<double>(scale.begin(), scale.end());
    const auto params = mlp.parameters();
    j["parameters"] = std::vector<double>(params.begin(), params.end());
  }
  return j.dump();
}

TrainedModel model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
    if (j.at("format") != "fsgm-model" || j.at("version") != 1) {
      throw Error("not an fsgm-model v1 document");
    }
    const auto dim = j.at("dim").get<std::size_t>();
    if (parse_model_kind(j.at("kind").get<std::string>()) ==
        ModelKind::kForest) {
      std::vector<DecisionTree> trees;
      for (const json& nodes : j.at("trees")) {
        std::vector<DecisionTree::Node> parsed;
        for (const json& n : nodes) {
          parsed.push_back({n.at(0).get<int>(), n.at(1).get<double>(),
                            n.at(2).get<int>(), n.at(3).get<int>(),
                            n.at(4).get<int>()});
        }
        trees.emplace_back(std::move(parsed));
      }
      return TrainedModel(Forest(dim, std::move(trees)));
    }
    Standardizer transform(j.at("input_mean").get<std::vector<double>>(),
                           j.at("input_scale").get<std::vector<double>>());
    return TrainedModel(Mlp(dim, j.at("hidden_units").get<std::size_t>(),
                            j.at("parameters").get<std::vector<double>>(),
                            std::move(transform)));
  } catch (const json::exception& e) {
    throw Error(std::string("malformed model JSON: ") + e.what());
  }
}

void save_model(const TrainedModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << model_to_json(model) << '\n';
  if (!out) throw Error("failed writing '" + path + "'");
}

TrainedModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return model_from_json(buffer.str());
}

}  // namespace fsgm
