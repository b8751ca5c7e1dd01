#include "fsgm/metrics.hpp"

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "fsgm/error.hpp"

namespace fsgm {

double accuracy(std::span<const int> predictions, std::span<const int> labels) {
  if (predictions.size() != labels.size()) {
    throw Error("accuracy: " + std::to_string(predictions.size()) +
                " predictions vs " + std::to_string(labels.size()) +
                " labels");
  }
  if (predictions.empty()) throw Error("accuracy: empty input");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    hits += predictions[i] == labels[i];
  }
  return static_cast<double>(hits) / static_cast<double>(labels.size());
}

double dp_gap(std::span<const int> predictions, std::span<const int> groups) {
  if (predictions.size() != groups.size()) {
    throw Error("dp_gap: predictions and groups differ in length");
  }
  std::array<std::size_t, 2> size{}, positive{};
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (groups[i] != 0 && groups[i] != 1) {
      throw Error("dp_gap: group label out of range");
    }
    ++size[groups[i]];
    positive[groups[i]] += predictions[i] == 1;
  }
  if (size[0] == 0 || size[1] == 0) {
    throw Error("undefined DP gap: group " +
                std::string(size[0] == 0 ? "0" : "1") + " is empty");
  }
  return static_cast<double>(positive[0]) / static_cast<double>(size[0]) -
         static_cast<double>(positive[1]) / static_cast<double>(size[1]);
}

double fairness_score(std::span<const int> predictions,
                      std::span<const int> groups) {
  return 1.0 - std::abs(dp_gap(predictions, groups));
}

EvalResult evaluate_predictions(std::span<const int> predictions,
                                const Dataset& test) {
  if (predictions.size() != test.size()) {
    throw Error("evaluate: prediction count does not match test set");
  }
  std::vector<int> labels, groups;
  labels.reserve(test.size());
  groups.reserve(test.size());
  for (const Sample& s : test) {
    labels.push_back(s.y);
    groups.push_back(s.z);
  }
  EvalResult r;
  r.accuracy = accuracy(predictions, labels);
  r.dp_gap_signed = dp_gap(predictions, groups);
  r.fairness = 1.0 - std::abs(r.dp_gap_signed);
  for (std::size_t i = 0; i < groups.size(); ++i) {
    ++r.group_sizes[groups[i]];
    r.group_positive_predictions[groups[i]] += predictions[i] == 1;
  }
  return r;
}

EvalResult evaluate(const TrainedModel& model, const Dataset& test) {
  if (test.empty()) throw Error("evaluate: empty test set");
  return evaluate_predictions(predict(model, test), test);
}

}  // namespace fsgm
