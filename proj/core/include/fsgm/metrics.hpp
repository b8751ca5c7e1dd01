#pragma once

#include <array>
#include <cstddef>
#include <span>

#include "fsgm/dataset.hpp"
#include "fsgm/model.hpp"

namespace fsgm {

struct EvalResult {
  double accuracy = 0.0;
  // Mean prediction of group 0 minus mean prediction of group 1.
  double dp_gap_signed = 0.0;
  // 1 - |dp_gap_signed|.
  double fairness = 0.0;
  std::array<std::size_t, 2> group_sizes{};
  std::array<std::size_t, 2> group_positive_predictions{};
};

double accuracy(std::span<const int> predictions, std::span<const int> labels);

// Demographic-parity gap over hard predictions. Throws "undefined DP gap"
// when either group is empty.
double dp_gap(std::span<const int> predictions, std::span<const int> groups);

double fairness_score(std::span<const int> predictions,
                      std::span<const int> groups);

EvalResult evaluate_predictions(std::span<const int> predictions,
                                const Dataset& test);
EvalResult evaluate(const TrainedModel& model, const Dataset& test);

}  // namespace fsgm
