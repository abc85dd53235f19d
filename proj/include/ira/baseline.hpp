#pragma once

#include <span>
#include <string>
#include <vector>

#include "ira/models.hpp"

namespace ira {

/// Percent change of the prediction when each predictor alone is scaled by
/// (1 + step/100) around a baseline row.
struct PerturbationTable {
  std::vector<double> steps;
  std::vector<std::string> names;
  /// changes[i][s]: percent output change for predictor i at steps[s].
  std::vector<std::vector<double>> changes;
  double baseline_prediction = 0.0;
};

/// -20, -15, ..., +20.
std::vector<double> default_perturbation_steps();

/// Throws DomainError when the baseline prediction is zero, and
/// ModelEvaluationError (naming predictor and step) when a perturbed point
/// cannot be evaluated.
PerturbationTable perturbation_table(const RegressionModel& model,
                                     std::span<const double> baseline_row,
                                     std::span<const double> steps,
                                     std::vector<std::string> names = {});

}  // namespace ira
