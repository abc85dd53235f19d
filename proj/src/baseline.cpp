#include "ira/baseline.hpp"

#include <cmath>

#include "ira/dataset.hpp"
#include "ira/error.hpp"

namespace ira {

std::vector<double> default_perturbation_steps() {
  std::vector<double> steps;
  for (int s = -20; s <= 20; s += 5) steps.push_back(static_cast<double>(s));
  return steps;
}

PerturbationTable perturbation_table(const RegressionModel& model,
                                     std::span<const double> baseline_row,
                                     std::span<const double> steps,
                                     std::vector<std::string> names) {
  const std::size_t p = model.n_features();
  if (baseline_row.size() != p) {
    throw ConfigError("baseline row has " + std::to_string(baseline_row.size()) +
                      " values, model expects " + std::to_string(p));
  }
  if (names.empty()) {
    for (std::size_t i = 0; i < p; ++i) names.push_back("X" + std::to_string(i + 1));
  }
  if (names.size() != p) throw ConfigError("predictor name count does not match the model");

  PerturbationTable table;
  table.steps.assign(steps.begin(), steps.end());
  table.names = std::move(names);
  table.baseline_prediction = model.predict_row(baseline_row);
  const double base = table.baseline_prediction;
  if (base == 0.0) {
    throw DomainError("baseline prediction is zero; relative change is undefined");
  }

  Matrix batch(p * steps.size(), p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t s = 0; s < steps.size(); ++s) {
      auto row = batch.row(i * steps.size() + s);
      std::copy(baseline_row.begin(), baseline_row.end(), row.begin());
      row[i] = baseline_row[i] * (1.0 + steps[s] / 100.0);
    }
  }
  std::vector<double> predictions;
  try {
    predictions = model.predict(batch);
  } catch (const Error&) {
    for (std::size_t k = 0; k < batch.rows(); ++k) {
      try {
        (void)model.predict_row(batch.row(k));
      } catch (const Error& inner) {
        const std::size_t i = k / steps.size();
        throw ModelEvaluationError("model evaluation failed for predictor '" + table.names[i] +
                                   "' at " + format_double(steps[k % steps.size()]) +
                                   "%: " + inner.what());
      }
    }
    throw;
  }
  table.changes.assign(p, std::vector<double>(steps.size(), 0.0));
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t s = 0; s < steps.size(); ++s) {
      table.changes[i][s] = 100.0 * (predictions[i * steps.size() + s] - base) / base;
    }
  }
  return table;
}

}  // namespace ira
