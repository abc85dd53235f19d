#include "ira/models.hpp"

#include <cmath>

#include "ira/error.hpp"

namespace ira {

std::vector<double> RegressionModel::predict(const Matrix& batch) const {
  if (batch.rows() > 0 && batch.cols() != n_features()) {
    throw ConfigError("batch has " + std::to_string(batch.cols()) +
                      " columns but the model expects " + std::to_string(n_features()));
  }
  auto out = do_predict(batch);
  if (out.size() != batch.rows()) {
    throw ModelEvaluationError("model returned " + std::to_string(out.size()) +
                               " predictions for " + std::to_string(batch.rows()) + " rows");
  }
  for (std::size_t r = 0; r < out.size(); ++r) {
    if (!std::isfinite(out[r])) {
      throw ModelEvaluationError("non-finite prediction at batch row " + std::to_string(r));
    }
  }
  return out;
}

double RegressionModel::predict_row(std::span<const double> row) const {
  Matrix one(1, row.size(), std::vector<double>(row.begin(), row.end()));
  return predict(one).front();
}

double r_squared(const RegressionModel& model, const Dataset& ds) {
  const auto& y = ds.response();
  const auto pred = model.predict(ds.values());
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    ss_res += (y[i] - pred[i]) * (y[i] - pred[i]);
    ss_tot += (y[i] - mean) * (y[i] - mean);
  }
  return ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0);
}

}  // namespace ira
