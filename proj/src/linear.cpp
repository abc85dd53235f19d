#include <Eigen/Dense>
#include <cmath>

#include "ira/error.hpp"
#include "ira/models.hpp"

namespace ira {

LinearModel::LinearModel(std::vector<double> coefficients, double intercept,
                         std::vector<std::string> feature_names)
    : coefficients_(std::move(coefficients)),
      intercept_(intercept),
      names_(std::move(feature_names)) {
  if (coefficients_.empty()) throw ConfigError("linear model needs at least one coefficient");
  if (!names_.empty() && names_.size() != coefficients_.size()) {
    throw ConfigError("feature name count does not match coefficient count");
  }
  for (double c : coefficients_) {
    if (!std::isfinite(c)) throw ConfigError("linear model coefficients must be finite");
  }
  if (!std::isfinite(intercept_)) throw ConfigError("linear model intercept must be finite");
}

double LinearModel::coefficient(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return coefficients_[i];
  }
  throw ConfigError("model has no feature named '" + name + "'");
}

double LinearModel::evaluate(std::span<const double> row) const noexcept {
  double acc = intercept_;
  for (std::size_t i = 0; i < coefficients_.size(); ++i) acc += coefficients_[i] * row[i];
  return acc;
}

std::vector<double> LinearModel::do_predict(const Matrix& batch) const {
  std::vector<double> out(batch.rows());
  for (std::size_t r = 0; r < batch.rows(); ++r) out[r] = evaluate(batch.row(r));
  return out;
}

double box_cox_back_transform(double transformed, double lambda) {
  if (lambda == 0.0 || !std::isfinite(lambda)) {
    throw DomainError("Box-Cox back-transform needs a finite nonzero lambda");
  }
  const double base = lambda * transformed + 1.0;
  if (!(base > 0.0)) {
    throw DomainError("Box-Cox back-transform undefined at T = " + format_double(transformed) +
                      " (lambda*T + 1 = " + format_double(base) + " <= 0)");
  }
  // T reaches ~1e9 for realistic lambda; the direct power would lose range.
  return std::exp(std::log(base) / lambda);
}

BoxCoxLinearModel::BoxCoxLinearModel(LinearModel inner, double lambda, std::string name)
    : inner_(std::move(inner)), lambda_(lambda), name_(std::move(name)) {
  if (!(lambda_ > 0.0) || !std::isfinite(lambda_)) {
    throw ConfigError("Box-Cox lambda must be positive and finite");
  }
}

std::vector<double> BoxCoxLinearModel::do_predict(const Matrix& batch) const {
  std::vector<double> out(batch.rows());
  for (std::size_t r = 0; r < batch.rows(); ++r) {
    try {
      out[r] = box_cox_back_transform(inner_.evaluate(batch.row(r)), lambda_);
    } catch (const DomainError& e) {
      throw DomainError("batch row " + std::to_string(r) + ": " + e.what());
    }
  }
  return out;
}

LinearModel fit_ols(const Dataset& ds) {
  const auto& y = ds.response();
  const std::size_t n = ds.n_rows();
  const std::size_t p = ds.n_predictors();
  if (n <= p) {
    throw SingularFitError("OLS needs more observations (" + std::to_string(n) +
                           ") than predictors (" + std::to_string(p) + ")");
  }
  Eigen::MatrixXd design(n, p + 1);
  Eigen::VectorXd target(n);
  for (std::size_t r = 0; r < n; ++r) {
    design(r, 0) = 1.0;
    const auto row = ds.row(r);
    for (std::size_t c = 0; c < p; ++c) design(r, c + 1) = row[c];
    target(r) = y[r];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (static_cast<std::size_t>(qr.rank()) < p + 1) {
    throw SingularFitError("design matrix is rank deficient (rank " + std::to_string(qr.rank()) +
                           " < " + std::to_string(p + 1) + "); predictors are collinear");
  }
  const Eigen::VectorXd beta = qr.solve(target);
  std::vector<double> coefficients(p);
  for (std::size_t c = 0; c < p; ++c) coefficients[c] = beta(c + 1);
  return LinearModel(std::move(coefficients), beta(0), ds.predictor_names());
}

}  // namespace ira
