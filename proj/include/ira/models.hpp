#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ira/dataset.hpp"
#include "ira/matrix.hpp"

namespace ira {

/// Batch-prediction interface consumed by the IRA engine.
///
/// Implementations must be deterministic and must not mutate observable state
/// in do_predict. Models whose predict may run concurrently report
/// concurrent() == true; the engine serializes calls to the others.
class RegressionModel {
 public:
  virtual ~RegressionModel() = default;

  /// Predicts one value per row. Throws ConfigError on a width mismatch and
  /// ModelEvaluationError (naming the row) on a non-finite output.
  std::vector<double> predict(const Matrix& batch) const;

  /// Single-row convenience wrapper around predict.
  double predict_row(std::span<const double> row) const;

  virtual std::size_t n_features() const = 0;
  virtual bool concurrent() const { return true; }
  /// Short human-readable specification, recorded in report headers.
  virtual std::string spec() const = 0;

 protected:
  virtual std::vector<double> do_predict(const Matrix& batch) const = 0;
};

/// y = sum_i coefficients[i] * x_i + intercept.
class LinearModel final : public RegressionModel {
 public:
  LinearModel(std::vector<double> coefficients, double intercept,
              std::vector<std::string> feature_names = {});

  std::size_t n_features() const override { return coefficients_.size(); }
  std::string spec() const override { return "linear"; }

  const std::vector<double>& coefficients() const noexcept { return coefficients_; }
  double intercept() const noexcept { return intercept_; }
  const std::vector<std::string>& feature_names() const noexcept { return names_; }

  /// Coefficient by feature name; throws ConfigError for an unknown name.
  double coefficient(const std::string& name) const;

  /// Linear predictor for one row, without validation.
  double evaluate(std::span<const double> row) const noexcept;

 protected:
  std::vector<double> do_predict(const Matrix& batch) const override;

 private:
  std::vector<double> coefficients_;
  double intercept_;
  std::vector<std::string> names_;
};

/// Inverse Box-Cox transform (lambda*T + 1)^(1/lambda), evaluated in log space.
/// Throws DomainError when lambda == 0 or lambda*T + 1 <= 0.
double box_cox_back_transform(double transformed, double lambda);

/// Linear model fitted on a Box-Cox transformed response; predictions are
/// back-transformed to the original response scale.
class BoxCoxLinearModel final : public RegressionModel {
 public:
  BoxCoxLinearModel(LinearModel inner, double lambda, std::string name = "boxcox-linear");

  std::size_t n_features() const override { return inner_.n_features(); }
  std::string spec() const override { return name_; }

  const LinearModel& inner() const noexcept { return inner_; }
  double lambda() const noexcept { return lambda_; }

 protected:
  std::vector<double> do_predict(const Matrix& batch) const override;

 private:
  LinearModel inner_;
  double lambda_;
  std::string name_;
};

/// Ordinary least squares with intercept, solved by column-pivoted Householder
/// QR. Throws SingularFitError when the design matrix is rank deficient.
LinearModel fit_ols(const Dataset& ds);

/// Coefficient of determination of `model` on the rows of `ds`.
double r_squared(const RegressionModel& model, const Dataset& ds);

}  // namespace ira
