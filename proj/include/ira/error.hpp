#pragma once

#include <stdexcept>
#include <string>

namespace ira {

/// Base of every error raised by the library. The CLI maps these to exit code 1,
/// except ConfigError which is a usage problem (exit code 2).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters: bad IraConfig, RangePolicy, hyperparameters, CLI values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed or unreadable input data.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Least-squares design matrix without full column rank.
class SingularFitError : public Error {
 public:
  using Error::Error;
};

/// Input outside a function's mathematical domain (e.g. Box-Cox with lambda*T + 1 <= 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A model failed to produce a finite prediction.
class ModelEvaluationError : public Error {
 public:
  using Error::Error;
};

/// Violation of the external predict-server wire protocol.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

}  // namespace ira
