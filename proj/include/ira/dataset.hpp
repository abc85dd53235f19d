#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ira/matrix.hpp"

namespace ira {

/// Closed interval [low, high] over which a predictor is swept.
struct Range {
  double low = 0.0;
  double high = 0.0;

  double width() const noexcept { return high - low; }
  friend bool operator==(const Range&, const Range&) = default;
};

/// Descriptive statistics of one column. sd uses the n-1 denominator.
struct ColumnStats {
  std::string name;
  double mean = 0.0;
  double sd = 0.0;
  double min = 0.0;
  double median = 0.0;
  double max = 0.0;
};

/// Which part of a predictor's observed values the analysis sweeps.
///
/// `full` spans [min, max]; `quantile` spans the empirical [lo, hi] quantiles;
/// `fixed` carries explicit per-predictor bounds, for analyses whose reference
/// ranges come from a training set that is not at hand (the feed-mill model).
class RangePolicy {
 public:
  enum class Mode { full, quantile, fixed };

  static RangePolicy full() { return RangePolicy{}; }
  static RangePolicy quantile(double lo, double hi);
  static RangePolicy fixed(std::vector<Range> bounds);

  Mode mode() const noexcept { return mode_; }
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  const std::vector<Range>& bounds() const noexcept { return bounds_; }

  /// Compact text form: "full", "quantile(0.25,0.75)" or "fixed".
  std::string to_string() const;

 private:
  Mode mode_ = Mode::full;
  double lo_ = 0.0;
  double hi_ = 1.0;
  std::vector<Range> bounds_;
};

/// Immutable table of finite numeric observations with an optional response.
class Dataset {
 public:
  /// Validates every invariant: n >= 2, p >= 1, unique nonempty names, finite
  /// values, response length equal to n. Throws DataError otherwise.
  Dataset(std::vector<std::string> predictor_names, Matrix values,
          std::optional<std::vector<double>> response = std::nullopt,
          std::optional<std::string> response_name = std::nullopt);

  std::size_t n_rows() const noexcept { return values_.rows(); }
  std::size_t n_predictors() const noexcept { return values_.cols(); }

  const std::vector<std::string>& predictor_names() const noexcept { return names_; }
  const Matrix& values() const noexcept { return values_; }
  std::span<const double> row(std::size_t r) const noexcept { return values_.row(r); }
  std::vector<double> column(std::size_t c) const { return values_.column(c); }

  bool has_response() const noexcept { return response_.has_value(); }
  /// Throws DataError when the dataset carries no response.
  const std::vector<double>& response() const;
  const std::optional<std::string>& response_name() const noexcept { return response_name_; }

  /// Index of a predictor by name, if present.
  std::optional<std::size_t> find_predictor(const std::string& name) const;

 private:
  std::vector<std::string> names_;
  Matrix values_;
  std::optional<std::vector<double>> response_;
  std::optional<std::string> response_name_;
};

/// Reads a strict numeric CSV (header row, comma separator, no quoting).
/// When `response_name` is given that column becomes the response.
Dataset load_csv(const std::filesystem::path& path,
                 const std::optional<std::string>& response_name = std::nullopt);

/// Parses CSV text; `source` names the input in error messages.
Dataset parse_csv(std::string_view text,
                  const std::optional<std::string>& response_name = std::nullopt,
                  std::string_view source = "<memory>");

/// Writes predictors then the response (if any) with 17 significant digits, so
/// load_csv reproduces every value exactly.
void write_csv(const Dataset& ds, const std::filesystem::path& path);
std::string to_csv(const Dataset& ds);

/// Formats a double with 17 significant digits (exact round trip).
std::string format_double(double value);

/// Stats of one column of values. Requires a nonempty input.
ColumnStats column_stats(std::span<const double> values, std::string name = {});

/// Stats for every predictor, followed by the response when present.
std::vector<ColumnStats> describe(const Dataset& ds);

/// Empirical quantile with linear interpolation between order statistics at
/// zero-based position q*(n-1). `sorted` must be ascending and nonempty.
double quantile_sorted(std::span<const double> sorted, double q);

/// The sweep interval of predictor `index` under `policy`.
Range effective_range(const Dataset& ds, std::size_t index, const RangePolicy& policy);

/// Per-column arithmetic means of the predictors.
std::vector<double> column_means(const Dataset& ds);

}  // namespace ira
