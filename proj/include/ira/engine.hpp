#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ira/dataset.hpp"
#include "ira/matrix.hpp"
#include "ira/models.hpp"
#include "ira/rng.hpp"

namespace ira {

enum class GridMode { linear, unique_values };

std::string to_string(GridMode mode);
/// Parses "linear" or "unique"; throws ConfigError otherwise.
GridMode parse_grid_mode(const std::string& text);

struct IraConfig {
  /// Interpolated points per predictor (M).
  std::size_t points = 100;
  /// Background observations per predictor and repeat (K).
  std::size_t background = 200;
  /// Number of repeats (R); 1 is a single execution.
  std::size_t repeats = 1;
  std::uint64_t seed = 0;
  GridMode grid_mode = GridMode::linear;
  RangePolicy range_policy = RangePolicy::full();
  /// Confidence interval percentiles, in percent.
  double ci_lo = 2.5;
  double ci_hi = 97.5;
  /// Worker threads (0 = hardware concurrency). Never affects results.
  std::size_t threads = 0;

  /// Throws ConfigError when an invariant is violated.
  void validate() const;
};

struct RepeatSummary {
  double mean = 0.0;
  double ci_lower = 0.0;
  double ci_upper = 0.0;
  /// One IRA value per repeat, in repeat order.
  std::vector<double> samples;

  friend bool operator==(const RepeatSummary&, const RepeatSummary&) = default;
};

struct PredictorIra {
  std::string name;
  /// Headline value: the single-execution IRA, or the repeat mean when R > 1.
  double ira = 0.0;
  std::optional<RepeatSummary> repeated;

  friend bool operator==(const PredictorIra&, const PredictorIra&) = default;
};

struct IraReport {
  std::vector<PredictorIra> predictors;

  bool is_repeated() const noexcept {
    return !predictors.empty() && predictors.front().repeated.has_value();
  }
  /// Lookup by predictor name; throws ConfigError when absent.
  const PredictorIra& at(const std::string& name) const;
  /// Predictor indices ordered by descending IRA (ties keep column order).
  std::vector<std::size_t> ranking() const;

  friend bool operator==(const IraReport&, const IraReport&) = default;
};

/// `points` evenly spaced values from low to high, both endpoints included.
std::vector<double> interpolate_grid(double low, double high, std::size_t points);

/// Sorted distinct values observed in column `index`.
std::vector<double> unique_grid(const Dataset& ds, std::size_t index);

/// The sweep grid the engine uses for predictor `index` under `cfg`.
std::vector<double> predictor_grid(const Dataset& ds, std::size_t index, const IraConfig& cfg);

/// Substream for the background draws of one (repeat, predictor) pair.
rng::Stream background_stream(std::uint64_t seed, std::size_t repeat, std::size_t predictor);

/// K row indices drawn uniformly with replacement from [0, n_rows).
std::vector<std::size_t> sample_background_indices(std::size_t n_rows, std::size_t count,
                                                   rng::Stream& stream);

/// K full rows drawn uniformly with replacement from `ds`.
Matrix sample_background(const Dataset& ds, std::size_t count, rng::Stream& stream);

/// IRA of one predictor for one repeat: the mean over the background rows of
/// the prediction range as the predictor sweeps `grid`.
double predictor_ira(const RegressionModel& model, const Dataset& ds, std::size_t index,
                     std::span<const double> grid, const IraConfig& cfg, std::size_t repeat);

/// Single execution (repeat 0); cfg.repeats is ignored.
IraReport ira_single(const RegressionModel& model, const Dataset& ds, const IraConfig& cfg);

/// cfg.repeats independent executions summarized by mean and percentile CI.
/// Repeat r uses the same draws as in any other run with the same seed, so the
/// first R repeats of a longer run equal a run with R repeats.
IraReport ira_repeated(const RegressionModel& model, const Dataset& ds, const IraConfig& cfg);

/// Dispatches to ira_single or ira_repeated on cfg.repeats.
IraReport run_ira(const RegressionModel& model, const Dataset& ds, const IraConfig& cfg);

/// Percentile (q in [0, 100]) with linear interpolation between order statistics.
double percentile(std::span<const double> samples, double q);

struct CiWidthPoint {
  std::size_t repeats = 0;
  /// Mean over predictors of (ci_upper - ci_lower).
  double width = 0.0;

  friend bool operator==(const CiWidthPoint&, const CiWidthPoint&) = default;
};

/// Average CI width for each repeat count. Every count must be >= 2. The
/// repeats are computed once up to the largest count; each entry equals what
/// ira_repeated reports for that count.
std::vector<CiWidthPoint> ci_width_curve(const RegressionModel& model, const Dataset& ds,
                                         const IraConfig& cfg,
                                         std::span<const std::size_t> repeat_counts);

/// Average CI width of a repeated report.
double average_ci_width(const IraReport& report);

}  // namespace ira
