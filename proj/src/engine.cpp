#include "ira/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ira/error.hpp"
#include "ira/parallel.hpp"

namespace ira {

namespace {

// Upper bound on rows per predict call; always a whole number of backgrounds.
constexpr std::size_t kTargetBatchRows = 8192;

std::string predictor_label(const Dataset& ds, std::size_t index) {
  return "predictor '" + ds.predictor_names()[index] + "' (index " + std::to_string(index) + ")";
}

void fill_modified_rows(Matrix& batch, std::size_t first_row, std::span<const double> background,
                        std::size_t index, std::span<const double> grid) {
  for (std::size_t j = 0; j < grid.size(); ++j) {
    auto row = batch.row(first_row + j);
    std::copy(background.begin(), background.end(), row.begin());
    row[index] = grid[j];
  }
}

double range_of(std::span<const double> values) {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return *hi - *lo;
}

// Mean computed relative to the minimum so identical samples give exactly
// that value back.
double sample_mean(std::span<const double> samples) {
  const double base = *std::min_element(samples.begin(), samples.end());
  double acc = 0.0;
  for (double s : samples) acc += s - base;
  return base + acc / static_cast<double>(samples.size());
}

RepeatSummary summarize(std::vector<double> samples, const IraConfig& cfg) {
  RepeatSummary s;
  s.mean = sample_mean(samples);
  s.ci_lower = percentile(samples, cfg.ci_lo);
  s.ci_upper = percentile(samples, cfg.ci_hi);
  s.samples = std::move(samples);
  return s;
}

// samples[r][i] for repeats [0, repeats) and every predictor.
std::vector<std::vector<double>> run_repeats(const RegressionModel& model, const Dataset& ds,
                                             const IraConfig& cfg, std::size_t repeats) {
  cfg.validate();
  const std::size_t p = ds.n_predictors();
  if (model.n_features() != p) {
    throw ConfigError("model expects " + std::to_string(model.n_features()) +
                      " features but the dataset has " + std::to_string(p) + " predictors");
  }
  std::vector<std::vector<double>> grids(p);
  for (std::size_t i = 0; i < p; ++i) grids[i] = predictor_grid(ds, i, cfg);

  std::vector<std::vector<double>> samples(repeats, std::vector<double>(p, 0.0));
  const std::size_t threads = model.concurrent() ? cfg.threads : 1;
  parallel_for(repeats * p, threads, [&](std::size_t task) {
    const std::size_t r = task / p;
    const std::size_t i = task % p;
    samples[r][i] = predictor_ira(model, ds, i, grids[i], cfg, r);
  });
  return samples;
}

}  // namespace

std::string to_string(GridMode mode) {
  return mode == GridMode::linear ? "linear" : "unique";
}

GridMode parse_grid_mode(const std::string& text) {
  if (text == "linear") return GridMode::linear;
  if (text == "unique" || text == "unique_values") return GridMode::unique_values;
  throw ConfigError("unknown grid mode '" + text + "' (expected linear or unique)");
}

void IraConfig::validate() const {
  if (points < 2) throw ConfigError("number of interpolated points must be >= 2");
  if (background < 1) throw ConfigError("number of background samples must be >= 1");
  if (repeats < 1) throw ConfigError("number of repeats must be >= 1");
  if (!(ci_lo > 0.0 && ci_hi < 100.0 && ci_lo < ci_hi)) {
    throw ConfigError("CI percentiles must satisfy 0 < lo < hi < 100");
  }
}

const PredictorIra& IraReport::at(const std::string& name) const {
  for (const auto& p : predictors) {
    if (p.name == name) return p;
  }
  throw ConfigError("report has no predictor named '" + name + "'");
}

std::vector<std::size_t> IraReport::ranking() const {
  std::vector<std::size_t> order(predictors.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return predictors[a].ira > predictors[b].ira;
  });
  return order;
}

std::vector<double> interpolate_grid(double low, double high, std::size_t points) {
  if (points < 2) throw ConfigError("an interpolation grid needs at least 2 points");
  if (!(low <= high)) throw ConfigError("interpolation grid needs low <= high");
  std::vector<double> grid(points);
  const double span = high - low;
  const auto last = static_cast<double>(points - 1);
  for (std::size_t j = 0; j < points; ++j) {
    grid[j] = low + span * (static_cast<double>(j) / last);
  }
  grid.back() = high;
  return grid;
}

std::vector<double> unique_grid(const Dataset& ds, std::size_t index) {
  if (index >= ds.n_predictors()) {
    throw ConfigError("predictor index " + std::to_string(index) + " out of range");
  }
  auto values = ds.column(index);
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

std::vector<double> predictor_grid(const Dataset& ds, std::size_t index, const IraConfig& cfg) {
  const Range range = effective_range(ds, index, cfg.range_policy);
  if (cfg.grid_mode == GridMode::linear) return interpolate_grid(range.low, range.high, cfg.points);
  auto grid = unique_grid(ds, index);
  if (cfg.range_policy.mode() != RangePolicy::Mode::full) {
    std::erase_if(grid, [&](double v) { return v < range.low || v > range.high; });
    if (grid.empty()) {
      throw ConfigError("no observed values of " + predictor_label(ds, index) +
                        " fall inside the selected range");
    }
  }
  return grid;
}

rng::Stream background_stream(std::uint64_t seed, std::size_t repeat, std::size_t predictor) {
  return rng::Stream::derive(seed, rng::Domain::background, {repeat, predictor});
}

std::vector<std::size_t> sample_background_indices(std::size_t n_rows, std::size_t count,
                                                   rng::Stream& stream) {
  if (n_rows == 0) throw DataError("cannot sample background rows from an empty dataset");
  std::vector<std::size_t> idx(count);
  for (auto& i : idx) i = static_cast<std::size_t>(stream.index(n_rows));
  return idx;
}

Matrix sample_background(const Dataset& ds, std::size_t count, rng::Stream& stream) {
  const auto idx = sample_background_indices(ds.n_rows(), count, stream);
  Matrix rows(count, ds.n_predictors());
  for (std::size_t k = 0; k < count; ++k) {
    const auto src = ds.row(idx[k]);
    std::copy(src.begin(), src.end(), rows.row(k).begin());
  }
  return rows;
}

double predictor_ira(const RegressionModel& model, const Dataset& ds, std::size_t index,
                     std::span<const double> grid, const IraConfig& cfg, std::size_t repeat) {
  if (grid.empty()) throw ConfigError("empty grid for " + predictor_label(ds, index));
  // A predictor without spread cannot move the output.
  if (grid.front() == grid.back() &&
      std::all_of(grid.begin(), grid.end(), [&](double v) { return v == grid.front(); })) {
    return 0.0;
  }
  auto stream = background_stream(cfg.seed, repeat, index);
  const auto rows = sample_background_indices(ds.n_rows(), cfg.background, stream);

  const std::size_t m = grid.size();
  const std::size_t per_batch = std::max<std::size_t>(1, kTargetBatchRows / m);
  const std::size_t p = ds.n_predictors();
  double total = 0.0;
  for (std::size_t start = 0; start < rows.size(); start += per_batch) {
    const std::size_t stop = std::min(rows.size(), start + per_batch);
    Matrix batch((stop - start) * m, p);
    for (std::size_t k = start; k < stop; ++k) {
      fill_modified_rows(batch, (k - start) * m, ds.row(rows[k]), index, grid);
    }
    std::vector<double> predictions;
    try {
      predictions = model.predict(batch);
    } catch (const ProtocolError&) {
      throw;
    } catch (const Error& e) {
      // Localize the failing background row before reporting.
      for (std::size_t k = start; k < stop; ++k) {
        Matrix single(m, p);
        fill_modified_rows(single, 0, ds.row(rows[k]), index, grid);
        try {
          (void)model.predict(single);
        } catch (const Error& inner) {
          throw ModelEvaluationError("model evaluation failed for " + predictor_label(ds, index) +
                                     ", background row " + std::to_string(rows[k]) + ": " +
                                     inner.what());
        }
      }
      throw ModelEvaluationError("model evaluation failed for " + predictor_label(ds, index) +
                                 ": " + e.what());
    }
    for (std::size_t k = start; k < stop; ++k) {
      total += range_of(std::span<const double>(predictions).subspan((k - start) * m, m));
    }
  }
  return total / static_cast<double>(cfg.background);
}

IraReport ira_single(const RegressionModel& model, const Dataset& ds, const IraConfig& cfg) {
  const auto samples = run_repeats(model, ds, cfg, 1);
  IraReport report;
  for (std::size_t i = 0; i < ds.n_predictors(); ++i) {
    report.predictors.push_back({ds.predictor_names()[i], samples[0][i], std::nullopt});
  }
  return report;
}

IraReport ira_repeated(const RegressionModel& model, const Dataset& ds, const IraConfig& cfg) {
  if (cfg.repeats < 2) throw ConfigError("repeated IRA needs at least 2 repeats");
  const auto samples = run_repeats(model, ds, cfg, cfg.repeats);
  IraReport report;
  for (std::size_t i = 0; i < ds.n_predictors(); ++i) {
    std::vector<double> column(cfg.repeats);
    for (std::size_t r = 0; r < cfg.repeats; ++r) column[r] = samples[r][i];
    auto summary = summarize(std::move(column), cfg);
    const double mean = summary.mean;
    report.predictors.push_back({ds.predictor_names()[i], mean, std::move(summary)});
  }
  return report;
}

IraReport run_ira(const RegressionModel& model, const Dataset& ds, const IraConfig& cfg) {
  return cfg.repeats > 1 ? ira_repeated(model, ds, cfg) : ira_single(model, ds, cfg);
}

double percentile(std::span<const double> samples, double q) {
  if (samples.empty()) throw ConfigError("percentile of an empty sample");
  if (!(q >= 0.0 && q <= 100.0)) throw ConfigError("percentile must lie in [0, 100]");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  return quantile_sorted(sorted, q / 100.0);
}

double average_ci_width(const IraReport& report) {
  if (!report.is_repeated()) throw ConfigError("CI width needs a repeated report");
  double total = 0.0;
  for (const auto& p : report.predictors) total += p.repeated->ci_upper - p.repeated->ci_lower;
  return total / static_cast<double>(report.predictors.size());
}

std::vector<CiWidthPoint> ci_width_curve(const RegressionModel& model, const Dataset& ds,
                                         const IraConfig& cfg,
                                         std::span<const std::size_t> repeat_counts) {
  if (repeat_counts.empty()) throw ConfigError("CI width curve needs at least one repeat count");
  for (const auto c : repeat_counts) {
    if (c < 2) throw ConfigError("every repeat count of a CI curve must be >= 2");
  }
  const std::size_t longest = *std::max_element(repeat_counts.begin(), repeat_counts.end());
  const auto samples = run_repeats(model, ds, cfg, longest);
  std::vector<CiWidthPoint> curve;
  for (const auto count : repeat_counts) {
    IraReport report;
    for (std::size_t i = 0; i < ds.n_predictors(); ++i) {
      std::vector<double> column(count);
      for (std::size_t r = 0; r < count; ++r) column[r] = samples[r][i];
      auto summary = summarize(std::move(column), cfg);
      const double mean = summary.mean;
      report.predictors.push_back({ds.predictor_names()[i], mean, std::move(summary)});
    }
    curve.push_back({count, average_ci_width(report)});
  }
  return curve;
}

}  // namespace ira
