// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ira/baseline.hpp"
#include "ira/cli.hpp"
#include "ira/engine.hpp"
#include "ira/feed_mill.hpp"
#include "ira/forest.hpp"
#include "ira/models.hpp"
#include "ira/synth.hpp"
#include "test_support.hpp"

using namespace ira;

namespace {

// Tolerances.
constexpr double kLinearRelTol = 1e-9;
constexpr double kLinearMaxSeconds = 10.0;
constexpr double kLinearBand = 0.25;
constexpr double kForestSeparation = 3.0;
constexpr double kForestX5Low = 18.0;
constexpr double kForestX5High = 34.0;
constexpr double kForestMaxSeconds = 300.0;
constexpr double kRepeatMeanRelTol = 0.05;
constexpr std::size_t kRepeatInsideMin = 7;
constexpr double kCiWidthRelTol = 0.20;
constexpr double kFeedMillEndpointTol = 0.10;
constexpr double kFeedMillRelTol = 0.10;
constexpr double kPerturbTol = 0.15;

// Benchmark seeds: among seeds 0..1999, those whose realized X1 (linear) and
// X5 (nonlinear) ranges lie closest to [-3.046, 2.759] and [-6.166, 6.408].
constexpr std::uint64_t kLinearSeed = 612;
constexpr std::uint64_t kNonlinearSeed = 1745;
constexpr std::uint64_t kFeedMillSeed = 2024;
constexpr std::size_t kN = 1000;
constexpr std::size_t kFeedMillRows = 2149;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v, int digits = 4) {
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& check) {
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << id << "  " << title << "  ("
            << o.detail << ")" << std::endl;
}

std::size_t index_of(const std::vector<std::string>& names, const std::string& name) {
  return static_cast<std::size_t>(std::find(names.begin(), names.end(), name) - names.begin());
}

// Shared nonlinear fixture: data, forest, single and repeated reports.
struct ForestRun {
  Dataset data = synth::gen_nonlinear(kN, kNonlinearSeed);
  std::optional<ForestModel> forest;
  IraReport single;
  IraReport repeated;
  std::vector<CiWidthPoint> curve;
  double single_seconds = 0.0;
};

IraConfig forest_config() {
  IraConfig cfg;
  cfg.points = 100;
  cfg.background = 200;
  cfg.seed = kNonlinearSeed;
  cfg.threads = 1;
  return cfg;
}

ForestParams forest_params() {
  ForestParams p;
  p.seed = kNonlinearSeed;
  return p;
}

// Brute-force IRA: every modified row built and predicted one at a time.
double brute_force_ira(const ForestModel& f, const Dataset& ds, std::size_t i,
                       const IraConfig& cfg) {
  const auto col = ds.column(i);
  const double lo = *std::min_element(col.begin(), col.end());
  const double hi = *std::max_element(col.begin(), col.end());
  auto stream = background_stream(cfg.seed, 0, i);
  double total = 0.0;
  for (std::size_t k = 0; k < cfg.background; ++k) {
    const auto pick = static_cast<std::size_t>(stream.index(ds.n_rows()));
    double top = -INFINITY;
    double bottom = INFINITY;
    for (std::size_t j = 0; j < cfg.points; ++j) {
      std::vector<double> row(ds.row(pick).begin(), ds.row(pick).end());
      row[i] = j + 1 == cfg.points
                   ? hi
                   : lo + (hi - lo) * (static_cast<double>(j) / (cfg.points - 1));
      double sum = 0.0;
      for (const auto& tree : f.trees()) sum += tree.predict(row);
      const double y = sum / static_cast<double>(f.trees().size());
      top = std::max(top, y);
      bottom = std::min(bottom, y);
    }
    total += top - bottom;
  }
  return total / static_cast<double>(cfg.background);
}

std::string run_cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  if (code != 0) throw std::runtime_error("cli exited " + std::to_string(code) + ": " + err.str());
  return out.str();
}

}  // namespace

int main() {
  // Linear benchmark: OLS over the full (K, M) grid.
  const auto linear = synth::gen_linear(kN, kLinearSeed);
  const auto ols = fit_ols(linear);
  const std::vector<std::size_t> grid_values{50, 100, 200, 500};
  std::vector<IraReport> sweep;
  const auto linear_start = Clock::now();
  for (const auto k : grid_values) {
    for (const auto m : grid_values) {
      IraConfig cfg;
      cfg.points = m;
      cfg.background = k;
      cfg.seed = kLinearSeed;
      cfg.threads = 1;
      sweep.push_back(ira_single(ols, linear, cfg));
    }
  }
  const double linear_seconds = seconds_since(linear_start);

  report(1, "linear invariance across (K, M)", [&]() -> Outcome {
    double worst_spread = 0.0;
    double worst_closed = 0.0;
    for (std::size_t i = 0; i < linear.n_predictors(); ++i) {
      const auto col = linear.column(i);
      const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
      const double expect = std::abs(ols.coefficients()[i]) * (*hi - *lo);
      for (const auto& r : sweep) {
        const double v = r.predictors[i].ira;
        const double ref = sweep.front().predictors[i].ira;
        worst_spread = std::max(worst_spread, std::abs(v - ref) / std::max(1e-300, std::abs(ref)));
        worst_closed =
            std::max(worst_closed, std::abs(v - expect) / std::max(1e-300, std::abs(expect)));
      }
    }
    const bool ok = worst_spread <= kLinearRelTol && worst_closed <= kLinearRelTol &&
                    linear_seconds < kLinearMaxSeconds;
    return {ok, "max rel spread " + fmt(worst_spread) + ", max rel closed-form error " +
                    fmt(worst_closed) + ", " + fmt(linear_seconds, 3) + " s"};
  });

  report(2, "linear relevance separation", [&]() -> Outcome {
    const auto& r = sweep.front();
    const double x7 = r.at("X7").ira;
    const double x1 = r.at("X1").ira;
    const double x3 = r.at("X3").ira;
    const double noise = std::max({r.at("X2").ira, r.at("X5").ira, r.at("X8").ira});
    const bool order = x7 > x1 && x1 > x3 && x3 > noise;
    const bool bands = std::abs(x7 - 36.88) <= kLinearBand * 36.88 &&
                       std::abs(x1 - 11.84) <= kLinearBand * 11.84 &&
                       std::abs(x3 - 6.97) <= kLinearBand * 6.97;
    return {order && bands, "X7 " + fmt(x7) + ", X1 " + fmt(x1) + ", X3 " + fmt(x3) +
                                ", max irrelevant " + fmt(noise)};
  });

  // Nonlinear benchmark: default forest, single and repeated executions.
  ForestRun fr;
  const auto forest_start = Clock::now();
  fr.forest.emplace(fit_random_forest(fr.data, forest_params(), 1));
  fr.single = ira_single(*fr.forest, fr.data, forest_config());
  fr.single_seconds = seconds_since(forest_start);

  report(3, "nonlinear ranking", [&]() -> Outcome {
    const auto& r = fr.single;
    const std::vector<std::string> order{"X5", "X6", "X1", "X2", "X3"};
    bool ranked = true;
    for (std::size_t j = 1; j < order.size(); ++j) {
      ranked = ranked && r.at(order[j - 1]).ira > r.at(order[j]).ira;
    }
    double relevant = INFINITY;
    for (const auto& n : order) relevant = std::min(relevant, r.at(n).ira);
    const double irrelevant = std::max({r.at("X4").ira, r.at("X7").ira, r.at("X8").ira});
    const double ratio = relevant / irrelevant;
    const double x5 = r.at("X5").ira;
    std::ostringstream d;
    d << "X5 " << fmt(x5) << ", X6 " << fmt(r.at("X6").ira) << ", X1 " << fmt(r.at("X1").ira)
      << ", X2 " << fmt(r.at("X2").ira) << ", X3 " << fmt(r.at("X3").ira) << ", separation "
      << fmt(ratio) << ", " << fmt(fr.single_seconds, 3) << " s";
    const bool ok = ranked && ratio >= kForestSeparation && x5 >= kForestX5Low &&
                    x5 <= kForestX5High && fr.single_seconds < kForestMaxSeconds;
    return {ok, d.str()};
  });

  {
    IraConfig cfg = forest_config();
    cfg.repeats = 50;
    fr.repeated = ira_repeated(*fr.forest, fr.data, cfg);
    const std::vector<std::size_t> counts{50, 70, 90};
    fr.curve = ci_width_curve(*fr.forest, fr.data, cfg, counts);
  }

  report(4, "repeated IRA consistency (R = 50)", [&]() -> Outcome {
    double worst = 0.0;
    bool ordered = true;
    std::size_t inside = 0;
    for (std::size_t i = 0; i < fr.single.predictors.size(); ++i) {
      const double single = fr.single.predictors[i].ira;
      const auto& s = *fr.repeated.predictors[i].repeated;
      worst = std::max(worst, std::abs(s.mean - single) / single);
      ordered = ordered && s.ci_lower <= s.mean && s.mean <= s.ci_upper;
      if (single >= s.ci_lower && single <= s.ci_upper) ++inside;
    }
    const bool ok = worst <= kRepeatMeanRelTol && ordered && inside >= kRepeatInsideMin;
    return {ok, "max rel mean deviation " + fmt(worst) + ", single inside CI for " +
                    std::to_string(inside) + "/8"};
  });

  report(5, "CI width stabilization (R = 50, 70, 90)", [&]() -> Outcome {
    double lo = INFINITY;
    double hi = 0.0;
    std::string d;
    for (const auto& pt : fr.curve) {
      lo = std::min(lo, pt.width);
      hi = std::max(hi, pt.width);
      d += "R" + std::to_string(pt.repeats) + " " + fmt(pt.width) + ", ";
    }
    const double spread = (hi - lo) / lo;
    return {lo > 0.0 && spread <= kCiWidthRelTol, d + "rel spread " + fmt(spread)};
  });

  report(6, "feed-mill values and ranking", [&]() -> Outcome {
    const auto model = make_feed_mill_model();
    const auto names = feed_mill::names();
    IraConfig cfg;
    cfg.points = 100;
    cfg.background = 200;
    cfg.seed = kFeedMillSeed;
    cfg.threads = 1;
    cfg.range_policy = RangePolicy::fixed(feed_mill::training_ranges());

    // Every background row equal to the reference means.
    Matrix means;
    means.append_row(feed_mill::means());
    means.append_row(feed_mill::means());
    const Dataset at_means(names, means);
    const auto endpoint = ira_single(model, at_means, cfg);
    const double fat = endpoint.at("Fat Content (%)").ira;
    const double adf = endpoint.at("ADF Content (%)").ira;
    const bool values_ok =
        std::abs(fat - 5.45) <= kFeedMillEndpointTol && std::abs(adf - 4.63) <= kFeedMillEndpointTol;

    const std::vector<std::pair<std::string, double>> expected{
        {"Fat Content (%)", 5.45},
        {"ADF Content (%)", 4.63},
        {"Indoor Humidity (Pelletizer) (%)", 3.16},
        {"Dehydrated Bakery Meal (%)", 3.05},
        {"Amino Acids (%)", 2.78},
        {"Expanding Temperature (°C)", 2.30},
        {"Processing Aid Water (%)", 1.98},
        {"Ambient Humidity (%)", 1.65},
        {"Cumulative Production (tonnes)", 1.57}};
    const auto stochastic =
        ira_single(model, synth::make_feed_mill_background(kFeedMillRows, kFeedMillSeed), cfg);
    const auto rank = stochastic.ranking();
    bool order_ok = true;
    double worst = 0.0;
    for (std::size_t j = 0; j < expected.size(); ++j) {
      order_ok = order_ok && stochastic.predictors[rank[j]].name == expected[j].first;
      const double v = stochastic.at(expected[j].first).ira;
      worst = std::max(worst, std::abs(v - expected[j].second) / expected[j].second);
    }

    // The ranking must also equal the ordering of |coefficient| * training range.
    const auto ranges = feed_mill::training_ranges();
    std::vector<std::size_t> by_span(9);
    for (std::size_t i = 0; i < 9; ++i) by_span[i] = i;
    std::stable_sort(by_span.begin(), by_span.end(), [&](std::size_t a, std::size_t b) {
      return std::abs(feed_mill::kPredictors[a].coefficient) * ranges[a].width() >
             std::abs(feed_mill::kPredictors[b].coefficient) * ranges[b].width();
    });
    const bool invariant_ok = by_span == rank;

    const bool ok = values_ok && order_ok && worst <= kFeedMillRelTol && invariant_ok;
    return {ok, "at means: Fat " + fmt(fat) + ", ADF " + fmt(adf) +
                    "; surrogate background: ranking " + (order_ok ? "matches" : "differs") +
                    ", coefficient-span order " + (invariant_ok ? "matches" : "differs") +
                    ", max rel deviation " + fmt(worst)};
  });

  report(7, "perturbation baseline", [&]() -> Outcome {
    const auto steps = default_perturbation_steps();
    const auto names = feed_mill::names();
    const auto t =
        perturbation_table(make_feed_mill_model(), feed_mill::means(), steps, names);
    const auto et = index_of(names, "Expanding Temperature (°C)");
    const double plus = t.changes[et].back();
    const double minus = t.changes[et].front();
    const bool et_ok =
        std::abs(plus - 0.907) <= kPerturbTol && std::abs(minus + 0.943) <= kPerturbTol;
    // Expected sign of every +20% entry.
    const std::vector<std::pair<std::string, int>> signs{
        {"ADF Content (%)", 1},
        {"Ambient Humidity (%)", -1},
        {"Amino Acids (%)", 1},
        {"Cumulative Production (tonnes)", -1},
        {"Dehydrated Bakery Meal (%)", 1},
        {"Expanding Temperature (°C)", 1},
        {"Fat Content (%)", -1},
        {"Indoor Humidity (Pelletizer) (%)", 1},
        {"Processing Aid Water (%)", -1}};
    std::size_t matched = 0;
    for (const auto& [name, sign] : signs) {
      if (t.changes[index_of(names, name)].back() * sign > 0.0) ++matched;
    }
    return {et_ok && matched == signs.size(), "ET +20% " + fmt(plus) + ", -20% " + fmt(minus) +
                                                  ", +20% signs matched " +
                                                  std::to_string(matched) + "/9"};
  });

  report(8, "brute-force oracle equivalence", [&]() -> Outcome {
    const Dataset toy({"a", "b", "c"},
                      Matrix(5, 3, {0.1, 2.0, -1.0, 0.5, 1.0, 0.0, 0.9, 3.0, 1.0, 0.3, 0.5, 2.0,
                                    0.7, 2.5, -0.5}),
                      std::vector<double>{1.0, 4.0, 9.0, 2.0, 6.0}, std::string("y"));
    ForestParams p;
    p.n_trees = 1;
    p.max_depth = 1;
    p.seed = 42;
    const auto f = fit_random_forest(toy, p, 1);
    IraConfig cfg;
    cfg.points = 10;
    cfg.background = 12;
    cfg.seed = 42;
    const auto r = ira_single(f, toy, cfg);
    std::size_t equal = 0;
    std::string d;
    for (std::size_t i = 0; i < 3; ++i) {
      const double oracle = brute_force_ira(f, toy, i, cfg);
      if (r.predictors[i].ira == oracle) ++equal;
      d += toy.predictor_names()[i] + " " + fmt(r.predictors[i].ira, 17) + ", ";
    }
    return {equal == 3, d + std::to_string(equal) + "/3 bit-identical"};
  });

  report(9, "determinism under parallelism", [&]() -> Outcome {
    ira::test::TempDir dir;
    const auto csv = dir.file("nonlinear.csv");
    write_csv(fr.data, csv);
    const std::vector<std::string> base{"ira",          "--data",     csv.string(),
                                        "--response",   "Y",          "--model",
                                        "rf",           "--points",   "100",
                                        "--background", "200",        "--seed",
                                        std::to_string(kNonlinearSeed), "--format", "json"};
    std::size_t identical = 0;
    for (const std::string repeats : {"1", "50"}) {
      auto a = base;
      a.insert(a.end(), {"--repeats", repeats, "--threads", "1"});
      auto b = base;
      b.insert(b.end(), {"--repeats", repeats, "--threads", "8"});
      if (run_cli(a) == run_cli(b)) ++identical;
    }
    return {identical == 2, std::to_string(identical) + "/2 JSON reports byte-identical"};
  });

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
