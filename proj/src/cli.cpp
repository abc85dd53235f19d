#include "ira/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "ira/baseline.hpp"
#include "ira/dataset.hpp"
#include "ira/engine.hpp"
#include "ira/error.hpp"
#include "ira/external_model.hpp"
#include "ira/feed_mill.hpp"
#include "ira/forest.hpp"
#include "ira/models.hpp"
#include "ira/report.hpp"
#include "ira/synth.hpp"

namespace ira::cli {

namespace {

/// Raised for flag combinations that CLI11 cannot check by itself.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ModelOptions {
  std::string kind = "ols";
  std::string command;
  std::size_t trees = 100;
  std::size_t max_depth = 0;
  std::size_t min_samples_split = 2;
  std::size_t max_features = 0;
  bool no_bootstrap = false;
  std::optional<std::uint64_t> model_seed;
};

struct RunOptions {
  std::string data;
  std::string response;
  ModelOptions model;
  IraConfig cfg;
  std::string grid = "linear";
  std::string range = "auto";
  std::string format = "table";
  std::string output;
  std::vector<std::size_t> points_list;
  std::vector<std::size_t> background_list;
  std::vector<std::size_t> repeat_list;
  std::vector<double> steps;
  std::string kind;
  std::size_t n = 1000;
};

void add_data_options(CLI::App* cmd, RunOptions& o, bool required) {
  auto* data = cmd->add_option("--data", o.data, "CSV file with a header row");
  if (required) data->required();
  cmd->add_option("--response", o.response, "Name of the response column");
}

void add_model_options(CLI::App* cmd, RunOptions& o) {
  cmd->add_option("--model", o.model.kind, "Model: ols, rf, feedmill or external")
      ->check(CLI::IsMember({"ols", "rf", "feedmill", "external"}));
  cmd->add_option("--command", o.model.command, "Predict-server command for --model external");
  cmd->add_option("--trees", o.model.trees, "Random forest: number of trees")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-depth", o.model.max_depth, "Random forest: depth limit (0 = none)");
  cmd->add_option("--min-samples-split", o.model.min_samples_split,
                  "Random forest: minimum node size to split")
      ->check(CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max()));
  cmd->add_option("--max-features", o.model.max_features,
                  "Random forest: features tried per split (0 = all)");
  cmd->add_flag("--no-bootstrap", o.model.no_bootstrap, "Random forest: grow on the full data");
  cmd->add_option("--model-seed", o.model.model_seed,
                  "Random forest seed (defaults to --seed)");
}

void add_engine_options(CLI::App* cmd, RunOptions& o) {
  cmd->add_option("--points", o.cfg.points, "Interpolated points per predictor (M)");
  cmd->add_option("--background", o.cfg.background, "Background samples per predictor (K)");
  cmd->add_option("--seed", o.cfg.seed, "Master seed");
  cmd->add_option("--grid", o.grid, "Grid mode: linear or unique")
      ->check(CLI::IsMember({"linear", "unique"}));
  cmd->add_option("--range", o.range, "Range policy: auto, full or quantile:LO:HI");
  cmd->add_option("--ci-lo", o.cfg.ci_lo, "Lower CI percentile");
  cmd->add_option("--ci-hi", o.cfg.ci_hi, "Upper CI percentile");
  cmd->add_option("--threads", o.cfg.threads, "Worker threads (0 = auto)");
}

void add_output_options(CLI::App* cmd, RunOptions& o) {
  cmd->add_option("--format", o.format, "Output format: table, csv or json")
      ->check(CLI::IsMember({"table", "csv", "json"}));
  cmd->add_option("--output", o.output, "Write the report to this file instead of stdout");
}

RangePolicy parse_range(const std::string& text, const std::string& model_kind) {
  if (text == "full") return RangePolicy::full();
  if (text == "auto") {
    return model_kind == "feedmill" ? RangePolicy::fixed(feed_mill::training_ranges())
                                    : RangePolicy::full();
  }
  if (text.starts_with("quantile:")) {
    const auto rest = text.substr(9);
    const auto colon = rest.find(':');
    if (colon != std::string::npos) {
      try {
        std::size_t used_lo = 0;
        std::size_t used_hi = 0;
        const double lo = std::stod(rest.substr(0, colon), &used_lo);
        const double hi = std::stod(rest.substr(colon + 1), &used_hi);
        if (used_lo == colon && used_hi == rest.size() - colon - 1) {
          return RangePolicy::quantile(lo, hi);
        }
      } catch (const std::logic_error&) {
      }
    }
  }
  throw UsageError("invalid --range '" + text + "' (expected auto, full or quantile:LO:HI)");
}

// Turns parsed flags into a validated engine configuration.
void finalize_config(RunOptions& o) {
  try {
    o.cfg.grid_mode = parse_grid_mode(o.grid);
    o.cfg.range_policy = parse_range(o.range, o.model.kind);
    o.cfg.validate();
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
  if (o.model.kind == "external" && o.model.command.empty()) {
    throw UsageError("--model external requires --command");
  }
  if (o.model.kind != "feedmill" && o.data.empty()) {
    throw UsageError("--model " + o.model.kind + " requires --data");
  }
}

ForestParams forest_params(const RunOptions& o) {
  ForestParams p;
  p.n_trees = o.model.trees;
  if (o.model.max_depth > 0) p.max_depth = o.model.max_depth;
  p.min_samples_split = o.model.min_samples_split;
  p.max_features = o.model.max_features;
  p.bootstrap = !o.model.no_bootstrap;
  p.seed = o.model.model_seed.value_or(o.cfg.seed);
  return p;
}

std::optional<Dataset> load_data(const RunOptions& o) {
  if (o.data.empty()) return std::nullopt;
  std::optional<std::string> response;
  if (!o.response.empty()) response = o.response;
  return load_csv(o.data, response);
}

// Without data the feed-mill analysis uses the reference mean row as its only
// background observation (stored twice to satisfy the two-row minimum).
Dataset feed_mill_mean_background() {
  Matrix rows;
  rows.append_row(feed_mill::means());
  rows.append_row(feed_mill::means());
  return Dataset(feed_mill::names(), std::move(rows));
}

std::unique_ptr<RegressionModel> build_model(const RunOptions& o, const Dataset* ds) {
  const auto& kind = o.model.kind;
  if (kind == "feedmill") {
    if (ds && ds->predictor_names() != feed_mill::names()) {
      throw DataError("dataset columns do not match the nine feed-mill predictors");
    }
    return std::make_unique<BoxCoxLinearModel>(make_feed_mill_model());
  }
  if (kind == "external") {
    return connect_external(o.model.command, ds->n_predictors());
  }
  if (!ds->has_response()) {
    throw DataError("--model " + kind + " needs a response column (use --response)");
  }
  if (kind == "ols") return std::make_unique<LinearModel>(fit_ols(*ds));
  return std::make_unique<ForestModel>(fit_random_forest(*ds, forest_params(o), o.cfg.threads));
}

std::string model_spec(const RunOptions& o, const RegressionModel& model) {
  if (o.model.kind == "ols") return "ols";
  return model.spec();
}

void emit(const RunOptions& o, const std::string& text, std::ostream& out) {
  if (o.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(o.output, std::ios::binary | std::ios::trunc);
  if (!file) throw DataError("cannot write output file '" + o.output + "'");
  file << text;
  if (!file.flush()) throw DataError("write failed for '" + o.output + "'");
}

std::string render(const RunOptions& o, const IraReport& report, const RunManifest& manifest) {
  if (o.format == "json") return report_to_json(report, manifest).dump(2) + "\n";
  if (o.format == "csv") return report_to_csv(report, manifest);
  return report_to_table(report, manifest);
}

int cmd_ira(RunOptions& o, std::ostream& out) {
  const auto ds = load_data(o);
  const Dataset background = ds ? *ds : feed_mill_mean_background();
  const auto model = build_model(o, &background);
  const auto report = run_ira(*model, background, o.cfg);
  emit(o, render(o, report, make_manifest(o.cfg, model_spec(o, *model))), out);
  return kExitOk;
}

int cmd_sweep(RunOptions& o, std::ostream& out) {
  const auto ds = load_data(o);
  const auto model = build_model(o, &*ds);
  std::vector<SweepCell> cells;
  for (const auto k : o.background_list) {
    for (const auto m : o.points_list) {
      IraConfig cfg = o.cfg;
      cfg.background = k;
      cfg.points = m;
      cells.push_back({k, m, ira_single(*model, *ds, cfg)});
    }
  }
  auto manifest = make_manifest(o.cfg, model_spec(o, *model));
  manifest.points = 0;
  manifest.background = 0;
  std::string text;
  if (o.format == "json") {
    text = sweep_to_json(cells, manifest).dump(2) + "\n";
  } else if (o.format == "table") {
    text = sweep_to_table(cells, manifest);
  } else {
    text = sweep_to_csv(cells, manifest);
  }
  emit(o, text, out);
  return kExitOk;
}

int cmd_ci_curve(RunOptions& o, std::ostream& out) {
  const auto ds = load_data(o);
  const auto model = build_model(o, &*ds);
  const auto curve = ci_width_curve(*model, *ds, o.cfg, o.repeat_list);
  auto manifest = make_manifest(o.cfg, model_spec(o, *model));
  manifest.repeats = *std::max_element(o.repeat_list.begin(), o.repeat_list.end());
  emit(o,
       o.format == "json" ? ci_curve_to_json(curve, manifest).dump(2) + "\n"
                          : ci_curve_to_csv(curve, manifest),
       out);
  return kExitOk;
}

int cmd_synth(RunOptions& o, std::ostream& out) {
  Dataset ds = [&] {
    if (o.kind == "linear") return synth::gen_linear(o.n, o.cfg.seed);
    if (o.kind == "nonlinear") return synth::gen_nonlinear(o.n, o.cfg.seed);
    return synth::make_feed_mill_background(o.n, o.cfg.seed);
  }();
  emit(o, to_csv(ds), out);
  return kExitOk;
}

int cmd_perturb(RunOptions& o, std::ostream& out) {
  const auto ds = load_data(o);
  const auto model = build_model(o, ds ? &*ds : nullptr);
  const std::vector<double> baseline = ds ? column_means(*ds) : feed_mill::means();
  const std::vector<std::string> names = ds ? ds->predictor_names() : feed_mill::names();
  const auto table = perturbation_table(*model, baseline, o.steps, names);
  const std::string header = "# ira " + std::string(kToolVersion) + " perturbation model=" +
                             model_spec(o, *model) + " baseline=" +
                             (ds ? "dataset-mean" : "reference-mean") + "\n";
  std::string text;
  if (o.format == "json") {
    auto j = perturbation_to_json(table);
    j["model"] = model_spec(o, *model);
    text = j.dump(2) + "\n";
  } else if (o.format == "csv") {
    text = perturbation_to_csv(table, header);
  } else {
    text = perturbation_to_table(table, header);
  }
  emit(o, text, out);
  return kExitOk;
}

int cmd_describe(RunOptions& o, std::ostream& out) {
  const auto ds = load_data(o);
  const auto stats = describe(*ds);
  emit(o, o.format == "csv" ? stats_to_csv(stats) : stats_to_table(stats), out);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunOptions o;
  CLI::App app{"Impact Range Assessment for regression models", "ira"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  auto* ira_cmd = app.add_subcommand("ira", "Compute single or repeated IRA per predictor");
  add_data_options(ira_cmd, o, false);
  add_model_options(ira_cmd, o);
  add_engine_options(ira_cmd, o);
  ira_cmd->add_option("--repeats", o.cfg.repeats, "Repeats (1 = single execution)");
  add_output_options(ira_cmd, o);

  auto* sweep_cmd = app.add_subcommand("sweep", "Single-execution IRA over a grid of (K, M)");
  add_data_options(sweep_cmd, o, true);
  add_model_options(sweep_cmd, o);
  add_engine_options(sweep_cmd, o);
  sweep_cmd->add_option("--points-list", o.points_list, "Comma-separated M values")
      ->delimiter(',')
      ->required();
  sweep_cmd->add_option("--background-list", o.background_list, "Comma-separated K values")
      ->delimiter(',')
      ->required();
  add_output_options(sweep_cmd, o);

  auto* curve_cmd = app.add_subcommand("ci-curve", "Average CI width against repeat count");
  add_data_options(curve_cmd, o, true);
  add_model_options(curve_cmd, o);
  add_engine_options(curve_cmd, o);
  curve_cmd->add_option("--repeat-list", o.repeat_list, "Comma-separated repeat counts")
      ->delimiter(',')
      ->required();
  add_output_options(curve_cmd, o);

  auto* synth_cmd = app.add_subcommand("synth", "Generate a benchmark dataset as CSV");
  synth_cmd->add_option("--kind", o.kind, "linear, nonlinear or feedmill-bg")
      ->required()
      ->check(CLI::IsMember({"linear", "nonlinear", "feedmill-bg"}));
  synth_cmd->add_option("--n", o.n, "Number of rows")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--seed", o.cfg.seed, "Seed");
  synth_cmd->add_option("--out,--output", o.output, "Destination CSV file")->required();

  auto* perturb_cmd =
      app.add_subcommand("perturb", "Local +/- percent perturbation around the mean row");
  add_data_options(perturb_cmd, o, false);
  add_model_options(perturb_cmd, o);
  perturb_cmd->add_option("--seed", o.cfg.seed, "Seed for fitted models");
  perturb_cmd->add_option("--threads", o.cfg.threads, "Worker threads (0 = auto)");
  perturb_cmd->add_option("--steps", o.steps, "Comma-separated percent steps")->delimiter(',');
  add_output_options(perturb_cmd, o);

  auto* describe_cmd = app.add_subcommand("describe", "Descriptive statistics per column");
  add_data_options(describe_cmd, o, true);
  describe_cmd->add_option("--format", o.format, "table or csv")
      ->check(CLI::IsMember({"table", "csv"}));
  describe_cmd->add_option("--output", o.output, "Write to this file instead of stdout");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (sweep_cmd->parsed()) {
      if (sweep_cmd->get_option("--format")->count() == 0) o.format = "csv";
      if (o.points_list.empty() || o.background_list.empty()) {
        throw UsageError("--points-list and --background-list must be nonempty");
      }
      for (const auto v : o.points_list) {
        if (v < 2) throw UsageError("every --points-list value must be >= 2");
      }
      for (const auto v : o.background_list) {
        if (v < 1) throw UsageError("every --background-list value must be >= 1");
      }
    }
    if (curve_cmd->parsed()) {
      if (o.repeat_list.empty()) throw UsageError("--repeat-list must be nonempty");
      for (const auto v : o.repeat_list) {
        if (v < 2) throw UsageError("every --repeat-list value must be >= 2 (a CI needs two repeats)");
      }
      o.cfg.repeats = *std::max_element(o.repeat_list.begin(), o.repeat_list.end());
    }
    if (perturb_cmd->parsed()) {
      if (o.steps.empty()) o.steps = default_perturbation_steps();
      if (o.model.kind == "external" && o.data.empty()) {
        throw UsageError("--model external requires --data for perturb");
      }
      if (o.model.kind == "external" && o.model.command.empty()) {
        throw UsageError("--model external requires --command");
      }
      if ((o.model.kind == "ols" || o.model.kind == "rf") && o.data.empty()) {
        throw UsageError("--model " + o.model.kind + " requires --data");
      }
    }
    if (ira_cmd->parsed() || sweep_cmd->parsed() || curve_cmd->parsed()) finalize_config(o);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (ira_cmd->parsed()) return cmd_ira(o, out);
    if (sweep_cmd->parsed()) return cmd_sweep(o, out);
    if (curve_cmd->parsed()) return cmd_ci_curve(o, out);
    if (synth_cmd->parsed()) return cmd_synth(o, out);
    if (perturb_cmd->parsed()) return cmd_perturb(o, out);
    if (describe_cmd->parsed()) return cmd_describe(o, out);
  } catch (const std::exception& e) {
    std::string message = e.what();
    std::replace(message.begin(), message.end(), '\n', ' ');
    err << "error: " << message << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace ira::cli
