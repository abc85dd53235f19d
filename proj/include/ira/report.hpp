#pragma once

#include <cstdint>
#include <json.hpp>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ira/baseline.hpp"
#include "ira/dataset.hpp"
#include "ira/engine.hpp"

namespace ira {

inline constexpr std::string_view kToolVersion = "0.1.0";

/// Reproducibility header written with every report.
struct RunManifest {
  std::string tool_version{kToolVersion};
  std::uint64_t seed = 0;
  std::size_t points = 0;
  std::size_t background = 0;
  std::size_t repeats = 1;
  std::string grid_mode;
  std::string range_policy;
  std::string model;
  double ci_lo = 2.5;
  double ci_hi = 97.5;

  friend bool operator==(const RunManifest&, const RunManifest&) = default;
};

RunManifest make_manifest(const IraConfig& cfg, std::string model_spec);

/// "# key=value ..." line used at the top of text and CSV outputs.
std::string manifest_comment(const RunManifest& manifest);

nlohmann::json to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const nlohmann::json& j);

/// {config:{...}, predictors:[{name, ira, mean?, ci_lower?, ci_upper?, samples?}]}
/// in column order. Doubles keep full precision.
nlohmann::json report_to_json(const IraReport& report, const RunManifest& manifest);
std::pair<IraReport, RunManifest> report_from_json(const nlohmann::json& j);

/// Manifest comment, then name,ira[,mean,ci_lower,ci_upper,samples] rows in
/// column order; samples are ';'-separated. 17 significant digits.
std::string report_to_csv(const IraReport& report, const RunManifest& manifest);
IraReport report_from_csv(std::string_view text);

/// Human table: predictors by descending IRA, two decimals.
std::string report_to_table(const IraReport& report, const RunManifest& manifest);

struct SweepCell {
  std::size_t background = 0;
  std::size_t points = 0;
  IraReport report;
};

/// Long format: background,points,predictor,ira.
std::string sweep_to_csv(const std::vector<SweepCell>& cells, const RunManifest& manifest);
nlohmann::json sweep_to_json(const std::vector<SweepCell>& cells, const RunManifest& manifest);
/// Wide table: one row per (K, M), two decimals.
std::string sweep_to_table(const std::vector<SweepCell>& cells, const RunManifest& manifest);

/// Two columns: repeats,avg_ci_width.
std::string ci_curve_to_csv(const std::vector<CiWidthPoint>& curve, const RunManifest& manifest);
nlohmann::json ci_curve_to_json(const std::vector<CiWidthPoint>& curve,
                                const RunManifest& manifest);

std::string perturbation_to_table(const PerturbationTable& table, std::string_view header);
std::string perturbation_to_csv(const PerturbationTable& table, std::string_view header);
nlohmann::json perturbation_to_json(const PerturbationTable& table);

std::string stats_to_table(const std::vector<ColumnStats>& stats);
std::string stats_to_csv(const std::vector<ColumnStats>& stats);

}  // namespace ira
