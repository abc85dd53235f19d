#include "ira/report.hpp"

#include <algorithm>
#include <charconv>
#include <iomanip>
#include <sstream>

#include "ira/error.hpp"

namespace ira {

namespace {

std::string fixed2(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << v;
  return os.str();
}

std::string pad_left(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

// Display width in code points; names carry UTF-8 such as the degree sign.
std::size_t display_width(const std::string& s) {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char c) { return (c & 0xC0) != 0x80; }));
}

std::string pad_name(const std::string& s, std::size_t width) {
  const auto w = display_width(s);
  return w >= width ? s : s + std::string(width - w, ' ');
}

std::size_t name_width(const std::vector<std::string>& names, std::size_t floor) {
  std::size_t w = floor;
  for (const auto& n : names) w = std::max(w, display_width(n));
  return w;
}

double parse_double(std::string_view cell) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
    throw DataError("cannot parse '" + std::string(cell) + "' as a number");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

RunManifest make_manifest(const IraConfig& cfg, std::string model_spec) {
  RunManifest m;
  m.seed = cfg.seed;
  m.points = cfg.points;
  m.background = cfg.background;
  m.repeats = cfg.repeats;
  m.grid_mode = to_string(cfg.grid_mode);
  m.range_policy = cfg.range_policy.to_string();
  m.model = std::move(model_spec);
  m.ci_lo = cfg.ci_lo;
  m.ci_hi = cfg.ci_hi;
  return m;
}

std::string manifest_comment(const RunManifest& m) {
  std::ostringstream os;
  os << "# ira " << m.tool_version << " seed=" << m.seed << " points=" << m.points
     << " background=" << m.background << " repeats=" << m.repeats << " grid=" << m.grid_mode
     << " range=" << m.range_policy << " ci=" << format_double(m.ci_lo) << ","
     << format_double(m.ci_hi) << " model=" << m.model << "\n";
  return os.str();
}

nlohmann::json to_json(const RunManifest& m) {
  return {{"tool_version", m.tool_version}, {"seed", m.seed},
          {"points", m.points},             {"background", m.background},
          {"repeats", m.repeats},           {"grid_mode", m.grid_mode},
          {"range_policy", m.range_policy}, {"model", m.model},
          {"ci_lo", m.ci_lo},               {"ci_hi", m.ci_hi}};
}

RunManifest manifest_from_json(const nlohmann::json& j) {
  RunManifest m;
  m.tool_version = j.at("tool_version").get<std::string>();
  m.seed = j.at("seed").get<std::uint64_t>();
  m.points = j.at("points").get<std::size_t>();
  m.background = j.at("background").get<std::size_t>();
  m.repeats = j.at("repeats").get<std::size_t>();
  m.grid_mode = j.at("grid_mode").get<std::string>();
  m.range_policy = j.at("range_policy").get<std::string>();
  m.model = j.at("model").get<std::string>();
  m.ci_lo = j.at("ci_lo").get<double>();
  m.ci_hi = j.at("ci_hi").get<double>();
  return m;
}

nlohmann::json report_to_json(const IraReport& report, const RunManifest& manifest) {
  nlohmann::json predictors = nlohmann::json::array();
  for (const auto& p : report.predictors) {
    nlohmann::json entry = {{"name", p.name}, {"ira", p.ira}};
    if (p.repeated) {
      entry["mean"] = p.repeated->mean;
      entry["ci_lower"] = p.repeated->ci_lower;
      entry["ci_upper"] = p.repeated->ci_upper;
      entry["samples"] = p.repeated->samples;
    }
    predictors.push_back(std::move(entry));
  }
  return {{"config", to_json(manifest)}, {"predictors", std::move(predictors)}};
}

std::pair<IraReport, RunManifest> report_from_json(const nlohmann::json& j) {
  try {
    IraReport report;
    for (const auto& entry : j.at("predictors")) {
      PredictorIra p;
      p.name = entry.at("name").get<std::string>();
      p.ira = entry.at("ira").get<double>();
      if (entry.contains("mean")) {
        RepeatSummary s;
        s.mean = entry.at("mean").get<double>();
        s.ci_lower = entry.at("ci_lower").get<double>();
        s.ci_upper = entry.at("ci_upper").get<double>();
        s.samples = entry.at("samples").get<std::vector<double>>();
        p.repeated = std::move(s);
      }
      report.predictors.push_back(std::move(p));
    }
    return {std::move(report), manifest_from_json(j.at("config"))};
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed report JSON: ") + e.what());
  }
}

std::string report_to_csv(const IraReport& report, const RunManifest& manifest) {
  std::string out = manifest_comment(manifest);
  const bool repeated = report.is_repeated();
  out += repeated ? "name,ira,mean,ci_lower,ci_upper,samples\n" : "name,ira\n";
  for (const auto& p : report.predictors) {
    out += p.name + "," + format_double(p.ira);
    if (repeated) {
      const auto& s = *p.repeated;
      out += "," + format_double(s.mean) + "," + format_double(s.ci_lower) + "," +
             format_double(s.ci_upper) + ",";
      for (std::size_t r = 0; r < s.samples.size(); ++r) {
        if (r) out += ';';
        out += format_double(s.samples[r]);
      }
    }
    out += '\n';
  }
  return out;
}

IraReport report_from_csv(std::string_view text) {
  IraReport report;
  bool header_seen = false;
  bool repeated = false;
  for (auto line : split(text, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.starts_with('#')) continue;
    const auto cells = split(line, ',');
    if (!header_seen) {
      header_seen = true;
      repeated = cells.size() == 6;
      if (cells.size() != 2 && !repeated) throw DataError("unrecognized report CSV header");
      continue;
    }
    if (cells.size() != (repeated ? 6u : 2u)) throw DataError("malformed report CSV row");
    PredictorIra p;
    p.name = std::string(cells[0]);
    p.ira = parse_double(cells[1]);
    if (repeated) {
      RepeatSummary s;
      s.mean = parse_double(cells[2]);
      s.ci_lower = parse_double(cells[3]);
      s.ci_upper = parse_double(cells[4]);
      for (const auto v : split(cells[5], ';')) s.samples.push_back(parse_double(v));
      p.repeated = std::move(s);
    }
    report.predictors.push_back(std::move(p));
  }
  return report;
}

std::string report_to_table(const IraReport& report, const RunManifest& manifest) {
  std::vector<std::string> names;
  for (const auto& p : report.predictors) names.push_back(p.name);
  const std::size_t w = name_width(names, 9);
  std::ostringstream os;
  os << manifest_comment(manifest);
  const bool repeated = report.is_repeated();
  os << pad_name("predictor", w);
  if (repeated) {
    os << pad_left("mean IRA", 12) << pad_left("CI lower", 12) << pad_left("CI upper", 12);
  } else {
    os << pad_left("IRA", 12);
  }
  os << '\n';
  for (const auto idx : report.ranking()) {
    const auto& p = report.predictors[idx];
    os << pad_name(p.name, w);
    if (repeated) {
      os << pad_left(fixed2(p.repeated->mean), 12) << pad_left(fixed2(p.repeated->ci_lower), 12)
         << pad_left(fixed2(p.repeated->ci_upper), 12);
    } else {
      os << pad_left(fixed2(p.ira), 12);
    }
    os << '\n';
  }
  return os.str();
}

std::string sweep_to_csv(const std::vector<SweepCell>& cells, const RunManifest& manifest) {
  std::string out = manifest_comment(manifest);
  out += "background,points,predictor,ira\n";
  for (const auto& cell : cells) {
    for (const auto& p : cell.report.predictors) {
      out += std::to_string(cell.background) + "," + std::to_string(cell.points) + "," + p.name +
             "," + format_double(p.ira) + "\n";
    }
  }
  return out;
}

nlohmann::json sweep_to_json(const std::vector<SweepCell>& cells, const RunManifest& manifest) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& cell : cells) {
    nlohmann::json entry = report_to_json(cell.report, manifest);
    rows.push_back({{"background", cell.background},
                    {"points", cell.points},
                    {"predictors", entry["predictors"]}});
  }
  return {{"config", to_json(manifest)}, {"cells", std::move(rows)}};
}

std::string sweep_to_table(const std::vector<SweepCell>& cells, const RunManifest& manifest) {
  std::ostringstream os;
  os << manifest_comment(manifest);
  if (cells.empty()) return os.str();
  os << pad_left("K", 6) << pad_left("M", 6);
  for (const auto& p : cells.front().report.predictors) {
    os << "  " << pad_left(p.name, std::max<std::size_t>(8, p.name.size()));
  }
  os << '\n';
  for (const auto& cell : cells) {
    os << pad_left(std::to_string(cell.background), 6) << pad_left(std::to_string(cell.points), 6);
    for (const auto& p : cell.report.predictors) {
      os << "  " << pad_left(fixed2(p.ira), std::max<std::size_t>(8, p.name.size()));
    }
    os << '\n';
  }
  return os.str();
}

std::string ci_curve_to_csv(const std::vector<CiWidthPoint>& curve, const RunManifest& manifest) {
  std::string out = manifest_comment(manifest);
  out += "repeats,avg_ci_width\n";
  for (const auto& pt : curve) {
    out += std::to_string(pt.repeats) + "," + format_double(pt.width) + "\n";
  }
  return out;
}

nlohmann::json ci_curve_to_json(const std::vector<CiWidthPoint>& curve,
                                const RunManifest& manifest) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& pt : curve) points.push_back({{"repeats", pt.repeats}, {"width", pt.width}});
  return {{"config", to_json(manifest)}, {"curve", std::move(points)}};
}

std::string perturbation_to_table(const PerturbationTable& table, std::string_view header) {
  const std::size_t w = name_width(table.names, 9);
  std::ostringstream os;
  os << header;
  os << pad_name("predictor", w);
  for (const double s : table.steps) {
    std::ostringstream label;
    label << (s > 0 ? "+" : "") << s << "%";
    os << pad_left(label.str(), 9);
  }
  os << '\n';
  for (std::size_t i = 0; i < table.names.size(); ++i) {
    os << pad_name(table.names[i], w);
    for (const double v : table.changes[i]) {
      std::ostringstream cell;
      cell << std::fixed << std::setprecision(3) << (v == 0.0 ? 0.0 : v);
      os << pad_left(cell.str(), 9);
    }
    os << '\n';
  }
  return os.str();
}

std::string perturbation_to_csv(const PerturbationTable& table, std::string_view header) {
  std::string out(header);
  out += "predictor";
  for (const double s : table.steps) out += "," + format_double(s);
  out += '\n';
  for (std::size_t i = 0; i < table.names.size(); ++i) {
    out += table.names[i];
    for (const double v : table.changes[i]) out += "," + format_double(v);
    out += '\n';
  }
  return out;
}

nlohmann::json perturbation_to_json(const PerturbationTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < table.names.size(); ++i) {
    rows.push_back({{"name", table.names[i]}, {"changes", table.changes[i]}});
  }
  return {{"steps", table.steps},
          {"baseline_prediction", table.baseline_prediction},
          {"predictors", std::move(rows)}};
}

std::string stats_to_table(const std::vector<ColumnStats>& stats) {
  std::vector<std::string> names;
  for (const auto& s : stats) names.push_back(s.name);
  const std::size_t w = name_width(names, 8);
  std::ostringstream os;
  os << pad_name("variable", w);
  for (const char* h : {"mean", "sd", "min", "median", "max"}) os << pad_left(h, 12);
  os << '\n';
  for (const auto& s : stats) {
    os << pad_name(s.name, w);
    for (const double v : {s.mean, s.sd, s.min, s.median, s.max}) {
      std::ostringstream cell;
      cell << std::fixed << std::setprecision(3) << v;
      os << pad_left(cell.str(), 12);
    }
    os << '\n';
  }
  return os.str();
}

std::string stats_to_csv(const std::vector<ColumnStats>& stats) {
  std::string out = "variable,mean,sd,min,median,max\n";
  for (const auto& s : stats) {
    out += s.name + "," + format_double(s.mean) + "," + format_double(s.sd) + "," +
           format_double(s.min) + "," + format_double(s.median) + "," + format_double(s.max) +
           "\n";
  }
  return out;
}

}  // namespace ira
