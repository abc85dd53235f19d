#include "ira/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "ira/error.hpp"

namespace ira {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      break;
    }
    cells.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return cells;
}

std::string location(std::string_view source, std::size_t line_no, std::size_t col,
                     const std::string& column_name) {
  std::ostringstream os;
  os << source << ": row " << line_no << ", column " << (col + 1) << " ('" << column_name
     << "')";
  return os.str();
}

}  // namespace

RangePolicy RangePolicy::quantile(double lo, double hi) {
  if (!(lo >= 0.0 && hi <= 1.0 && lo < hi)) {
    throw ConfigError("quantile range requires 0 <= lo < hi <= 1, got (" + format_double(lo) +
                      ", " + format_double(hi) + ")");
  }
  RangePolicy p;
  p.mode_ = Mode::quantile;
  p.lo_ = lo;
  p.hi_ = hi;
  return p;
}

RangePolicy RangePolicy::fixed(std::vector<Range> bounds) {
  for (const auto& b : bounds) {
    if (!std::isfinite(b.low) || !std::isfinite(b.high) || b.low > b.high) {
      throw ConfigError("fixed range bounds must be finite with low <= high");
    }
  }
  RangePolicy p;
  p.mode_ = Mode::fixed;
  p.bounds_ = std::move(bounds);
  return p;
}

std::string RangePolicy::to_string() const {
  switch (mode_) {
    case Mode::full:
      return "full";
    case Mode::quantile:
      return "quantile(" + format_double(lo_) + "," + format_double(hi_) + ")";
    case Mode::fixed:
      return "fixed";
  }
  return "full";
}

Dataset::Dataset(std::vector<std::string> predictor_names, Matrix values,
                 std::optional<std::vector<double>> response,
                 std::optional<std::string> response_name)
    : names_(std::move(predictor_names)),
      values_(std::move(values)),
      response_(std::move(response)),
      response_name_(std::move(response_name)) {
  if (values_.cols() < 1) throw DataError("dataset needs at least one predictor");
  if (values_.rows() < 2) {
    throw DataError("dataset needs at least 2 observations, got " +
                    std::to_string(values_.rows()));
  }
  if (names_.size() != values_.cols()) {
    throw DataError("predictor name count does not match column count");
  }
  std::set<std::string> seen;
  for (const auto& name : names_) {
    if (name.empty()) throw DataError("predictor names must be nonempty");
    if (!seen.insert(name).second) throw DataError("duplicate predictor name '" + name + "'");
  }
  for (std::size_t r = 0; r < values_.rows(); ++r) {
    for (std::size_t c = 0; c < values_.cols(); ++c) {
      if (!std::isfinite(values_(r, c))) {
        throw DataError("non-finite value at row " + std::to_string(r) + ", predictor '" +
                        names_[c] + "'");
      }
    }
  }
  if (response_) {
    if (response_->size() != values_.rows()) {
      throw DataError("response length does not match the number of observations");
    }
    for (std::size_t r = 0; r < response_->size(); ++r) {
      if (!std::isfinite((*response_)[r])) {
        throw DataError("non-finite response at row " + std::to_string(r));
      }
    }
    if (response_name_ && seen.contains(*response_name_)) {
      throw DataError("response name '" + *response_name_ + "' collides with a predictor");
    }
  }
}

const std::vector<double>& Dataset::response() const {
  if (!response_) throw DataError("dataset has no response column");
  return *response_;
}

std::optional<std::size_t> Dataset::find_predictor(const std::string& name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

Dataset parse_csv(std::string_view text, const std::optional<std::string>& response_name,
                  std::string_view source) {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
    if (trim(line).empty()) {
      if (pos > text.size()) break;
      continue;
    }
    auto cells = split_cells(line);
    if (header.empty()) {
      std::set<std::string> seen;
      for (std::size_t c = 0; c < cells.size(); ++c) {
        std::string name(cells[c]);
        if (name.find('"') != std::string::npos) {
          throw DataError(std::string(source) + ": quoted header cells are not supported");
        }
        if (name.empty()) {
          throw DataError(std::string(source) + ": empty header in column " +
                          std::to_string(c + 1));
        }
        if (!seen.insert(name).second) {
          throw DataError(std::string(source) + ": duplicate header '" + name + "'");
        }
        header.push_back(std::move(name));
      }
      continue;
    }
    if (cells.size() != header.size()) {
      throw DataError(std::string(source) + ": row " + std::to_string(line_no) + " has " +
                      std::to_string(cells.size()) + " cells, expected " +
                      std::to_string(header.size()));
    }
    std::vector<double> row(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      std::string_view cell = cells[c];
      if (cell.find('"') != std::string_view::npos) {
        throw DataError(location(source, line_no, c, header[c]) +
                        ": quoted cells are not supported");
      }
      if (cell.starts_with('+')) cell.remove_prefix(1);
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size()) {
        throw DataError(location(source, line_no, c, header[c]) + ": cannot parse '" +
                        std::string(cells[c]) + "' as a number");
      }
      if (!std::isfinite(value)) {
        throw DataError(location(source, line_no, c, header[c]) + ": non-finite value '" +
                        std::string(cells[c]) + "'");
      }
      row[c] = value;
    }
    rows.push_back(std::move(row));
  }
  if (header.empty()) throw DataError(std::string(source) + ": missing header row");

  std::optional<std::size_t> response_col;
  if (response_name) {
    const auto it = std::find(header.begin(), header.end(), *response_name);
    if (it == header.end()) {
      throw DataError(std::string(source) + ": response column '" + *response_name +
                      "' not found");
    }
    response_col = static_cast<std::size_t>(it - header.begin());
  }
  if (rows.size() < 2) {
    throw DataError(std::string(source) + ": need at least 2 data rows, found " +
                    std::to_string(rows.size()));
  }

  std::vector<std::string> names;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c != response_col) names.push_back(header[c]);
  }
  Matrix values(rows.size(), names.size());
  std::optional<std::vector<double>> response;
  if (response_col) response.emplace(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::size_t out = 0;
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (c == response_col) {
        (*response)[r] = rows[r][c];
      } else {
        values(r, out++) = rows[r][c];
      }
    }
  }
  return Dataset(std::move(names), std::move(values), std::move(response),
                 response_col ? response_name : std::nullopt);
}

Dataset load_csv(const std::filesystem::path& path,
                 const std::optional<std::string>& response_name) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open data file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str(), response_name, path.string());
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

std::string to_csv(const Dataset& ds) {
  std::string out;
  const auto& names = ds.predictor_names();
  for (std::size_t c = 0; c < names.size(); ++c) {
    if (c) out += ',';
    out += names[c];
  }
  if (ds.has_response()) out += "," + ds.response_name().value_or("Y");
  out += '\n';
  for (std::size_t r = 0; r < ds.n_rows(); ++r) {
    const auto row = ds.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += format_double(row[c]);
    }
    if (ds.has_response()) out += "," + format_double(ds.response()[r]);
    out += '\n';
  }
  return out;
}

void write_csv(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << to_csv(ds);
  if (!out.flush()) throw DataError("write failed for '" + path.string() + "'");
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw DataError("quantile of an empty sample");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lower = static_cast<std::size_t>(std::floor(pos));
  if (lower + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(lower);
  if (frac == 0.0) return sorted[lower];
  return sorted[lower] + frac * (sorted[lower + 1] - sorted[lower]);
}

ColumnStats column_stats(std::span<const double> values, std::string name) {
  if (values.empty()) throw DataError("statistics of an empty column");
  ColumnStats s;
  s.name = std::move(name);
  const auto n = static_cast<double>(values.size());
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  // Summing in sorted order makes the mean independent of row order.
  s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : sorted) ss += (v - s.mean) * (v - s.mean);
  s.sd = sorted.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  s.min = sorted.front();
  s.max = sorted.back();
  s.median = quantile_sorted(sorted, 0.5);
  // Clamp rounding so the ordering invariant holds even for constant columns.
  s.mean = std::clamp(s.mean, s.min, s.max);
  return s;
}

std::vector<ColumnStats> describe(const Dataset& ds) {
  std::vector<ColumnStats> out;
  for (std::size_t c = 0; c < ds.n_predictors(); ++c) {
    out.push_back(column_stats(ds.column(c), ds.predictor_names()[c]));
  }
  if (ds.has_response()) {
    out.push_back(column_stats(ds.response(), ds.response_name().value_or("response")));
  }
  return out;
}

Range effective_range(const Dataset& ds, std::size_t index, const RangePolicy& policy) {
  if (index >= ds.n_predictors()) {
    throw ConfigError("predictor index " + std::to_string(index) + " out of range (p = " +
                      std::to_string(ds.n_predictors()) + ")");
  }
  if (policy.mode() == RangePolicy::Mode::fixed) {
    if (policy.bounds().size() != ds.n_predictors()) {
      throw ConfigError("fixed range policy has " + std::to_string(policy.bounds().size()) +
                        " bounds for " + std::to_string(ds.n_predictors()) + " predictors");
    }
    return policy.bounds()[index];
  }
  auto column = ds.column(index);
  std::sort(column.begin(), column.end());
  if (policy.mode() == RangePolicy::Mode::full) return {column.front(), column.back()};
  return {quantile_sorted(column, policy.lo()), quantile_sorted(column, policy.hi())};
}

std::vector<double> column_means(const Dataset& ds) {
  std::vector<double> means(ds.n_predictors(), 0.0);
  for (std::size_t r = 0; r < ds.n_rows(); ++r) {
    for (std::size_t c = 0; c < means.size(); ++c) means[c] += ds.row(r)[c];
  }
  for (auto& m : means) m /= static_cast<double>(ds.n_rows());
  return means;
}

}  // namespace ira
