#pragma once

// Fixed-schema reproductions of the reference tables and figure data, with
// CSV and SVG writers.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "couponq/asymptotics.hpp"
#include "couponq/bank_spec.hpp"
#include "couponq/coupon_core.hpp"

namespace couponq {

enum class TableName { en_q, centred, sd_bounds, fig_low, fig_high };

inline constexpr std::array<TableName, 5> kAllTables = {
    TableName::en_q, TableName::centred, TableName::sd_bounds, TableName::fig_low,
    TableName::fig_high};

inline std::string_view to_string(TableName name) {
  switch (name) {
    case TableName::en_q: return "en_q";
    case TableName::centred: return "centred";
    case TableName::sd_bounds: return "sd_bounds";
    case TableName::fig_low: return "fig_low";
    case TableName::fig_high: return "fig_high";
  }
  return "";
}

inline std::optional<TableName> parse_table_name(std::string_view s) {
  for (TableName n : kAllTables)
    if (to_string(n) == s) return n;
  return std::nullopt;
}

inline constexpr std::array<int, 3> kTableAlternatives = {5, 10, 20};
inline constexpr std::array<std::int64_t, 7> kTableQuestions = {1, 5, 10, 20, 50, 100, 200};
inline constexpr std::array<int, 6> kSdAlternatives = {2, 3, 4, 5, 10, 20};

inline std::vector<std::int64_t> fig_low_grid() {
  std::vector<std::int64_t> g;
  for (std::int64_t q = 1; q <= 20; ++q) g.push_back(q);
  return g;
}

inline std::vector<std::int64_t> fig_high_grid() {
  std::vector<std::int64_t> g = fig_low_grid();
  for (std::int64_t q : {25, 30, 35, 40, 42, 44, 45, 46, 48, 50, 60, 80, 100, 150, 200})
    g.push_back(q);
  return g;
}

enum class ColumnKind { integer, full, rounded };

struct Column {
  std::string name;
  ColumnKind kind = ColumnKind::full;
  int decimals = 0;
};

/// Round half away from zero to `decimals` places.
inline double round_half_away(double x, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(x * scale) / scale;
}

struct TableArtifact {
  TableName name = TableName::en_q;
  std::vector<Column> columns;
  std::vector<std::vector<double>> rows;

  std::vector<std::string> header() const {
    std::vector<std::string> h;
    for (const auto& c : columns) h.push_back(c.name);
    return h;
  }

  /// Value column of the row matching (a, q); tables keyed by a and q only.
  std::optional<double> lookup(int a, std::int64_t q, std::size_t column = 2) const {
    for (const auto& r : rows)
      if (r[0] == a && r[1] == static_cast<double>(q)) return r[column];
    return std::nullopt;
  }

  friend bool operator==(const TableArtifact& x, const TableArtifact& y) {
    return x.name == y.name && x.header() == y.header() && x.rows == y.rows;
  }
};

namespace detail {

inline std::vector<Column> schema(TableName name) {
  if (name == TableName::sd_bounds)
    return {{"a", ColumnKind::integer}, {"sd_min", ColumnKind::full}, {"sd_max", ColumnKind::full}};
  return {{"a", ColumnKind::integer},
          {"q", ColumnKind::integer},
          {"value", ColumnKind::full},
          {"value_rounded", ColumnKind::rounded, 1}};
}

inline TableArtifact expectation_table(TableName name, const std::vector<std::int64_t>& grid,
                                       const TruncationPolicy& policy) {
  TableArtifact t{name, schema(name), {}};
  for (int a : kTableAlternatives)
    for (std::int64_t q : grid) {
      const double v = expected_tests(BankSpec(a, q), policy).value;
      t.rows.push_back({double(a), double(q), v, round_half_away(v, 1)});
    }
  return t;
}

}  // namespace detail

inline TableArtifact build_table(TableName name, const TruncationPolicy& policy = {}) {
  switch (name) {
    case TableName::en_q: {
      const std::vector<std::int64_t> grid(kTableQuestions.begin(), kTableQuestions.end());
      return detail::expectation_table(name, grid, policy);
    }
    case TableName::fig_low: return detail::expectation_table(name, fig_low_grid(), policy);
    case TableName::fig_high: return detail::expectation_table(name, fig_high_grid(), policy);
    case TableName::centred: {
      TableArtifact t{name, detail::schema(name), {}};
      for (int a : kTableAlternatives)
        for (std::int64_t q : kTableQuestions) {
          const double v = centred_mean_prediction(a, q);
          t.rows.push_back({double(a), double(q), v, round_half_away(v, 1)});
        }
      return t;
    }
    case TableName::sd_bounds: {
      TableArtifact t{name, detail::schema(name), {}};
      for (int a : kSdAlternatives) {
        const VarianceBoundSummary v = variance_bounds(a);
        t.rows.push_back({double(a), v.sd_lo, v.sd_hi});
      }
      return t;
    }
  }
  throw Error(ErrorKind::invalid_spec, "unknown table");
}

namespace detail {

inline std::string format_cell(double v, const Column& c) {
  std::array<char, 64> buf{};
  std::to_chars_result res{};
  switch (c.kind) {
    case ColumnKind::integer:
      res = std::to_chars(buf.data(), buf.data() + buf.size(), static_cast<std::int64_t>(v));
      break;
    case ColumnKind::full:
      // Shortest representation that parses back to the same double.
      res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
      break;
    case ColumnKind::rounded:
      res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed,
                          c.decimals);
      break;
  }
  return {buf.data(), res.ptr};
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace detail

/// UTF-8, LF line endings, header row first.
inline void write_csv(std::ostream& os, const TableArtifact& t) {
  const auto h = t.header();
  for (std::size_t i = 0; i < h.size(); ++i) os << (i ? "," : "") << h[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      os << (i ? "," : "") << detail::format_cell(row[i], t.columns[i]);
    os << '\n';
  }
}

inline std::string to_csv(const TableArtifact& t) {
  std::ostringstream os;
  write_csv(os, t);
  return os.str();
}

/// Parses a CSV produced by write_csv for the given table name; the header
/// must match the schema exactly.
inline TableArtifact parse_csv(std::istream& is, TableName name) {
  TableArtifact t{name, detail::schema(name), {}};
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorKind::domain_error, "empty CSV");
  std::string expected;
  for (const auto& c : t.columns) expected += (expected.empty() ? "" : ",") + c.name;
  if (line != expected) throw Error(ErrorKind::domain_error, "unexpected CSV header: " + line);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = detail::split_commas(line);
    if (cells.size() != t.columns.size())
      throw Error(ErrorKind::domain_error, "wrong cell count in CSV row: " + line);
    std::vector<double> row;
    for (auto cell : cells) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size())
        throw Error(ErrorKind::domain_error, "bad CSV cell: " + std::string(cell));
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

/// Line-and-point chart of E N_q against q, one series per a.
inline void write_svg(std::ostream& os, const TableArtifact& t) {
  if (t.name != TableName::fig_low && t.name != TableName::fig_high)
    throw Error(ErrorKind::invalid_spec, "SVG output exists only for figure tables");

  constexpr double width = 720, height = 480;
  constexpr double left = 70, right = 130, top = 30, bottom = 60;
  double q_max = 0, y_max = 0;
  for (const auto& r : t.rows) {
    q_max = std::max(q_max, r[1]);
    y_max = std::max(y_max, r[2]);
  }
  q_max = std::ceil(q_max * 1.05);
  y_max = std::ceil(y_max * 1.1 / 10.0) * 10.0;
  auto px = [&](double q) { return left + q / q_max * (width - left - right); };
  auto py = [&](double y) { return height - bottom - y / y_max * (height - top - bottom); };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<line x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(q_max) << "\" y2=\""
     << py(0) << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(0) << "\" y2=\""
     << py(y_max) << "\" stroke=\"black\"/>\n";

  const double q_step = q_max <= 25 ? 2 : 25;
  for (double q = 0; q <= q_max; q += q_step)
    os << "<text x=\"" << px(q) << "\" y=\"" << py(0) + 18 << "\" text-anchor=\"middle\">" << q
       << "</text>\n";
  const double y_step = y_max <= 150 ? 10 : 20;
  for (double y = 0; y <= y_max; y += y_step)
    os << "<text x=\"" << px(0) - 8 << "\" y=\"" << py(y) + 4 << "\" text-anchor=\"end\">" << y
       << "</text>\n";
  os << "<text x=\"" << (left + width - right) / 2 << "\" y=\"" << height - 15
     << "\" text-anchor=\"middle\">q, number of questions</text>\n";
  os << "<text x=\"18\" y=\"" << (top + height - bottom) / 2 << "\" text-anchor=\"middle\" "
     << "transform=\"rotate(-90 18 " << (top + height - bottom) / 2 << ")\">E N_q</text>\n";

  const std::array<const char*, 3> colors = {"#1b9e77", "#d95f02", "#7570b3"};
  for (std::size_t s = 0; s < kTableAlternatives.size(); ++s) {
    const double a = kTableAlternatives[s];
    std::ostringstream pts;
    double last_x = 0, last_y = 0;
    for (const auto& r : t.rows) {
      if (r[0] != a) continue;
      last_x = px(r[1]);
      last_y = py(r[2]);
      pts << last_x << ',' << last_y << ' ';
      os << "<circle cx=\"" << last_x << "\" cy=\"" << last_y << "\" r=\"2.5\" fill=\"none\" stroke=\""
         << colors[s] << "\"/>\n";
    }
    os << "<polyline fill=\"none\" stroke=\"" << colors[s] << "\" points=\"" << pts.str()
       << "\"/>\n";
    os << "<text x=\"" << last_x + 8 << "\" y=\"" << last_y + 4 << "\" fill=\"" << colors[s]
       << "\">" << a << " alternatives</text>\n";
  }
  os << "</svg>\n";
}

}  // namespace couponq
