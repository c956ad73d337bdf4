#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "panel.hpp"

namespace panelfx {

inline constexpr std::array<const char*, 7> kCsvHeader = {
    "domain", "ticker", "year", "mobile_share", "mobile_bounce", "desktop_share",
    "desktop_bounce"};

inline const std::array<const char*, 4> kValueColumns = {
    "mobile_share", "mobile_bounce", "desktop_share", "desktop_bounce"};

// Product-category tickers accepted by default, with their long names. A
// custom set can be supplied from a definitions file.
inline const std::map<std::string, std::string>& default_ticker_definitions() {
  static const std::map<std::string, std::string> defs = {
      {"AAR", "Autoparts and Automobile Retailer"},
      {"ACFR", "Arts, Crafts and Fabric Retailers"},
      {"BPR", "Baby Products Retailers"},
      {"BSR", "Bags and Suitcases Retailer"},
      {"CSJWAR", "Clothing, Shoes, Jewellery, Watch and Accessories Retailer"},
      {"CVPR", "Cigarette & Vape Products Retailer"},
      {"ESCR", "Eyeglasses, Sunglasses and Contacts Retailer"},
      {"ETR", "Electronics and Technology Retailer"},
      {"FBGR", "Foods, Beverages and Groceries Retailer"},
      {"FSPSR", "Fitness & Sports Products and Services Retailer"},
      {"G", "General"},
      {"GPR", "Gardening Products Retailer"},
      {"GTR", "Gifts and Toys Retailer"},
      {"HICPR", "Home Improvement and Cleaning Products Retailer"},
      {"HSPPR", "Health Services and Pharmaceutical Products Retailers"},
      {"KTER", "Kitchen tools and Equipments Retailer"},
      {"MEEPR", "Media, Education and Entertainment Products Retailer"},
      {"MEP", "Marketing and E-commerce Platform"},
      {"MPR", "Metal Products Retailer"},
      {"MPSR", "Music Products and Services Retailer"},
      {"MS", "Mail Services"},
      {"ORMR", "Outdoor Recreation Merchandise Retailer"},
      {"OSSR", "Office and Stationary Supplies Retailer"},
      {"PCBPR", "Personal Care and Beauty Products Retailer"},
      {"PDS", "Packaging And Distribution Services"},
      {"PEMSR", "Party Products and Event Management Services Retailer"},
      {"PLPR", "Printing and Labels Products Retailer"},
      {"PPR", "Pet Products Retailer"},
      {"PVER", "Photo and Video Equipment Retailer"},
      {"WITER", "Weapons, Industrial Tools and Equipment Retailer"},
  };
  return defs;
}

inline std::set<std::string> default_ticker_set() {
  std::set<std::string> out;
  for (const auto& [ticker, unused] : default_ticker_definitions()) out.insert(ticker);
  return out;
}

namespace detail {

inline std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

// RFC-4180 style field splitting: commas inside double quotes are literal,
// doubled quotes inside a quoted field produce one quote.
inline std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"' && field.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  if (quoted)
    raise(errc::parse_error, "line " + std::to_string(line_no) + ": unterminated quote");
  fields.push_back(std::move(field));
  return fields;
}

inline double parse_double_field(const std::string& field, std::size_t line_no,
                                 const std::string& column) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    raise(errc::parse_error, "line " + std::to_string(line_no) + ", column '" + column +
                                 "': cannot parse '" + field + "' as a number");
  return value;
}

inline std::int64_t parse_int_field(const std::string& field, std::size_t line_no,
                                    const std::string& column) {
  std::int64_t value = 0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    raise(errc::parse_error, "line " + std::to_string(line_no) + ", column '" + column +
                                 "': cannot parse '" + field + "' as an integer");
  return value;
}

// Shortest decimal text that parses back to the same double.
inline std::string format_double(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

inline bool needs_quoting(const std::string& field) {
  return field.find_first_of(",\"\n") != std::string::npos;
}

inline std::string quote_csv_field(const std::string& field) {
  if (!needs_quoting(field)) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace detail

struct IngestResult {
  PanelDataset panel;
  CategoryMap map;  // from the ticker column; empty tickers contribute nothing
};

// Reads the pinned traffic schema. Empty numeric cells mean missing; values
// are validated (finite, percentages in [0, 100]) with the offending line
// number in every message. The ticker column, where present, must be
// consistent per domain and builds the embedded category map.
inline IngestResult ingest_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    raise(errc::schema_mismatch, "line 1: empty input, expected header");
  line = detail::strip_cr(line);
  const auto header = detail::split_csv_line(line, 1);
  if (header.size() != kCsvHeader.size() ||
      !std::equal(header.begin(), header.end(), kCsvHeader.begin())) {
    std::string expected;
    for (const char* name : kCsvHeader) {
      if (!expected.empty()) expected += ',';
      expected += name;
    }
    raise(errc::schema_mismatch, "line 1: header must be exactly '" + expected + "'");
  }

  std::vector<Observation> records;
  std::map<std::pair<std::string, std::int64_t>, std::size_t> seen_cell;
  std::map<std::string, std::pair<std::string, std::size_t>> seen_ticker;
  CategoryMap map;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = detail::strip_cr(line);
    if (line.empty()) continue;
    const auto fields = detail::split_csv_line(line, line_no);
    if (fields.size() != kCsvHeader.size())
      raise(errc::schema_mismatch, "line " + std::to_string(line_no) + ": expected " +
                                       std::to_string(kCsvHeader.size()) + " fields, found " +
                                       std::to_string(fields.size()));

    Observation row;
    row.entity_id = fields[0];
    if (row.entity_id.empty())
      raise(errc::parse_error, "line " + std::to_string(line_no) + ": empty domain");
    const std::string& ticker = fields[1];
    row.time_id = detail::parse_int_field(fields[2], line_no, "year");

    for (std::size_t v = 0; v < kValueColumns.size(); ++v) {
      const std::string& cell = fields[3 + v];
      if (cell.empty()) continue;
      const std::string column = kValueColumns[v];
      const double value = detail::parse_double_field(cell, line_no, column);
      if (!std::isfinite(value))
        raise(errc::non_finite_value,
              "line " + std::to_string(line_no) + ", column '" + column + "': not finite");
      if (value < 0.0 || value > 100.0)
        raise(errc::out_of_range, "line " + std::to_string(line_no) + ", column '" + column +
                                      "': " + cell + " outside [0, 100]");
      row.values[column] = value;
    }

    const auto key = std::make_pair(row.entity_id, row.time_id);
    const auto [cell_it, inserted] = seen_cell.emplace(key, line_no);
    if (!inserted)
      raise(errc::duplicate_cell, "line " + std::to_string(line_no) + ": (" + row.entity_id +
                                      ", " + std::to_string(row.time_id) +
                                      ") already appeared on line " +
                                      std::to_string(cell_it->second));

    if (!ticker.empty()) {
      const auto [tick_it, fresh] = seen_ticker.emplace(
          row.entity_id, std::make_pair(ticker, line_no));
      if (!fresh && tick_it->second.first != ticker)
        raise(errc::duplicate_domain,
              "line " + std::to_string(line_no) + ": domain '" + row.entity_id +
                  "' maps to ticker '" + ticker + "' but line " +
                  std::to_string(tick_it->second.second) + " said '" +
                  tick_it->second.first + "'");
      map.assignments[row.entity_id] = ticker;
    }

    records.push_back(std::move(row));
  }

  IngestResult result;
  result.panel = build_panel(std::move(records));
  result.map = std::move(map);
  return result;
}

inline IngestResult ingest_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(errc::parse_error, "cannot open '" + path + "' for reading");
  return ingest_csv(in);
}

// Two-column domain,ticker file. A leading "domain,ticker" header row is
// tolerated. Every ticker must belong to the given set.
inline CategoryMap load_category_map(std::istream& in,
                                     const std::set<std::string>& tickers) {
  CategoryMap map;
  std::map<std::string, std::size_t> first_line;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = detail::strip_cr(line);
    if (line.empty()) continue;
    const auto fields = detail::split_csv_line(line, line_no);
    if (fields.size() != 2)
      raise(errc::schema_mismatch,
            "line " + std::to_string(line_no) + ": expected 'domain,ticker'");
    if (line_no == 1 && fields[0] == "domain" && fields[1] == "ticker") continue;
    const std::string& domain = fields[0];
    const std::string& ticker = fields[1];
    if (domain.empty() || ticker.empty())
      raise(errc::parse_error,
            "line " + std::to_string(line_no) + ": empty domain or ticker");
    if (!tickers.count(ticker))
      raise(errc::unknown_ticker, "line " + std::to_string(line_no) + ": ticker '" + ticker +
                                      "' is not in the accepted set");
    const auto [it, inserted] = first_line.emplace(domain, line_no);
    if (!inserted)
      raise(errc::duplicate_domain, "line " + std::to_string(line_no) + ": domain '" + domain +
                                        "' already assigned on line " +
                                        std::to_string(it->second));
    map.assignments[domain] = ticker;
  }
  return map;
}

inline CategoryMap load_category_map(std::istream& in) {
  return load_category_map(in, default_ticker_set());
}

inline CategoryMap load_category_map_file(const std::string& path,
                                          const std::set<std::string>& tickers) {
  std::ifstream in(path);
  if (!in) raise(errc::parse_error, "cannot open '" + path + "' for reading");
  return load_category_map(in, tickers);
}

inline CategoryMap load_category_map_file(const std::string& path) {
  return load_category_map_file(path, default_ticker_set());
}

// ticker,description rows; descriptions may be quoted since several contain
// commas. A leading "ticker,description" header row is tolerated.
inline std::map<std::string, std::string> load_ticker_definitions(std::istream& in) {
  std::map<std::string, std::string> defs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = detail::strip_cr(line);
    if (line.empty()) continue;
    const auto fields = detail::split_csv_line(line, line_no);
    if (fields.size() != 2)
      raise(errc::schema_mismatch,
            "line " + std::to_string(line_no) + ": expected 'ticker,description'");
    if (line_no == 1 && fields[0] == "ticker" && fields[1] == "description") continue;
    if (fields[0].empty())
      raise(errc::parse_error, "line " + std::to_string(line_no) + ": empty ticker");
    const auto [it, inserted] = defs.emplace(fields[0], fields[1]);
    if (!inserted)
      raise(errc::duplicate_domain,
            "line " + std::to_string(line_no) + ": ticker '" + fields[0] + "' repeated");
  }
  return defs;
}

inline std::map<std::string, std::string> load_ticker_definitions_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(errc::parse_error, "cannot open '" + path + "' for reading");
  return load_ticker_definitions(in);
}

// Writes the panel back in the pinned schema and canonical row order. Numbers
// round-trip exactly, so ingest(emit(panel)) reproduces the panel.
inline void emit_csv(const PanelDataset& panel, const CategoryMap& map, std::ostream& out) {
  for (std::size_t i = 0; i < kCsvHeader.size(); ++i) {
    if (i) out << ',';
    out << kCsvHeader[i];
  }
  out << '\n';
  for (const auto& row : panel.rows) {
    out << detail::quote_csv_field(row.entity_id) << ',';
    if (const std::string* ticker = map.find(row.entity_id))
      out << detail::quote_csv_field(*ticker);
    out << ',' << row.time_id;
    for (const char* column : kValueColumns) {
      out << ',';
      if (const double* v = find_value(row, column)) out << detail::format_double(*v);
    }
    out << '\n';
  }
}

inline void emit_csv_file(const PanelDataset& panel, const CategoryMap& map,
                          const std::string& path) {
  std::ofstream out(path);
  if (!out) raise(errc::parse_error, "cannot open '" + path + "' for writing");
  emit_csv(panel, map, out);
}

}  // namespace panelfx
