// dfpfisher/io.hpp
//
// DFP table files and result tables.
//
// A DFP table is long-format CSV with header `fiducial,outcome,probability`,
// or JSON with the same fields: either an array of records or an object with
// a "records" array. Outcome order follows first appearance in the file.
//
// Results are written as CSV (config as leading `# key = value` lines) or as
// JSON ({"config": ..., "columns": ..., "rows": ...}), chosen by extension.
// Every write goes to a sibling temporary file that is then renamed.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dfpfisher/fisher.hpp"
#include "dfpfisher/qubit.hpp"

namespace dfpfisher::io {

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline double parse_number(const std::string& s, const std::string& where) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InputError(where + ": not a number: '" + s + "'");
  }
  if (used != s.size()) throw InputError(where + ": trailing characters in '" + s + "'");
  return v;
}

struct Record {
  std::string fiducial;
  std::string outcome;
  double probability;
};

inline DfpTable assemble(const std::vector<Record>& records, double row_tolerance) {
  if (records.empty()) throw InputError("DFP table: no records");
  std::vector<Fiducial> fiducials;
  std::vector<std::string> outcomes;
  std::map<std::pair<Fiducial, std::string>, double> cells;
  for (const auto& r : records) {
    Fiducial f;
    try {
      f = fiducial_from_label(r.fiducial);
    } catch (const std::exception&) {
      throw InputError("DFP table: unknown fiducial '" + r.fiducial + "'");
    }
    if (r.outcome.empty()) throw InputError("DFP table: empty outcome label");
    if (std::find(fiducials.begin(), fiducials.end(), f) == fiducials.end()) fiducials.push_back(f);
    if (std::find(outcomes.begin(), outcomes.end(), r.outcome) == outcomes.end()) outcomes.push_back(r.outcome);
    if (!cells.emplace(std::pair{f, r.outcome}, r.probability).second)
      throw InputError("DFP table: duplicate entry for (" + r.fiducial + ", " + r.outcome + ")");
  }
  std::vector<std::vector<double>> q;
  for (auto f : fiducials) {
    std::vector<double> row;
    for (const auto& m : outcomes) {
      const auto it = cells.find({f, m});
      if (it == cells.end())
        throw InputError("DFP table: missing entry for (" + std::string(label(f)) + ", " + m + ")");
      row.push_back(it->second);
    }
    q.push_back(std::move(row));
  }
  try {
    return DfpTable(std::move(fiducials), std::move(outcomes), std::move(q), row_tolerance).clamped();
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

}  // namespace detail

inline DfpTable read_dfp_csv(std::istream& in, double row_tolerance = 1e-6) {
  std::string line;
  std::vector<detail::Record> records;
  bool header = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto cells = detail::split_csv_line(t);
    if (!header) {
      if (cells != std::vector<std::string>{"fiducial", "outcome", "probability"})
        throw InputError("DFP table: expected header 'fiducial,outcome,probability'");
      header = true;
      continue;
    }
    const std::string where = "DFP table line " + std::to_string(lineno);
    if (cells.size() != 3) throw InputError(where + ": expected 3 fields");
    records.push_back({cells[0], cells[1], detail::parse_number(cells[2], where)});
  }
  if (!header) throw InputError("DFP table: empty file");
  return detail::assemble(records, row_tolerance);
}

inline DfpTable read_dfp_json(const nlohmann::json& doc, double row_tolerance = 1e-6) {
  const nlohmann::json* arr = &doc;
  if (doc.is_object()) {
    if (!doc.contains("records")) throw InputError("DFP table: JSON object without 'records'");
    arr = &doc.at("records");
  }
  if (!arr->is_array()) throw InputError("DFP table: expected an array of records");
  std::vector<detail::Record> records;
  for (const auto& r : *arr) {
    if (!r.is_object() || !r.contains("fiducial") || !r.contains("outcome") || !r.contains("probability"))
      throw InputError("DFP table: record needs fiducial, outcome and probability");
    const auto& p = r.at("probability");
    if (!p.is_number() || !r.at("fiducial").is_string() || !r.at("outcome").is_string())
      throw InputError("DFP table: malformed record " + r.dump());
    records.push_back({r.at("fiducial").get<std::string>(), r.at("outcome").get<std::string>(), p.get<double>()});
  }
  return detail::assemble(records, row_tolerance);
}

inline bool is_json_path(const std::filesystem::path& p) { return p.extension() == ".json"; }

inline DfpTable load_dfp(const std::filesystem::path& path, double row_tolerance = 1e-6) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  if (is_json_path(path)) {
    nlohmann::json doc;
    try {
      in >> doc;
    } catch (const nlohmann::json::exception& e) {
      throw InputError(path.string() + ": " + e.what());
    }
    return read_dfp_json(doc, row_tolerance);
  }
  return read_dfp_csv(in, row_tolerance);
}

// ---------------------------------------------------------------------------
// Output

/// Twelve significant digits; non-finite values as nan / inf.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

struct ResultTable {
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> r) {
    if (r.size() != columns.size()) throw std::logic_error("ResultTable: row width mismatch");
    rows.push_back(std::move(r));
  }
};

inline std::string render_csv(const ResultTable& t) {
  std::ostringstream out;
  for (const auto& [k, v] : t.config) out << "# " << k << " = " << v << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << '\n';
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << format_number(r[i]);
    out << '\n';
  }
  return out.str();
}

inline std::string render_json(const ResultTable& t) {
  nlohmann::ordered_json doc;
  doc["config"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : t.config) doc["config"][k] = v;
  doc["columns"] = t.columns;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : t.rows) {
    auto row = nlohmann::ordered_json::array();
    for (double v : r) {
      if (std::isfinite(v))
        row.push_back(v);
      else
        row.push_back(format_number(v));
    }
    doc["rows"].push_back(std::move(row));
  }
  return doc.dump(2) + "\n";
}

inline std::string render_dfp_csv(const DfpTable& t) {
  std::ostringstream out;
  out << "fiducial,outcome,probability\n";
  for (auto f : t.fiducials())
    for (std::size_t m = 0; m < t.outcome_count(); ++m)
      out << label(f) << ',' << t.outcomes()[m] << ',' << format_number(t(f, m)) << '\n';
  return out.str();
}

inline void write_atomic(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) {
      std::filesystem::remove(tmp);
      throw std::runtime_error("write failed for " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

inline std::string render(const ResultTable& t, const std::filesystem::path& path) {
  return is_json_path(path) ? render_json(t) : render_csv(t);
}

}  // namespace dfpfisher::io
