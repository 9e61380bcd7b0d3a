#pragma once

// Report emission. CSV and JSON are both rendered by hand so that every
// float carries 17 significant digits and the bytes depend only on the data.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "chernoff/constants.hpp"
#include "chernoff/errors.hpp"
#include "chernoff/harness/records.hpp"

namespace chernoff::harness {

using ordered_json = nlohmann::ordered_json;

struct Summary {
  std::size_t records = 0;
  std::size_t failed = 0;
  double max_ratio = 0.0;
  bool all_passed = true;
  std::size_t excluded_draws = 0;
  /// Violations at n below the proof threshold of the operator-norm estimate.
  std::size_t flagged_below_threshold = 0;
  std::optional<RateEstimate> rate;
  /// Asserted window for rate.exponent_p, when the kind asserts one.
  std::optional<std::pair<double, double>> rate_window;
  bool rate_ok = true;
  std::map<std::string, double> constants;

  bool operator==(const Summary&) const = default;
};

struct Report {
  ordered_json header = ordered_json::object();
  std::vector<ErrorRecord> records;
  Summary summary;
};

/// Record counts, max ratio and the pass verdict. all_passed also requires
/// an asserted rate window to hold.
inline void summarize_records(Summary& s, const std::vector<ErrorRecord>& records) {
  s.records = records.size();
  s.failed = 0;
  s.max_ratio = 0.0;
  for (const auto& r : records) {
    if (!r.passed) ++s.failed;
    s.max_ratio = std::max(s.max_ratio, r.ratio);
  }
  s.rate_ok = true;
  if (s.rate_window) {
    s.rate_ok = s.rate.has_value() && s.rate->exponent_p >= s.rate_window->first &&
                s.rate->exponent_p <= s.rate_window->second;
  }
  s.all_passed = s.failed == 0 && s.rate_ok;
}

enum class Format { csv, json };

inline Format format_from_string(std::string_view name) {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  throw InvalidInput("unknown report format: " + std::string(name));
}

namespace detail {

inline std::string fmt17(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_json(std::ostringstream& os, const ordered_json& j, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
    case ordered_json::value_t::number_float: {
      const double x = j.get<double>();
      os << (std::isfinite(x) ? fmt17(x) : std::string("null"));
      return;
    }
    case ordered_json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) os << ",\n";
        first = false;
        os << pad << ordered_json(key).dump() << ": ";
        write_json(os, value, indent, depth + 1);
      }
      os << "\n" << close << "}";
      return;
    }
    case ordered_json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[\n";
      bool first = true;
      for (const auto& value : j) {
        if (!first) os << ",\n";
        first = false;
        os << pad;
        write_json(os, value, indent, depth + 1);
      }
      os << "\n" << close << "]";
      return;
    }
    default:
      os << j.dump();
  }
}

// Non-finite floats are emitted as null and read back as +inf; the only
// non-finite value a record can carry is an infinite ratio.
inline double read_double(const ordered_json& j) {
  return j.is_null() ? HUGE_VAL : j.get<double>();
}

}  // namespace detail

/// Renders any JSON value with 17-digit floats and two-space indentation.
inline std::string dump_json(const ordered_json& j) {
  std::ostringstream os;
  detail::write_json(os, j, 2, 0);
  os << "\n";
  return os.str();
}

inline ordered_json record_to_json(const ErrorRecord& r) {
  ordered_json j = ordered_json::object();
  j["experiment_id"] = r.experiment_id;
  j["n"] = r.n;
  j["t"] = r.t;
  j["empirical"] = r.empirical;
  j["bound"] = r.bound;
  j["ratio"] = r.ratio;
  j["passed"] = r.passed;
  return j;
}

inline ErrorRecord record_from_json(const ordered_json& j) {
  ErrorRecord r;
  r.experiment_id = j.at("experiment_id").get<std::string>();
  r.n = j.at("n").get<std::uint64_t>();
  r.t = detail::read_double(j.at("t"));
  r.empirical = detail::read_double(j.at("empirical"));
  r.bound = detail::read_double(j.at("bound"));
  r.ratio = detail::read_double(j.at("ratio"));
  r.passed = j.at("passed").get<bool>();
  return r;
}

inline ordered_json summary_to_json(const Summary& s) {
  ordered_json j = ordered_json::object();
  j["records"] = s.records;
  j["failed"] = s.failed;
  j["max_ratio"] = s.max_ratio;
  j["all_passed"] = s.all_passed;
  j["excluded_draws"] = s.excluded_draws;
  j["flagged_below_threshold"] = s.flagged_below_threshold;
  if (s.rate) {
    ordered_json r = ordered_json::object();
    r["exponent_p"] = s.rate->exponent_p;
    r["prefactor"] = s.rate->prefactor;
    r["r_squared"] = s.rate->r_squared;
    r["n_min"] = s.rate->n_min;
    r["n_max"] = s.rate->n_max;
    r["points"] = s.rate->points;
    r["dropped_zero"] = s.rate->dropped_zero;
    j["rate"] = r;
  } else {
    j["rate"] = nullptr;
  }
  if (s.rate_window) {
    j["rate_window"] = ordered_json::array({s.rate_window->first, s.rate_window->second});
  } else {
    j["rate_window"] = nullptr;
  }
  j["rate_ok"] = s.rate_ok;
  ordered_json c = ordered_json::object();
  for (const auto& [k, v] : s.constants) c[k] = v;
  j["constants"] = c;
  return j;
}

inline Summary summary_from_json(const ordered_json& j) {
  Summary s;
  s.records = j.at("records").get<std::size_t>();
  s.failed = j.at("failed").get<std::size_t>();
  s.max_ratio = detail::read_double(j.at("max_ratio"));
  s.all_passed = j.at("all_passed").get<bool>();
  s.excluded_draws = j.at("excluded_draws").get<std::size_t>();
  s.flagged_below_threshold = j.at("flagged_below_threshold").get<std::size_t>();
  if (!j.at("rate").is_null()) {
    const auto& r = j.at("rate");
    RateEstimate e;
    e.exponent_p = r.at("exponent_p").get<double>();
    e.prefactor = r.at("prefactor").get<double>();
    e.r_squared = r.at("r_squared").get<double>();
    e.n_min = r.at("n_min").get<double>();
    e.n_max = r.at("n_max").get<double>();
    e.points = r.at("points").get<std::size_t>();
    e.dropped_zero = r.at("dropped_zero").get<std::size_t>();
    s.rate = e;
  }
  if (!j.at("rate_window").is_null()) {
    const auto& w = j.at("rate_window");
    s.rate_window = std::make_pair(w.at(0).get<double>(), w.at(1).get<double>());
  }
  s.rate_ok = j.at("rate_ok").get<bool>();
  for (const auto& [k, v] : j.at("constants").items()) s.constants[k] = detail::read_double(v);
  return s;
}

inline constexpr std::string_view kCsvHeader = "experiment_id,n,t,empirical,bound,ratio,passed";

inline std::string slack_line() {
  return "# slack_rel=" + detail::fmt17(tol::slack_rel) + " slack_abs=" + detail::fmt17(tol::slack_abs);
}

/// CSV: one comment line carrying the slack, the header row, then one row
/// per record.
inline std::string emit_csv(const Report& report) {
  if (report.records.empty()) throw InvalidInput("emit_report: no records");
  std::string out = slack_line();
  out += "\n";
  out += kCsvHeader;
  out += "\n";
  for (const auto& r : report.records) {
    if (r.experiment_id.find_first_of(",\"\n") != std::string::npos) {
      throw InvalidInput("emit_report: experiment_id must not contain ',', '\"' or newlines");
    }
    out += r.experiment_id;
    out += ',';
    out += std::to_string(r.n);
    out += ',';
    out += detail::fmt17(r.t);
    out += ',';
    out += detail::fmt17(r.empirical);
    out += ',';
    out += detail::fmt17(r.bound);
    out += ',';
    out += detail::fmt17(r.ratio);
    out += ',';
    out += r.passed ? "true" : "false";
    out += '\n';
  }
  return out;
}

inline std::string emit_json(const Report& report) {
  if (report.records.empty()) throw InvalidInput("emit_report: no records");
  ordered_json header = report.header;
  header["slack_rel"] = tol::slack_rel;
  header["slack_abs"] = tol::slack_abs;
  ordered_json j = ordered_json::object();
  j["header"] = header;
  ordered_json records = ordered_json::array();
  for (const auto& r : report.records) records.push_back(record_to_json(r));
  j["records"] = records;
  j["summary"] = summary_to_json(report.summary);
  return dump_json(j);
}

inline std::string emit_report(const Report& report, Format format) {
  return format == Format::csv ? emit_csv(report) : emit_json(report);
}

inline Report parse_json_report(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput(std::string("report: malformed JSON: ") + e.what());
  }
  try {
    Report out;
    out.header = j.at("header");
    for (const auto& r : j.at("records")) out.records.push_back(record_from_json(r));
    out.summary = summary_from_json(j.at("summary"));
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("report: unexpected layout: ") + e.what());
  }
}

inline double parse_csv_double(const std::string& s) {
  if (s == "inf") return HUGE_VAL;
  if (s == "-inf") return -HUGE_VAL;
  if (s == "nan") return std::nan("");
  std::size_t used = 0;
  const double x = std::stod(s, &used);
  if (used != s.size()) throw InvalidInput("report: bad number '" + s + "'");
  return x;
}

inline std::vector<ErrorRecord> parse_csv_records(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  bool header_seen = false;
  std::vector<ErrorRecord> out;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != kCsvHeader) throw InvalidInput("report: unexpected CSV header");
      header_seen = true;
      continue;
    }
    std::vector<std::string> cells;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (cells.size() != 7) throw InvalidInput("report: CSV row needs 7 cells");
    try {
      ErrorRecord r;
      r.experiment_id = cells[0];
      r.n = std::stoull(cells[1]);
      r.t = parse_csv_double(cells[2]);
      r.empirical = parse_csv_double(cells[3]);
      r.bound = parse_csv_double(cells[4]);
      r.ratio = parse_csv_double(cells[5]);
      if (cells[6] != "true" && cells[6] != "false") throw InvalidInput("report: bad passed cell");
      r.passed = cells[6] == "true";
      out.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw InvalidInput("report: malformed CSV row: " + line);
    }
  }
  if (!header_seen) throw InvalidInput("report: missing CSV header");
  return out;
}

/// Parses either layout; JSON is recognised by its leading brace.
inline Report parse_report(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return parse_json_report(text);
  Report out;
  out.records = parse_csv_records(text);
  summarize_records(out.summary, out.records);
  return out;
}

/// Concatenates records in input order and recomputes the summary. A merged
/// report passes only if every input passed.
inline Report merge_reports(const std::vector<Report>& reports) {
  if (reports.empty()) throw InvalidInput("merge: no reports");
  Report out;
  ordered_json sources = ordered_json::array();
  bool inputs_passed = true;
  for (const auto& r : reports) {
    sources.push_back(r.header);
    out.records.insert(out.records.end(), r.records.begin(), r.records.end());
    out.summary.excluded_draws += r.summary.excluded_draws;
    out.summary.flagged_below_threshold += r.summary.flagged_below_threshold;
    inputs_passed = inputs_passed && r.summary.all_passed;
  }
  out.header["kind"] = "merged";
  out.header["sources"] = sources;
  summarize_records(out.summary, out.records);
  out.summary.all_passed = out.summary.all_passed && inputs_passed;
  return out;
}

}  // namespace chernoff::harness
