#pragma once

// Reports: inputs, provenance-tagged results, assertions. JSON and CSV
// emission with a fixed field order and 15 significant digits.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "sftlab/io.hpp"

namespace sftlab {

/// How a number was obtained.
struct Provenance {
  enum class Kind { exact, bracketed, sampled };
  Kind kind = Kind::exact;
  double width = 0.0;         // bracketed
  long long samples = 0;      // sampled
  double bound = 0.0;         // sampled
  std::string bound_formula;  // sampled
  std::string seed_path;      // sampled

  static Provenance exact() { return {}; }
  static Provenance bracketed(double width) {
    Provenance p;
    p.kind = Kind::bracketed;
    p.width = width;
    return p;
  }
  static Provenance sampled(long long n, double bound, std::string formula, std::string seed_path) {
    Provenance p;
    p.kind = Kind::sampled;
    p.samples = n;
    p.bound = bound;
    p.bound_formula = std::move(formula);
    p.seed_path = std::move(seed_path);
    return p;
  }

  const char* kind_name() const {
    switch (kind) {
      case Kind::exact: return "exact";
      case Kind::bracketed: return "bracketed";
      case Kind::sampled: return "sampled";
    }
    return "exact";
  }

  Json to_json() const {
    Json j;
    j["kind"] = kind_name();
    if (kind == Kind::bracketed) j["width"] = width;
    if (kind == Kind::sampled) {
      j["samples"] = samples;
      j["bound"] = bound;
      j["bound_formula"] = bound_formula;
      j["seed_path"] = seed_path;
    }
    return j;
  }

  std::string short_text() const {
    char buf[160];
    switch (kind) {
      case Kind::exact: return "exact";
      case Kind::bracketed:
        std::snprintf(buf, sizeof buf, "bracketed(width=%.3g)", width);
        return buf;
      case Kind::sampled:
        std::snprintf(buf, sizeof buf, "sampled(N=%lld,bound=%.3g,seed=%s)", samples, bound, seed_path.c_str());
        return buf;
    }
    return "exact";
  }
};

struct Record {
  std::string name;
  Json value;
  Provenance provenance;
};

struct Assertion {
  std::string group;  // criterion number for verify, command name otherwise
  std::string name;
  bool passed = false;
  Json observed;
  std::string expected;
  Provenance provenance;
  std::string detail;
};

struct Report {
  std::string command;
  Json inputs = Json::object();
  std::vector<Record> results;
  std::vector<Assertion> assertions;
  Json summary = Json::object();   // command specific, e.g. per-criterion pass lines
  std::optional<Json> timing;      // only with --timing; kept out of byte-compared output otherwise

  bool all_passed() const {
    for (const auto& a : assertions)
      if (!a.passed) return false;
    return true;
  }

  void add(std::string name, Json value, Provenance p = Provenance::exact()) {
    results.push_back({std::move(name), std::move(value), std::move(p)});
  }

  Assertion& check(std::string group, std::string name, bool passed, Json observed, std::string expected,
                   Provenance p = Provenance::exact(), std::string detail = {}) {
    assertions.push_back({std::move(group), std::move(name), passed, std::move(observed), std::move(expected),
                          std::move(p), std::move(detail)});
    return assertions.back();
  }
};

namespace detail {

inline double round_sig15(double v) {
  if (!std::isfinite(v) || v == 0.0) return v;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return std::strtod(buf, nullptr);
}

/// Rounds every float in place; non-finite numbers become strings.
inline void round_floats(Json& j) {
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (std::isnan(v)) j = "nan";
    else if (std::isinf(v)) j = v > 0 ? "inf" : "-inf";
    else j = round_sig15(v);
  } else if (j.is_structured()) {
    for (auto& child : j) round_floats(child);
  }
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

inline Json report_json(const Report& r) {
  Json j;
  j["schema"] = 1;
  j["command"] = r.command;
  j["inputs"] = r.inputs;
  Json results = Json::array();
  for (const auto& rec : r.results) {
    Json e;
    e["name"] = rec.name;
    e["value"] = rec.value;
    e["provenance"] = rec.provenance.to_json();
    results.push_back(std::move(e));
  }
  j["results"] = std::move(results);
  Json asserts = Json::array();
  for (const auto& a : r.assertions) {
    Json e;
    e["group"] = a.group;
    e["name"] = a.name;
    e["passed"] = a.passed;
    e["observed"] = a.observed;
    e["expected"] = a.expected;
    e["provenance"] = a.provenance.to_json();
    if (!a.detail.empty()) e["detail"] = a.detail;
    asserts.push_back(std::move(e));
  }
  j["assertions"] = std::move(asserts);
  if (!r.summary.empty()) j["summary"] = r.summary;
  std::size_t failed = 0;
  for (const auto& a : r.assertions) failed += a.passed ? 0 : 1;
  j["passed"] = failed == 0;
  j["failed_assertions"] = failed;
  if (r.timing) j["timing"] = *r.timing;
  detail::round_floats(j);
  return j;
}

/// One header line plus one row per assertion.
inline std::string report_csv(const Report& r) {
  std::string out = "group,name,passed,observed,expected,provenance\n";
  for (const auto& a : r.assertions) {
    Json obs = a.observed;
    detail::round_floats(obs);
    out += detail::csv_field(a.group) + "," + detail::csv_field(a.name) + "," + (a.passed ? "true" : "false") + "," +
           detail::csv_field(obs.dump()) + "," + detail::csv_field(a.expected) + "," +
           detail::csv_field(a.provenance.short_text()) + "\n";
  }
  return out;
}

inline std::string render_report(const Report& r, const std::string& format) {
  if (format == "json") return report_json(r).dump(2) + "\n";
  if (format == "csv") return report_csv(r);
  throw ConfigError("format", "expected \"json\" or \"csv\"");
}

/// Writes to `path`, or to stdout when the path is empty or "-".
inline void emit_report(const Report& r, const std::string& format, const std::string& path) {
  const std::string text = render_report(r, format);
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write report to \"" + path + "\"");
  out << text;
  if (!out) throw Error("write failed for \"" + path + "\"");
}

}  // namespace sftlab
