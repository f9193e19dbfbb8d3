#pragma once

// JSON specs for systems, measures, partitions and points, and the
// experiment configuration shared by every CLI command.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "sftlab/error.hpp"
#include "sftlab/markov_measure.hpp"
#include "sftlab/partition.hpp"
#include "sftlab/random.hpp"
#include "sftlab/shift_space.hpp"

namespace sftlab {

using Json = nlohmann::ordered_json;

/// A malformed or inconsistent input; the message starts with the field path.
class ConfigError : public InvalidArgument {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : InvalidArgument(field + ": " + what), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

inline constexpr const char* kSeedEnv = "SFTLAB_SEED";

namespace detail {

template <typename F>
auto guarded(const std::string& field, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const Json::exception& e) {
    throw ConfigError(field, e.what());
  } catch (const Error& e) {
    throw ConfigError(field, e.what());
  }
}

inline std::vector<std::vector<double>> read_matrix(const Json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) throw ConfigError(field, "expected a nonempty array of rows");
  std::vector<std::vector<double>> rows;
  for (std::size_t r = 0; r < j.size(); ++r) {
    const std::string rf = field + "[" + std::to_string(r) + "]";
    if (!j[r].is_array()) throw ConfigError(rf, "expected an array");
    if (j[r].size() != j.size()) throw ConfigError(rf, "row length " + std::to_string(j[r].size()) +
                                                           " but " + std::to_string(j.size()) + " rows");
    std::vector<double> row;
    for (std::size_t c = 0; c < j[r].size(); ++c) {
      if (!j[r][c].is_number())
        throw ConfigError(rf + "[" + std::to_string(c) + "]", "expected a number");
      row.push_back(j[r][c].get<double>());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Word read_word(const Json& j, const std::string& field, bool allow_empty) {
  if (!j.is_string()) throw ConfigError(field, "expected a word string such as \"0101\"");
  const std::string s = j.get<std::string>();
  if (s.empty() && !allow_empty) throw ConfigError(field, "empty word");
  return guarded(field, [&] { return parse_word(s); });
}

}  // namespace detail

/// { "preset": name } or { "alphabet": N, "adjacency": [[0/1,...],...] }.
/// A bare string is read as a preset name.
inline SftSystem parse_system(const Json& j, const std::string& field = "system") {
  if (j.is_string() || (j.is_object() && j.contains("preset"))) {
    const std::string name = j.is_string() ? j.get<std::string>() : j.at("preset").get<std::string>();
    if (name == "full-2" || name == "two-state-lazy" || name == "full-2-bernoulli") return SftSystem::full_shift(2);
    if (name == "golden-mean" || name == "golden-mean-parry") return SftSystem::golden_mean();
    if (name == "period-2") return SftSystem::period_two();
    if (name == "cyclic-4") return SftSystem::cyclic_four();
    throw ConfigError(field + ".preset", "unknown system preset \"" + name + "\"");
  }
  if (!j.is_object()) throw ConfigError(field, "expected an object or a preset name");
  if (!j.contains("alphabet")) throw ConfigError(field + ".alphabet", "missing");
  if (!j.contains("adjacency")) throw ConfigError(field + ".adjacency", "missing");
  if (!j.at("alphabet").is_number_integer()) throw ConfigError(field + ".alphabet", "expected an integer");
  const int n = j.at("alphabet").get<int>();
  const Json& a = j.at("adjacency");
  if (!a.is_array()) throw ConfigError(field + ".adjacency", "expected an array of rows");
  std::vector<std::vector<int>> adj;
  for (std::size_t r = 0; r < a.size(); ++r) {
    const std::string rf = field + ".adjacency[" + std::to_string(r) + "]";
    if (!a[r].is_array()) throw ConfigError(rf, "expected an array");
    std::vector<int> row;
    for (std::size_t c = 0; c < a[r].size(); ++c) {
      const Json& v = a[r][c];
      if (!v.is_number_integer() || (v.get<int>() != 0 && v.get<int>() != 1))
        throw ConfigError(rf + "[" + std::to_string(c) + "]", "entries must be 0 or 1");
      row.push_back(v.get<int>());
    }
    adj.push_back(std::move(row));
  }
  return detail::guarded(field, [&] { return SftSystem(n, adj); });
}

inline std::optional<MarkovMeasure> measure_preset(const std::string& name, double p = 0.5) {
  if (name == "full-2-bernoulli") return bernoulli_measure(p);
  if (name == "golden-mean-parry") return golden_mean_parry();
  if (name == "two-state-lazy") return two_state_lazy();
  if (name == "period-2") return period_two();
  if (name == "cyclic-4") return cyclic_four();
  return std::nullopt;
}

inline std::vector<std::string> measure_preset_names() {
  return {"full-2-bernoulli", "golden-mean-parry", "two-state-lazy", "period-2", "cyclic-4"};
}

/// { "preset": name, "p": 0.5 } or { "transition": [[...]], "strict": bool }.
/// A preset wins over a matrix given alongside it. Without a system the
/// support of the matrix is used.
inline MarkovMeasure parse_measure(const Json& j, const std::optional<SftSystem>& system = std::nullopt,
                                   const std::string& field = "measure") {
  if (j.is_string() || (j.is_object() && j.contains("preset"))) {
    const std::string name = j.is_string() ? j.get<std::string>() : j.at("preset").get<std::string>();
    double p = 0.5;
    if (j.is_object() && j.contains("p")) {
      if (!j.at("p").is_number()) throw ConfigError(field + ".p", "expected a number");
      p = j.at("p").get<double>();
    }
    auto m = detail::guarded(field + ".p", [&] { return measure_preset(name, p); });
    if (!m) throw ConfigError(field + ".preset", "unknown measure preset \"" + name + "\"");
    if (system && !(*system == m->system()))
      throw ConfigError(field + ".preset", "preset \"" + name + "\" lives on a different system");
    return *m;
  }
  if (!j.is_object()) throw ConfigError(field, "expected an object or a preset name");
  if (!j.contains("transition")) throw ConfigError(field + ".transition", "missing");
  const auto rows = detail::read_matrix(j.at("transition"), field + ".transition");
  const int n = static_cast<int>(rows.size());
  Matrix p(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) p(a, b) = rows[a][b];
  bool strict = false;
  if (j.contains("strict")) {
    if (!j.at("strict").is_boolean()) throw ConfigError(field + ".strict", "expected true or false");
    strict = j.at("strict").get<bool>();
  }
  return detail::guarded(field + ".transition", [&] {
    detail::check_square_stochastic(p);
    if (!system) return MarkovMeasure::on_support(p);
    return MarkovMeasure(*system, p, strict);
  });
}

inline Json matrix_json(const Matrix& p) {
  Json rows = Json::array();
  for (Eigen::Index a = 0; a < p.rows(); ++a) {
    Json row = Json::array();
    for (Eigen::Index b = 0; b < p.cols(); ++b) row.push_back(p(a, b));
    rows.push_back(std::move(row));
  }
  return rows;
}

/// The expanded form of a measure: system, transition and stationary vector.
inline Json measure_json(const MarkovMeasure& m) {
  Json j;
  j["alphabet"] = m.alphabet_size();
  j["adjacency"] = m.system().adjacency();
  j["transition"] = matrix_json(m.transition());
  Json pi = Json::array();
  for (Eigen::Index a = 0; a < m.stationary().size(); ++a) pi.push_back(m.stationary()(a));
  j["stationary"] = pi;
  return j;
}

/// { "window": [a,b], "labels": {"word": label,...} } or { "window": [a,b], "fine": true }.
/// An array of specs is their join.
inline CoordinatePartition parse_partition(const Json& j, const SftSystem& sys, const std::string& field = "partition") {
  if (j.is_array()) {
    if (j.empty()) throw ConfigError(field, "empty join");
    CoordinatePartition p = parse_partition(j[0], sys, field + "[0]");
    for (std::size_t i = 1; i < j.size(); ++i)
      p = p.join(parse_partition(j[i], sys, field + "[" + std::to_string(i) + "]"));
    return p;
  }
  if (!j.is_object()) throw ConfigError(field, "expected an object");
  if (!j.contains("window")) throw ConfigError(field + ".window", "missing");
  const Json& w = j.at("window");
  if (!w.is_array() || w.size() != 2 || !w[0].is_number_integer() || !w[1].is_number_integer())
    throw ConfigError(field + ".window", "expected [a, b] with integers a <= b");
  const Coord a = w[0].get<Coord>(), b = w[1].get<Coord>();
  if (b < a) throw ConfigError(field + ".window", "expected [a, b] with integers a <= b");
  const bool fine = j.contains("fine") && j.at("fine").is_boolean() && j.at("fine").get<bool>();
  if (fine) {
    if (j.contains("labels")) throw ConfigError(field, "give either \"fine\" or \"labels\", not both");
    return detail::guarded(field, [&] { return CoordinatePartition::fine(sys, a, b); });
  }
  if (!j.contains("labels")) throw ConfigError(field + ".labels", "missing (or set \"fine\": true)");
  const Json& l = j.at("labels");
  if (!l.is_object()) throw ConfigError(field + ".labels", "expected an object word -> label");
  std::map<Word, int> labels;
  for (const auto& [key, val] : l.items()) {
    const std::string lf = field + ".labels." + key;
    if (!val.is_number_integer()) throw ConfigError(lf, "expected an integer label");
    labels[detail::read_word(Json(key), lf, false)] = val.get<int>();
  }
  return detail::guarded(field + ".labels", [&] { return CoordinatePartition::from_labels(sys, a, b, labels); });
}

/// { "left_period": "0", "left_transient": "", "center": "01",
///   "right_transient": "", "right_period": "1", "origin_offset": 0 }.
inline Point parse_point(const Json& j, const SftSystem& sys, const std::string& field = "point") {
  if (!j.is_object()) throw ConfigError(field, "expected an object");
  auto word = [&](const char* key, bool required) -> Word {
    if (!j.contains(key)) {
      if (required) throw ConfigError(field + "." + key, "missing");
      return {};
    }
    return detail::read_word(j.at(key), field + "." + key, !required);
  };
  const Word lp = word("left_period", true);
  const Word lt = word("left_transient", false);
  const Word c = word("center", false);
  const Word rt = word("right_transient", false);
  const Word rp = word("right_period", true);
  Coord origin = 0;
  if (j.contains("origin_offset")) {
    if (!j.at("origin_offset").is_number_integer()) throw ConfigError(field + ".origin_offset", "expected an integer");
    origin = j.at("origin_offset").get<Coord>();
  } else {
    origin = static_cast<Coord>(lt.size());
  }
  return detail::guarded(field, [&] { return Point::from_parts(sys, lp, lt, c, rt, rp, origin); });
}

inline Json point_json(const Point& x) {
  Json j;
  j["left_period"] = word_to_string(x.left_period());
  j["core"] = word_to_string(x.core());
  j["core_begin"] = x.core_begin();
  j["right_period"] = word_to_string(x.right_period());
  return j;
}

inline Json read_json_file(const std::string& path, const std::string& field) {
  std::ifstream in(path);
  if (!in) throw ConfigError(field, "cannot open \"" + path + "\"");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(field, "malformed JSON in \"" + path + "\": " + e.what());
  }
}

// Experiment configuration ------------------------------------------------

struct ExperimentConfig {
  Json measure_spec = "full-2-bernoulli";
  std::optional<Json> system_spec;
  MarkovMeasure measure = bernoulli_measure();
  std::uint64_t seed = kDefaultSeed;
  std::string seed_source = "default";  // default | env | config
  int depth = 12;
  Coord horizon = 64;
  long long samples = 1000;
  std::optional<double> tol;  // overrides the identity tolerance of verify
  std::string format = "json";
  bool timing = false;
  Json params = Json::object();  // command-specific extras, echoed as given

  /// Inputs echoed into every report; never contains wall-clock data.
  Json echo() const {
    Json j;
    if (system_spec) j["system"] = *system_spec;
    j["measure"] = measure_spec;
    j["measure_expanded"] = measure_json(measure);
    j["seed"] = seed;
    j["seed_source"] = seed_source;
    j["depth"] = depth;
    j["horizon"] = horizon;
    j["samples"] = samples;
    if (tol) j["tol"] = *tol;
    else j["tol"] = nullptr;
    j["format"] = format;
    if (!params.empty()) j["params"] = params;
    return j;
  }
};

inline std::uint64_t parse_seed_text(const std::string& text, const std::string& field) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &used, 0);
  } catch (const std::exception&) {
    throw ConfigError(field, "not an unsigned integer: \"" + text + "\"");
  }
  if (used != text.size() || text.starts_with('-'))
    throw ConfigError(field, "not an unsigned integer: \"" + text + "\"");
  return v;
}

/// Default seed: SFTLAB_SEED when set, the built-in constant otherwise.
inline std::pair<std::uint64_t, std::string> default_seed() {
  if (const char* env = std::getenv(kSeedEnv); env && *env)
    return {parse_seed_text(env, kSeedEnv), "env"};
  return {kDefaultSeed, "default"};
}

/// Validates a config object. Recognized keys: system, measure, seed, depth,
/// horizon, samples, tol, format, timing, params. Unknown keys are errors.
inline ExperimentConfig parse_config(const Json& j) {
  if (!j.is_object()) throw ConfigError("config", "expected a JSON object");
  static const std::vector<std::string> known = {"system", "measure", "seed",   "depth",  "horizon",
                                                 "samples", "tol",    "format", "timing", "params"};
  for (const auto& [key, _] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end()) throw ConfigError(key, "unknown field");

  ExperimentConfig c;
  std::optional<SftSystem> sys;
  if (j.contains("system")) {
    c.system_spec = j.at("system");
    sys = parse_system(j.at("system"));
  }
  if (j.contains("measure")) c.measure_spec = j.at("measure");
  c.measure = parse_measure(c.measure_spec, sys);

  if (j.contains("seed")) {
    const Json& s = j.at("seed");
    if (s.is_number_unsigned()) c.seed = s.get<std::uint64_t>();
    else if (s.is_string()) c.seed = parse_seed_text(s.get<std::string>(), "seed");
    else throw ConfigError("seed", "expected a nonnegative integer");
    c.seed_source = "config";
  } else {
    std::tie(c.seed, c.seed_source) = default_seed();
  }

  auto positive_int = [&](const char* key, auto& out, long long lo) {
    if (!j.contains(key)) return;
    const Json& v = j.at(key);
    if (!v.is_number_integer() || v.get<long long>() < lo)
      throw ConfigError(key, "expected an integer >= " + std::to_string(lo));
    out = static_cast<std::decay_t<decltype(out)>>(v.get<long long>());
  };
  positive_int("depth", c.depth, 1);
  positive_int("horizon", c.horizon, 1);
  positive_int("samples", c.samples, 1);

  if (j.contains("tol") && !j.at("tol").is_null()) {
    const Json& t = j.at("tol");
    if (!t.is_number() || !(t.get<double>() >= 0.0)) throw ConfigError("tol", "expected a number >= 0");
    c.tol = t.get<double>();
  }
  if (j.contains("format")) {
    if (!j.at("format").is_string()) throw ConfigError("format", "expected \"json\" or \"csv\"");
    c.format = j.at("format").get<std::string>();
  }
  if (c.format != "json" && c.format != "csv") throw ConfigError("format", "expected \"json\" or \"csv\"");
  if (j.contains("timing")) {
    if (!j.at("timing").is_boolean()) throw ConfigError("timing", "expected true or false");
    c.timing = j.at("timing").get<bool>();
  }
  if (j.contains("params")) {
    if (!j.at("params").is_object()) throw ConfigError("params", "expected an object");
    c.params = j.at("params");
  }
  return c;
}

inline ExperimentConfig parse_config_file(const std::string& path) { return parse_config(read_json_file(path, "config")); }

}  // namespace sftlab
