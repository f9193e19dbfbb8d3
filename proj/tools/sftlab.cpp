// sftlab: command-line front end. Exit status 0 = all assertions hold,
// 1 = an assertion failed, 2 = bad configuration.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sftlab/sftlab.hpp"

using namespace sftlab;

namespace {

struct Common {
  std::string config;
  std::string system;
  std::string measure;
  std::optional<int> depth;
  std::optional<long long> horizon;
  std::optional<long long> samples;
  std::optional<std::string> seed;
  std::optional<double> tol;
  std::string format = "json";
  std::string out = "-";
  bool timing = false;
};

/// Inline JSON, a path to a JSON file, or a bare preset name.
Json json_arg(const std::string& text, const std::string& field) {
  if (text.empty()) throw ConfigError(field, "empty value");
  if (text.front() == '{' || text.front() == '[') {
    try {
      return Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw ConfigError(field, std::string("malformed JSON: ") + e.what());
    }
  }
  if (std::filesystem::exists(text)) return read_json_file(text, field);
  return Json(text);
}

ExperimentConfig make_config(const Common& c, const Json& params) {
  Json j = c.config.empty() ? Json::object() : read_json_file(c.config, "config");
  if (!j.is_object()) throw ConfigError("config", "expected a JSON object");
  if (!c.system.empty()) j["system"] = json_arg(c.system, "system");
  if (!c.measure.empty()) j["measure"] = json_arg(c.measure, "measure");
  if (c.depth) j["depth"] = *c.depth;
  if (c.horizon) j["horizon"] = *c.horizon;
  if (c.samples) j["samples"] = *c.samples;
  if (c.seed) j["seed"] = *c.seed;
  if (c.tol) j["tol"] = *c.tol;
  j["format"] = c.format;
  if (c.timing) j["timing"] = true;
  if (!params.empty()) {
    Json merged = j.contains("params") ? j["params"] : Json::object();
    for (const auto& [k, v] : params.items()) merged[k] = v;
    j["params"] = merged;
  }
  return parse_config(j);
}

/// "01@-2" is the cylinder [01] starting at -2; "@" part defaults to 0.
Cylinder parse_cylinder(const std::string& text, const SftSystem& sys, const std::string& field) {
  const auto at = text.find('@');
  const std::string w = text.substr(0, at);
  Coord start = 0;
  if (at != std::string::npos) {
    try {
      std::size_t used = 0;
      start = std::stoll(text.substr(at + 1), &used);
      if (used != text.size() - at - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ConfigError(field, "bad cylinder \"" + text + "\", expected WORD@START");
    }
  }
  if (w.empty()) return Cylinder::whole_space();
  Cylinder c{start, detail::read_word(Json(w), field, false)};
  if (!sys.is_allowed(c.word)) throw ConfigError(field, "cylinder word \"" + w + "\" is not allowed");
  return c;
}

/// "3", "-2..4", "5.." (right ray), "..-1" (left ray), comma separated.
CoordinateSet parse_coords(const std::string& text) {
  CoordinateSet s;
  std::stringstream ss(text);
  std::string item;
  auto num = [&](const std::string& t) -> Coord {
    try {
      std::size_t used = 0;
      const Coord v = std::stoll(t, &used);
      if (used == t.size()) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError("given", "bad coordinate \"" + t + "\"");
  };
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      s.insert(num(item));
      continue;
    }
    const std::string a = item.substr(0, dots), b = item.substr(dots + 2);
    if (a.empty() && b.empty()) throw ConfigError("given", "\"..\" needs at least one end");
    if (a.empty()) s.insert_left_ray(num(b));
    else if (b.empty()) s.insert_right_ray(num(a));
    else s.insert_interval(num(a), num(b));
  }
  return s;
}

Json bracket_json(const EntropyBracket& b) { return Json{{"lower", b.lower}, {"upper", b.upper}, {"width", b.width()}}; }
Provenance bracket_prov(const EntropyBracket& b) { return detail::bracket_prov(b); }

CoordinatePartition partition_arg(const std::string& text, const SftSystem& sys) {
  if (text.empty()) return CoordinatePartition::fine(sys, 0, 0);
  return parse_partition(json_arg(text, "partition"), sys);
}

int finish(const Report& r, const ExperimentConfig& cfg, const std::string& out) {
  emit_report(r, cfg.format, out);
  return r.all_passed() ? 0 : 1;
}

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "JSON config file");
  app->add_option("--system", c.system, "system preset, JSON file or inline JSON");
  app->add_option("--measure", c.measure, "measure preset, JSON file or inline JSON");
  app->add_option("--depth", c.depth, "bracketing depth");
  app->add_option("--horizon", c.horizon, "sampling or classification horizon");
  app->add_option("--samples", c.samples, "number of samples");
  app->add_option("--seed", c.seed, "root seed (default: $SFTLAB_SEED or built in)");
  app->add_option("--tol", c.tol, "identity tolerance");
  app->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app->add_option("--out", c.out, "output path, - for stdout");
  app->add_flag("--timing", c.timing, "record wall-clock times and enforce budgets");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropy, excellent partitions and asymptotic pairs on subshifts of finite type"};
  app.require_subcommand(1);
  Common c;

  // entropy
  auto* ent = app.add_subcommand("entropy", "entropy rate, H(P) and h(P,T) of a partition");
  std::string ent_part;
  ent->add_option("--partition", ent_part, "partition spec (file or inline JSON); default fine [0,0]");

  // condent
  auto* ce = app.add_subcommand("condent", "H(P | coordinates S)");
  std::string ce_part, ce_given = "1..";
  ce->add_option("--partition", ce_part, "partition spec");
  ce->add_option("--given", ce_given, "coordinates, e.g. \"1..\" or \"-3..-1,4\"");

  // excellent
  auto* ex = app.add_subcommand("excellent", "choose spacings k_n for a refining sequence Q_n");
  int ex_levels = 4, ex_kmax = kDefaultKMax;
  double ex_base = 0.5;
  std::string ex_family = "indicator", ex_block = "00";
  ex->add_option("--levels", ex_levels, "number of levels")->check(CLI::Range(1, 12));
  ex->add_option("--eps-base", ex_base, "eps_n = base^n");
  ex->add_option("--k-max", ex_kmax, "largest spacing tried");
  ex->add_option("--family", ex_family, "indicator or fine")->check(CLI::IsMember({"indicator", "fine"}));
  ex->add_option("--block", ex_block, "block whose indicator builds Q_n");

  // square
  auto* sq = app.add_subcommand("square", "conditional square nu_n and its limit");
  int sq_n = 0, sq_diag = 0, sq_profile = -1;
  std::vector<std::string> sq_rect;
  sq->add_option("--n", sq_n, "level n");
  sq->add_option("--rect", sq_rect, "two cylinders WORD@START")->expected(2);
  sq->add_option("--diag", sq_diag, "diagonal depth L");
  sq->add_option("--profile", sq_profile, "profile length N");

  // pairs
  auto* pr = app.add_subcommand("pairs", "asymptotic, proximal and Li-Yorke pairs");
  pr->require_subcommand(1);
  auto* pc = pr->add_subcommand("classify", "classify a pair of points");
  std::string px, py;
  pc->add_option("--x", px, "point spec")->required();
  pc->add_option("--y", py, "point spec")->required();
  auto* ps = pr->add_subcommand("sample", "sample pairs from nu_0 and classify them");
  auto* pd = pr->add_subcommand("delta", "delta = sup distance on the support of lambda");
  auto* pse = pr->add_subcommand("separate", "asymptotic pair separated by a two-label partition");
  std::string sep_part;
  pse->add_option("--partition", sep_part, "partition spec; default x0");
  auto* pb = pr->add_subcommand("branching", "stable class counts");
  std::string br_future = "0";
  pb->add_option("--future", br_future, "future word from coordinate 1");

  // verify
  auto* vf = app.add_subcommand("verify", "run the acceptance criteria");
  std::string only;
  vf->add_option("--only", only, "criteria: numbers and groups (entropy, excellent, square, pairs, lifts)");

  for (CLI::App* sub : {ent, ce, ex, sq, pc, ps, pd, pse, pb, vf}) add_common(sub, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*vf) {
      const ExperimentConfig cfg = make_config(c, Json{{"only", only}});
      VerifyResult res = run_verify(verify_options(cfg, only));
      res.report.inputs = cfg.echo();
      for (const auto& oc : res.criteria) std::cerr << criterion_line(oc, cfg.timing) << "\n";
      return finish(res.report, cfg, c.out);
    }

    if (*ent) {
      const ExperimentConfig cfg = make_config(c, Json{{"partition", ent_part.empty() ? Json(nullptr) : json_arg(ent_part, "partition")}});
      const auto& m = cfg.measure;
      const auto p = partition_arg(ent_part, m.system());
      Report r;
      r.command = "entropy";
      r.inputs = cfg.echo();
      const double h = entropy_rate(m);
      r.add("entropy_rate", h);
      r.add("static_entropy", entropy(p, m));
      const EntropyBracket pe = process_entropy(p, m, cfg.depth);
      r.add("process_entropy", bracket_json(pe), bracket_prov(pe));
      r.check("entropy", "process entropy <= entropy rate", pe.lower <= h + kIdentityTol, bracket_json(pe), "<= h(mu)",
              bracket_prov(pe));
      if (p.is_fine())
        r.check("entropy", "fine partition: process entropy = entropy rate", pe.contains(h, cfg.tol.value_or(kIdentityTol)),
                bracket_json(pe), "contains h(mu)", bracket_prov(pe));
      return finish(r, cfg, c.out);
    }

    if (*ce) {
      const ExperimentConfig cfg = make_config(c, Json{{"given", ce_given}});
      const auto& m = cfg.measure;
      const auto p = partition_arg(ce_part, m.system());
      const CoordinateSet s = parse_coords(ce_given);
      Report r;
      r.command = "condent";
      r.inputs = cfg.echo();
      const EntropyBracket b = cond_entropy(p, s, m, cfg.depth);
      r.add("conditional_entropy", bracket_json(b), bracket_prov(b));
      r.add("given", s.to_string());
      r.check("condent", "0 <= H(P|S) <= H(P)", b.lower >= -kIdentityTol && b.upper <= entropy(p, m) + kIdentityTol,
              bracket_json(b), "within [0, H(P)]", bracket_prov(b));
      return finish(r, cfg, c.out);
    }

    if (*ex) {
      const ExperimentConfig cfg = make_config(
          c, Json{{"levels", ex_levels}, {"eps_base", ex_base}, {"k_max", ex_kmax}, {"family", ex_family}, {"block", ex_block}});
      const auto& m = cfg.measure;
      const auto qs = ex_family == "fine" ? fine_sequence(m.system(), ex_levels)
                                          : block_indicator_sequence(m.system(), ex_levels,
                                                                     detail::read_word(Json(ex_block), "block", false));
      Report r;
      r.command = "excellent";
      r.inputs = cfg.echo();
      const SpacingSchedule sched = [&] {
        try {
          return SpacingSchedule::geometric(ex_levels, ex_base, ex_kmax, cfg.depth);
        } catch (const InvalidArgument& e) {
          throw ConfigError("eps-base", e.what());
        }
      }();
      try {
        const ExcellentReport rep = choose_spacings(qs, sched, m);
        r.add("spacings", rep.spacings);
        for (const auto& lv : rep.levels) {
          Json row{{"n", lv.n}, {"k", lv.k}, {"epsilon_n", lv.epsilon_n},
                   {"epsilon_prev", lv.epsilon_prev ? Json(*lv.epsilon_prev) : Json(nullptr)},
                   {"defect_bound", lv.defect_bound}, {"defect_direct", bracket_json(lv.defect_direct)}};
          Provenance prov = bracket_prov(lv.defect_direct);
          if (lv.d) {
            row["d"] = bracket_json(*lv.d);
            prov = bracket_prov(*lv.d);
            r.check("excellent", "level " + std::to_string(lv.n) + ": D_k upper < eps_n", lv.d->upper < lv.epsilon_n,
                    bracket_json(*lv.d), "< " + std::to_string(lv.epsilon_n), prov);
          }
          r.check("excellent", "level " + std::to_string(lv.n) + ": direct defect <= tail sum",
                  lv.defect_direct.lower <= lv.defect_bound, bracket_json(lv.defect_direct), "<= defect_bound",
                  bracket_prov(lv.defect_direct));
          r.add("level", row, prov);
        }
      } catch (const SearchExhausted& e) {
        r.check("excellent", "spacing search", false, Json{{"error", e.what()}, {"level", e.level()}}, "succeeds");
      }
      return finish(r, cfg, c.out);
    }

    if (*sq) {
      const ExperimentConfig cfg = make_config(c, Json{{"n", sq_n}, {"rect", sq_rect}, {"diag", sq_diag}, {"profile", sq_profile}});
      const auto& m = cfg.measure;
      if (sq_n < 0) throw ConfigError("n", "must be >= 0");
      const ConditionalSquare square(sq_n, m);
      const PinskerModel pm = PinskerModel::for_measure(m);
      Report r;
      r.command = "square";
      r.inputs = cfg.echo();
      r.add("pinsker_model", pm.kind == PinskerModel::Kind::trivial ? "trivial" : "cyclic(" + std::to_string(pm.period) + ")");
      if (sq_rect.size() == 2) {
        const Cylinder a = parse_cylinder(sq_rect[0], m.system(), "rect[0]");
        const Cylinder b = parse_cylinder(sq_rect[1], m.system(), "rect[1]");
        const double nu = nu_rect(square, a, b), lam = lambda_rect(pm, m, a, b);
        r.add("nu_rect", nu);
        r.add("lambda_rect", lam);
        r.check("square", "nu_n(A x B) <= min(mu A, mu B)",
                nu <= std::min(m.cylinder_prob(a), m.cylinder_prob(b)) + 1e-12, nu, "<= min(mu A, mu B)");
        if (sq_profile >= 0) {
          const ConvergenceProfile prof = convergence_profile(m, a, b, sq_profile);
          Json env = Json::array();
          for (int n = 0; n <= sq_profile; ++n) env.push_back(prof.envelope(static_cast<std::size_t>(n)));
          r.add("profile", Json{{"values", prof.values}, {"limit", prof.limit}, {"rate", prof.rate},
                                {"constant", prof.constant}, {"fitted_constant", prof.fitted_constant}, {"envelope", env}});
        }
        if (c.samples) {
          const RandomStream root = RandomStream(cfg.seed).child("square");
          long long hits = 0;
          for (long long i = 0; i < cfg.samples; ++i) {
            const CouplingSample s = sample_coupling(square, root.child(static_cast<std::uint64_t>(i)), cfg.horizon);
            if ((a.is_whole_space() || s.x.in(a)) && (b.is_whole_space() || s.y.in(b))) ++hits;
          }
          const double freq = static_cast<double>(hits) / static_cast<double>(cfg.samples);
          const double bound = 4.0 * std::sqrt(std::max(nu * (1.0 - nu), 1e-300) / static_cast<double>(cfg.samples));
          const Provenance prov = Provenance::sampled(cfg.samples, bound, "4 sqrt(nu(1-nu)/N)", "seed/square/<i>");
          r.add("empirical_nu_rect", freq, prov);
          r.check("square", "empirical frequency within 4 sigma of nu_n", std::abs(freq - nu) <= bound + 1e-12,
                  Json{{"frequency", freq}, {"nu", nu}}, "|freq - nu| <= bound", prov);
        }
      }
      if (sq_diag > 0) {
        r.add("diagonal_mass", diagonal_mass(square, sq_diag));
        r.add("diagonal_decay_factor", diagonal_decay_factor(m));
      }
      return finish(r, cfg, c.out);
    }

    if (*pr) {
      Json params = Json::object();
      if (*pc) params = Json{{"x", json_arg(px, "x")}, {"y", json_arg(py, "y")}};
      if (*pse) params = Json{{"partition", sep_part.empty() ? Json(nullptr) : json_arg(sep_part, "partition")}};
      if (*pb) params = Json{{"future", br_future}};
      const ExperimentConfig cfg = make_config(c, params);
      const auto& m = cfg.measure;
      const PinskerModel pm = PinskerModel::for_measure(m);
      Report r;
      r.inputs = cfg.echo();
      auto verdict_json = [](const PairVerdict& v) {
        Json labels = Json::array();
        for (const auto& l : v.labels) labels.push_back(l);
        return Json{{"labels", labels},
                    {"asymptotic_from", v.forward.asymptotic_certificate ? Json(*v.forward.asymptotic_certificate) : Json(nullptr)},
                    {"max_distance_tail", v.forward.max_distance_tail},
                    {"limsup_estimate", v.backward.limsup_estimate},
                    {"liminf_estimate", v.backward.liminf_estimate},
                    {"horizon", v.backward.horizon},
                    {"delta_threshold", v.thresholds.delta},
                    {"liminf_threshold", v.thresholds.liminf}};
      };
      const PairThresholds th{delta_sup(pm, m).delta, kDefaultLiminfThreshold};

      if (*pc) {
        r.command = "pairs classify";
        const Point x = parse_point(json_arg(px, "x"), m.system(), "x");
        const Point y = parse_point(json_arg(py, "y"), m.system(), "y");
        const PairVerdict v = classify_pair(x, y, cfg.horizon, th);
        r.add("verdict", verdict_json(v));
        if (auto cert = asymptotic_certificate(x, y, cfg.horizon); cert.agree_from) {
          bool sound = true;
          for (Coord n = *cert.agree_from; n <= *cert.agree_from + 32; ++n)
            sound = sound && shifted_distance(x, y, n) <= cert.bound_at(n);
          r.check("pairs", "certificate bound holds for 33 shifts", sound, *cert.agree_from, "d(T^n x, T^n y) <= 2^-(n-N)");
        }
      } else if (*ps) {
        r.command = "pairs sample";
        const ConditionalSquare square(0, m);
        const RandomStream root = RandomStream(cfg.seed).child("pairs-sample");
        long long asym = 0, prox = 0, ly = 0, ident = 0;
        for (long long i = 0; i < cfg.samples; ++i) {
          const CouplingSample s = sample_coupling(square, root.child(static_cast<std::uint64_t>(i)), cfg.horizon);
          const PairVerdict v = classify_pair(s.x, s.y, cfg.horizon, th);
          ident += v.has("identical");
          asym += v.has("asymptotic_T") || v.has("identical");
          prox += v.has("proximal_Tinv");
          ly += v.has("li_yorke_Tinv");
        }
        const double n = static_cast<double>(cfg.samples);
        const Provenance prov =
            Provenance::sampled(cfg.samples, std::sqrt(std::log(1e9) / (2.0 * n)), "Hoeffding sqrt(ln(1e9)/(2N))", "seed/pairs-sample/<i>");
        r.add("identical_rate", ident / n, prov);
        r.add("asymptotic_rate", asym / n, prov);
        r.add("proximal_rate", prox / n, prov);
        r.add("li_yorke_rate", ly / n, prov);
        r.check("pairs", "every sampled pair is asymptotic", asym == cfg.samples, asym / n, "1", prov);
      } else if (*pd) {
        r.command = "pairs delta";
        const DeltaReport d = delta_sup(pm, m);
        r.add("delta", d.delta);
        r.add("witness", d.witness ? Json::array({detail::cyl_text(d.witness->first), detail::cyl_text(d.witness->second)})
                                   : Json(nullptr));
        r.add("witness_mass", d.witness_mass);
        r.check("pairs", "delta = 0 iff zero entropy", (d.delta > 0.0) == (entropy_rate(m) > kExactWidth), d.delta,
                "positive exactly when h > 0");
      } else if (*pse) {
        r.command = "pairs separate";
        const auto q = partition_arg(sep_part, m.system());
        try {
          const auto sp = find_separated_pair(q, m, cfg.depth);
          if (!sp) {
            r.add("pair", nullptr);
          } else {
            r.add("pair", Json{{"x", point_json(sp->x)}, {"y", point_json(sp->y)}, {"label_x", sp->label_x},
                               {"label_y", sp->label_y}, {"agree_from", sp->agree_from}});
            const PairVerdict v = classify_pair(sp->x, sp->y, cfg.horizon, th);
            r.check("pairs", "separated pair is asymptotic with distinct labels",
                    v.has("asymptotic_T") && sp->label_x != sp->label_y, verdict_json(v), "asymptotic_T");
          }
        } catch (const Inconclusive& e) {
          r.check("pairs", "entropy sign decided", false, Json{{"error", e.what()}}, "bracket excludes 0");
        }
      } else if (*pb) {
        r.command = "pairs branching";
        const Word fut = detail::read_word(Json(br_future), "future", false);
        Json counts = Json::array();
        for (int d = 1; d <= cfg.depth; ++d) counts.push_back(stable_class_count(fut, d, m));
        r.add("stable_class_counts", counts);
        r.add("entropy_rate", entropy_rate(m));
      }
      return finish(r, cfg, c.out);
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidArgument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
