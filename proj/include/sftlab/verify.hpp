#pragma once

// The verification suite: fourteen numbered criteria, each a set of named
// assertions against independent oracles.

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sftlab/conditional_square.hpp"
#include "sftlab/entropy.hpp"
#include "sftlab/excellent.hpp"
#include "sftlab/io.hpp"
#include "sftlab/pair_lab.hpp"
#include "sftlab/report.hpp"

namespace sftlab {

inline constexpr double kIdentityTol = 1e-9;
inline constexpr int kCriterionCount = 14;

struct VerifyOptions {
  std::uint64_t seed = kDefaultSeed;
  int depth = kDefaultDepth;
  double identity_tol = kIdentityTol;
  bool timing = false;    // adds wall-clock data and budget assertions
  std::set<int> only;     // empty = all
};

struct CriterionOutcome {
  int id = 0;
  std::string title;
  bool passed = false;  // all assertions of the criterion, budget excluded
  double seconds = 0.0;
  double budget = 0.0;
  std::size_t assertions = 0;
  std::vector<std::string> failures;

  bool within_budget() const { return seconds <= budget; }
};

struct VerifyResult {
  Report report;
  std::vector<CriterionOutcome> criteria;

  bool passed() const { return report.all_passed(); }
};

struct CriterionInfo {
  int id;
  const char* title;
  const char* group;
  double budget_seconds;
};

inline const std::vector<CriterionInfo>& criterion_table() {
  static const std::vector<CriterionInfo> t = {
      {1, "entropy rate exactness", "entropy", 1},
      {2, "entropy identity suite", "entropy", 30},
      {3, "refinement chain comparison", "entropy", 10},
      {4, "Pinsker formula residual", "entropy", 20},
      {5, "excellent partition search", "excellent", 60},
      {6, "conditional square exactness", "square", 20},
      {7, "conditional square convergence", "square", 10},
      {8, "diagonal dichotomy", "square", 10},
      {9, "coupling law on the full shift", "pairs", 60},
      {10, "zero-entropy control", "pairs", 5},
      {11, "stable class branching", "pairs", 10},
      {12, "separated asymptotic pairs", "pairs", 5},
      {13, "sampled ergodicity of the product", "pairs", 30},
      {14, "backward lifts of a one-sided point", "lifts", 5},
  };
  return t;
}

/// "3,5", "entropy", "pairs,14", "all" -> criterion ids.
inline std::set<int> parse_only(const std::string& text) {
  std::set<int> out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (item == "all") {
      for (const auto& c : criterion_table()) out.insert(c.id);
      continue;
    }
    bool group = false;
    for (const auto& c : criterion_table())
      if (item == c.group) {
        out.insert(c.id);
        group = true;
      }
    if (group) continue;
    std::size_t used = 0;
    int id = 0;
    try {
      id = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || id < 1 || id > kCriterionCount)
      throw ConfigError("only", "unknown criterion or group \"" + item +
                                    "\" (use 1-14, entropy, excellent, square, pairs, lifts, all)");
    out.insert(id);
  }
  return out;
}

namespace detail {

struct VerifyContext {
  Report& report;
  const VerifyOptions& opt;
  std::string group;

  bool check(const std::string& name, bool passed, Json observed, const std::string& expected,
             Provenance p = Provenance::exact(), std::string detail = {}) {
    report.check(group, name, passed, std::move(observed), expected, std::move(p), std::move(detail));
    return passed;
  }
  std::string tol_text() const {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", opt.identity_tol);
    return buf;
  }
};

inline Json bracket_json(const EntropyBracket& b) { return Json::array({b.lower, b.upper}); }

inline Provenance bracket_prov(const EntropyBracket& b) {
  return b.width() <= kExactWidth ? Provenance::exact() : Provenance::bracketed(b.width());
}

inline std::string cyl_text(const Cylinder& c) {
  return "[" + word_to_string(c.word) + "]@" + std::to_string(c.start);
}

/// Irreducible 3-state chain with random zero pattern and weights.
inline MarkovMeasure random_chain(RandomStream& rng, int n = 3) {
  for (;;) {
    Matrix p = Matrix::Zero(n, n);
    for (int a = 0; a < n; ++a) {
      double s = 0.0;
      for (int b = 0; b < n; ++b) {
        if (rng.uniform() < 0.3) continue;
        p(a, b) = 0.05 + rng.uniform();
        s += p(a, b);
      }
      if (s == 0.0) {
        p(a, (a + 1) % n) = 1.0;
        s = 1.0;
      }
      p.row(a) /= s;
    }
    if (is_irreducible(p)) return MarkovMeasure::on_support(p);
  }
}

inline int draw_int(RandomStream& rng, int lo, int hi) {
  return lo + static_cast<int>(rng.uniform() * static_cast<double>(hi - lo + 1));
}

/// ν_0(A×B) from joint words on [lo, hi], hi >= 1: pairs agreeing on [1, hi]
/// weigh μ(x)μ(y)/μ(x[1..hi]).
class SquareOracle {
 public:
  SquareOracle(const MarkovMeasure& m, Coord lo, Coord hi) : lo_(lo) {
    const int len = static_cast<int>(hi - lo + 1);
    for (const Word& w : m.system().allowed_words(len))
      if (m.word_prob(w) > 0.0) words_.push_back(w);
    const std::size_t n = words_.size();
    mass_.assign(n * n, 0.0);
    const std::size_t cut = static_cast<std::size_t>(1 - lo);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (!std::equal(words_[i].begin() + static_cast<std::ptrdiff_t>(cut), words_[i].end(),
                        words_[j].begin() + static_cast<std::ptrdiff_t>(cut)))
          continue;
        const Word shared(words_[i].begin() + static_cast<std::ptrdiff_t>(cut), words_[i].end());
        mass_[i * n + j] = m.word_prob(words_[i]) * m.word_prob(words_[j]) / m.word_prob(shared);
      }
  }

  std::vector<char> members(const Cylinder& c) const {
    std::vector<char> in(words_.size(), 0);
    for (std::size_t i = 0; i < words_.size(); ++i) {
      bool ok = true;
      for (std::size_t k = 0; k < c.word.size() && ok; ++k)
        ok = words_[i][static_cast<std::size_t>(c.start - lo_) + k] == c.word[k];
      in[i] = ok;
    }
    return in;
  }

  double rect(const std::vector<char>& a, const std::vector<char>& b) const {
    const std::size_t n = words_.size();
    long double s = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
      if (!a[i]) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (b[j]) s += mass_[i * n + j];
    }
    return static_cast<double>(s);
  }

 private:
  Coord lo_;
  std::vector<Word> words_;
  std::vector<double> mass_;
};

/// Every cylinder whose coordinates lie in [lo, hi].
inline std::vector<Cylinder> cylinders_within(const MarkovMeasure& m, Coord lo, Coord hi) {
  std::vector<Cylinder> out;
  for (Coord s = lo; s <= hi; ++s)
    for (int len = 1; s + len - 1 <= hi; ++len)
      for (const Word& w : m.system().allowed_words(len)) out.push_back(Cylinder{s, w});
  return out;
}

// Criteria ----------------------------------------------------------------

inline void criterion_1(VerifyContext& c) {
  const double tol = c.opt.identity_tol;
  const double ln_phi = std::log(std::numbers::phi);
  const double h_gm = entropy_rate(golden_mean_parry());
  c.check("golden-mean Parry entropy rate = ln(phi)", std::abs(h_gm - ln_phi) <= tol,
          Json{{"value", h_gm}, {"oracle", ln_phi}, {"error", std::abs(h_gm - ln_phi)}}, "|error| <= " + c.tol_text());

  const EntropyBracket pe = process_entropy(CoordinatePartition::fine(SftSystem::golden_mean(), 0, 0), golden_mean_parry());
  c.check("golden-mean process entropy of x0 = ln(phi)", pe.contains(ln_phi, tol) && pe.width() <= tol,
          Json{{"bracket", bracket_json(pe)}, {"oracle", ln_phi}}, "contains ln(phi), width <= " + c.tol_text(),
          bracket_prov(pe));

  // π = (2/3, 1/3) by hand from [[0.9,0.1],[0.2,0.8]].
  const double oracle = -(2.0 / 3.0) * (0.9 * std::log(0.9) + 0.1 * std::log(0.1)) -
                        (1.0 / 3.0) * (0.2 * std::log(0.2) + 0.8 * std::log(0.8));
  const double h_lazy = entropy_rate(two_state_lazy());
  c.check("two-state-lazy entropy rate matches the closed form", std::abs(h_lazy - oracle) <= 1e-6,
          Json{{"value", h_lazy}, {"oracle", oracle}, {"error", std::abs(h_lazy - oracle)}}, "|error| <= 1e-06");
}

inline void criterion_2(VerifyContext& c) {
  const double tol = c.opt.identity_tol;
  RandomStream root = RandomStream(c.opt.seed).child("verify-2");
  double worst_chain = 0.0, worst_mono = 0.0, worst_rate = 0.0;
  int chains = 0, cases = 0;
  std::string first_bad;
  for (int i = 0; i < 100; ++i) {
    RandomStream rng = root.child(static_cast<std::uint64_t>(i));
    const MarkovMeasure m = random_chain(rng);
    const SftSystem& sys = m.system();
    ++chains;
    for (int t = 0; t < 3; ++t) {
      ++cases;
      const int pa = draw_int(rng, -3, 3), pw = draw_int(rng, 1, 4);
      const int qa = draw_int(rng, -3, 3), qw = draw_int(rng, 1, 4);
      const auto p = CoordinatePartition::fine(sys, pa, pa + pw - 1);
      const auto q = CoordinatePartition::fine(sys, qa, qa + qw - 1);
      CoordinateSet s;
      const int npts = draw_int(rng, 0, 3);
      for (int k = 0; k < npts; ++k) s.insert(draw_int(rng, -6, 6));
      const int ray = draw_int(rng, 0, 2);
      if (ray == 1) s.insert_right_ray(draw_int(rng, 2, 8));
      if (ray == 2) s.insert_left_ray(draw_int(rng, -8, -2));

      const EntropyBracket joint = cond_entropy(p.join(q), s, m, c.opt.depth);
      const EntropyBracket hp = cond_entropy(p, s, m, c.opt.depth);
      CoordinateSet sp = s;
      sp.insert_interval(p.window_begin(), p.window_end());
      const EntropyBracket hq = cond_entropy(q, sp, m, c.opt.depth);
      const double r = std::max(std::abs(joint.upper - hp.upper - hq.upper), std::abs(joint.lower - hp.lower - hq.lower));
      if (r > worst_chain) worst_chain = r;

      CoordinateSet bigger = s;
      bigger.insert(draw_int(rng, -6, 6));
      if (rng.uniform() < 0.5) bigger.insert_right_ray(draw_int(rng, 1, 9));
      const EntropyBracket hp2 = cond_entropy(p, bigger, m, c.opt.depth);
      worst_mono = std::max(worst_mono, hp2.lower - hp.upper);

      const EntropyBracket pe = process_entropy(p, m, c.opt.depth);
      const double h = entropy_rate(m);
      const double e = std::max(std::abs(pe.upper - h), std::abs(pe.lower - h));
      worst_rate = std::max(worst_rate, e);
      if (first_bad.empty() && (r > tol || hp2.lower - hp.upper > tol || e > tol))
        first_bad = "chain " + std::to_string(i) + " case " + std::to_string(t);
    }
  }
  const Json where = first_bad.empty() ? Json(nullptr) : Json(first_bad);
  c.check("chain rule H(P v Q|S) = H(P|S) + H(Q|S + window(P))", worst_chain <= tol,
          Json{{"chains", chains}, {"cases", cases}, {"max_residual", worst_chain}, {"first_failure", where}},
          "max residual <= " + c.tol_text());
  c.check("monotonicity under enlarging S", worst_mono <= tol,
          Json{{"cases", cases}, {"max_increase", worst_mono}}, "H(P|S') <= H(P|S) + " + c.tol_text());
  c.check("process entropy of a fine partition = entropy rate", worst_rate <= tol,
          Json{{"cases", cases}, {"max_error", worst_rate}}, "max error <= " + c.tol_text());
}

inline void criterion_3(VerifyContext& c) {
  const double tol = c.opt.identity_tol;
  for (const auto& [name, m] : all_presets()) {
    const SftSystem& sys = m.system();
    const std::vector<CoordinatePartition> chain = {
        CoordinatePartition::fine(sys, 0, 0), CoordinatePartition::fine(sys, 0, 1),
        CoordinatePartition::fine(sys, -1, 1), CoordinatePartition::fine(sys, -1, 2)};
    const ChainCheck ck = chain_check(chain, m, c.opt.depth);
    double worst = 0.0;
    Json pairs = Json::array();
    for (const auto& r : ck.pair_residuals) {
      worst = std::max({worst, std::abs(r.lower), std::abs(r.upper)});
      pairs.push_back(bracket_json(r));
    }
    c.check(name + ": two-partition identity on consecutive pairs", worst <= tol,
            Json{{"residuals", pairs}, {"max_abs", worst}}, "|residual| <= " + c.tol_text());
    c.check(name + ": chain inequality", ck.slack.lower >= -tol,
            Json{{"lhs", bracket_json(ck.lhs)}, {"rhs", bracket_json(ck.rhs)}, {"slack", bracket_json(ck.slack)}},
            "slack >= -" + c.tol_text(), bracket_prov(ck.slack));
  }
}

inline void criterion_4(VerifyContext& c) {
  const double tol = c.opt.identity_tol;
  const MarkovMeasure m = two_state_lazy();
  const SftSystem& sys = m.system();
  struct Case {
    Coord pa, pb, qa, qb;
  };
  for (const Case& k : {Case{0, 0, 0, 0}, Case{0, 1, -1, 0}, Case{0, 0, 0, 2}, Case{-1, 1, 0, 1}}) {
    const auto p = CoordinatePartition::fine(sys, k.pa, k.pb);
    const auto q = CoordinatePartition::fine(sys, k.qa, k.qb);
    const EntropyBracket r = pinsker_residual(p, q, m, c.opt.depth);
    char name[96];
    std::snprintf(name, sizeof name, "fine P[%ld,%ld], Q[%ld,%ld]: residual contains 0", static_cast<long>(k.pa),
                  static_cast<long>(k.pb), static_cast<long>(k.qa), static_cast<long>(k.qb));
    c.check(name, r.contains(0.0, tol) && r.width() <= tol, Json{{"residual", bracket_json(r)}, {"width", r.width()}},
            "contains 0, width <= " + c.tol_text(), bracket_prov(r));
  }

  // Coarse P: the sum x_0 + x_1, which merges 01 and 10.
  const auto sum = Labeling::from_function(sys, 2, [](const Word& w) { return w[0] + w[1]; });
  const auto p = CoordinatePartition::from_labeling(sys, sum, 0);
  const auto q = CoordinatePartition::fine(sys, 0, 0);
  const EntropyBracket r8 = pinsker_residual(p, q, m, 8);
  const EntropyBracket r16 = pinsker_residual(p, q, m, 16);
  c.check("coarse P (sum on [0,1]) at depth 8: residual contains 0", r8.contains(0.0, tol),
          Json{{"residual", bracket_json(r8)}, {"width", r8.width()}}, "contains 0", bracket_prov(r8));
  c.check("coarse P (sum on [0,1]) at depth 16: residual contains 0", r16.contains(0.0, tol),
          Json{{"residual", bracket_json(r16)}, {"width", r16.width()}}, "contains 0", bracket_prov(r16));
  c.check("coarse bracket shrinks at least 2x from depth 8 to 16", r8.width() > 0.0 && r16.width() <= 0.5 * r8.width(),
          Json{{"width_8", r8.width()}, {"width_16", r16.width()},
               {"ratio", r8.width() > 0.0 ? r16.width() / r8.width() : 1.0}},
          "width_16 <= width_8 / 2", bracket_prov(r16));
}

inline void criterion_5(VerifyContext& c) {
  const MarkovMeasure lazy = two_state_lazy();
  const int levels = 8;
  const auto qs = block_indicator_sequence(lazy.system(), levels, Word{0, 0});
  bool coarse = true;
  for (const auto& q : qs) coarse = coarse && !q.is_fine();
  c.check("two-state-lazy Q_n are coarse, strictly widening and refining", coarse,
          Json{{"levels", levels}, {"widths", [&] {
                  Json w = Json::array();
                  for (const auto& q : qs) w.push_back(q.width());
                  return w;
                }()}},
          "no Q_n is fine");

  const SpacingSchedule sched = SpacingSchedule::geometric(levels, 0.5, 64, c.opt.depth);
  ExcellentReport rep;
  try {
    rep = choose_spacings(qs, sched, lazy);
  } catch (const SearchExhausted& e) {
    c.check("two-state-lazy spacing search", false, Json{{"error", e.what()}}, "succeeds for n <= 8");
    return;
  }
  bool certified = true, monotone = true, ledger = true, dominated = true;
  double worst_ledger = 0.0, widest = 0.0;
  Json rows = Json::array();
  for (std::size_t i = 0; i < rep.levels.size(); ++i) {
    const LevelRecord& r = rep.levels[i];
    if (r.d) {
      certified = certified && r.d->upper < r.epsilon_n;
      widest = std::max(widest, r.d->width());
    }
    if (i > 0) monotone = monotone && rep.spacings[i] >= rep.spacings[i - 1];
    const double oracle = std::ldexp(1.0, -(r.n - 1));  // Σ_{i≥n} 2^{-i}
    worst_ledger = std::max(worst_ledger, std::abs(r.defect_bound - oracle));
    ledger = ledger && std::abs(r.defect_bound - oracle) <= 1e-12;
    dominated = dominated && r.defect_direct.lower <= r.defect_bound;
    Json row;
    row["n"] = r.n;
    row["k"] = r.k;
    row["d"] = r.d ? bracket_json(*r.d) : Json(nullptr);
    row["epsilon_n"] = r.epsilon_n;
    row["defect_bound"] = r.defect_bound;
    row["defect_direct"] = bracket_json(r.defect_direct);
    rows.push_back(std::move(row));
  }
  c.check("two-state-lazy: every certified D_k upper < eps_n", certified, Json{{"levels", rows}},
          "D_{k_n}.upper < 2^-n", widest > kExactWidth ? Provenance::bracketed(widest) : Provenance::exact());
  c.check("two-state-lazy: spacings nondecreasing", monotone, Json(rep.spacings), "k_n >= k_{n-1}");
  c.check("defect ledger equals the tail sum of eps", ledger, Json{{"max_error", worst_ledger}}, "|error| <= 1e-12");
  c.check("direct defect never exceeds the ledger bound", dominated, Json{{"levels", rows.size()}},
          "defect_direct.lower <= bound");

  for (const auto& [name, m] : {std::pair<std::string, MarkovMeasure>{"full-2-bernoulli", bernoulli_measure()},
                                {"period-2", period_two()}}) {
    const auto fq = fine_sequence(m.system(), 3);
    const ExcellentReport fr = choose_spacings(fq, SpacingSchedule::geometric(3, 0.5, 64, c.opt.depth), m);
    bool zero = true;
    for (int s : fr.spacings) zero = zero && s == 0;
    double dmax = 0.0;
    for (const auto& r : fr.levels)
      if (r.d) dmax = std::max(dmax, std::abs(r.d->upper));
    for (int k = 0; k <= 4; ++k)
      dmax = std::max(dmax, std::abs(dk(fq[0], fq[1], k, m, c.opt.depth).upper));
    c.check(name + ": all spacings 0", zero, Json(fr.spacings), "k_n = 0");
    c.check(name + ": D_k = 0", dmax <= 1e-12, Json{{"max_D_upper", dmax}}, "|D_k| <= 1e-12");
  }
}

inline void criterion_6(VerifyContext& c) {
  for (const auto& [name, m] : all_presets()) {
    const ConditionalSquare sq(0, m);
    const SquareOracle oracle(m, -2, 1);
    const auto cyls = cylinders_within(m, -2, 1);
    std::vector<std::vector<char>> in;
    std::vector<double> mu;
    for (const auto& cy : cyls) {
      in.push_back(oracle.members(cy));
      mu.push_back(m.cylinder_prob(cy));
    }
    double worst = 0.0, worst_sym = 0.0, worst_marg = 0.0;
    std::string where;
    std::vector<double> row_sum(cyls.size(), 0.0);
    for (std::size_t i = 0; i < cyls.size(); ++i)
      for (std::size_t j = 0; j < cyls.size(); ++j) {
        const double v = nu_rect(sq, cyls[i], cyls[j]);
        const double o = oracle.rect(in[i], in[j]);
        if (std::abs(v - o) > worst) {
          worst = std::abs(v - o);
          where = cyl_text(cyls[i]) + " x " + cyl_text(cyls[j]);
        }
        if (j > i) worst_sym = std::max(worst_sym, std::abs(v - nu_rect(sq, cyls[j], cyls[i])));
        if (cyls[j].start == 0 && cyls[j].word.size() == 1) row_sum[i] += v;
      }
    for (std::size_t i = 0; i < cyls.size(); ++i) {
      worst_marg = std::max(worst_marg, std::abs(row_sum[i] - mu[i]));
      worst_marg = std::max(worst_marg, std::abs(nu_rect(sq, cyls[i], Cylinder::whole_space()) - mu[i]));
    }
    const std::size_t pairs = cyls.size() * cyls.size();
    c.check(name + ": nu_0 rectangles match enumeration", worst <= 1e-12,
            Json{{"rectangles", pairs}, {"max_error", worst}, {"worst_at", where}}, "|error| <= 1e-12");
    c.check(name + ": marginals of nu_0 equal mu", worst_marg <= 1e-12, Json{{"max_error", worst_marg}},
            "|error| <= 1e-12");
    c.check(name + ": nu_0 is symmetric", worst_sym <= 1e-12, Json{{"max_error", worst_sym}}, "|error| <= 1e-12");
  }
}

inline void criterion_7(VerifyContext& c) {
  const MarkovMeasure m = two_state_lazy();
  const Cylinder z{0, {0}};
  const ConvergenceProfile prof = convergence_profile(m, z, z, 20);
  const double limit = 4.0 / 9.0;
  const double C = std::abs(prof.values[0] - limit);
  bool envelope = true;
  int first_bad = -1;
  for (int n = 1; n <= 20; ++n) {
    const double bound = C * std::pow(0.7, n);
    if (prof.gap(static_cast<std::size_t>(n)) > bound * (1.0 + 1e-12) + 1e-15) {
      envelope = false;
      if (first_bad < 0) first_bad = n;
    }
  }
  c.check("two-state-lazy: limit is mu([0])^2 = 4/9", std::abs(prof.limit - limit) <= 1e-12,
          Json{{"lambda", prof.limit}, {"oracle", limit}}, "|error| <= 1e-12");
  c.check("two-state-lazy: |nu_n - 4/9| <= C 0.7^n for n = 1..20", envelope,
          Json{{"C", C}, {"values", prof.values}, {"first_violation", first_bad < 0 ? Json(nullptr) : Json(first_bad)}},
          "gap within envelope");
  c.check("two-state-lazy: gap at n = 20", prof.gap(20) <= 1e-3, Json{{"gap", prof.gap(20)}}, "<= 1e-3");

  const MarkovMeasure c4 = cyclic_four();
  const PinskerModel pm = PinskerModel::for_measure(c4);
  const Cylinder a{0, {0}}, same{0, {1}}, other{0, {2}};
  const ConvergenceProfile ps = convergence_profile(c4, a, same, 20);
  const double lam = lambda_rect(pm, c4, a, same);
  const double product = c4.cylinder_prob(a) * c4.cylinder_prob(same);
  c.check("cyclic-4 same phase: nu_20 agrees with the cyclic lambda", std::abs(ps.values[20] - lam) <= 1e-6,
          Json{{"nu_20", ps.values[20]}, {"lambda", lam}, {"product", product}}, "|error| <= 1e-6");
  c.check("cyclic-4 same phase: limit differs from the product", std::abs(lam - product) > 1e-6,
          Json{{"lambda", lam}, {"product", product}}, "lambda != mu(A)mu(B)");
  const ConvergenceProfile po = convergence_profile(c4, a, other, 20);
  c.check("cyclic-4 different phase: nu_20 = lambda = 0",
          std::abs(po.values[20]) <= 1e-12 && std::abs(lambda_rect(pm, c4, a, other)) <= 1e-12,
          Json{{"nu_20", po.values[20]}, {"lambda", lambda_rect(pm, c4, a, other)}}, "0");
}

inline void criterion_8(VerifyContext& c) {
  const ConditionalSquare bern(0, bernoulli_measure());
  bool exact = true;
  for (int L = 1; L <= 32; ++L) exact = exact && diagonal_mass(bern, L) == std::ldexp(1.0, -L);
  c.check("full-2-bernoulli: diagonal mass = 2^-L exactly for L <= 32", exact,
          Json{{"L_16", diagonal_mass(bern, 16)}, {"L_32", diagonal_mass(bern, 32)}}, "bitwise equal");

  const ConditionalSquare per(0, period_two());
  bool one = true;
  for (int L = 1; L <= 32; ++L) one = one && diagonal_mass(per, L) == 1.0;
  c.check("period-2: diagonal mass = 1 for L <= 32", one, Json{{"L_32", diagonal_mass(per, 32)}}, "1");

  const MarkovMeasure lazy = two_state_lazy();
  const ConditionalSquare sq(0, lazy);
  std::vector<double> vals;
  bool decreasing = true;
  for (int L = 1; L <= 16; ++L) {
    vals.push_back(diagonal_mass(sq, L));
    if (L > 1) decreasing = decreasing && vals[L - 1] < vals[L - 2];
  }
  c.check("two-state-lazy: diagonal mass strictly decreasing in L", decreasing, Json(vals), "L = 1..16");

  double worst = 0.0;
  for (int L = 1; L <= 8; ++L) {
    double brute = 0.0;
    for (const Word& w : lazy.system().allowed_words(L)) {
      const Cylinder cy{-(L - 1), w};
      brute += nu_rect(sq, cy, cy);
    }
    worst = std::max(worst, std::abs(brute - vals[static_cast<std::size_t>(L - 1)]));
  }
  c.check("two-state-lazy: diagonal mass matches enumeration for L <= 8", worst <= 1e-12,
          Json{{"max_error", worst}}, "|error| <= 1e-12");

  const double rho = diagonal_decay_factor(lazy);
  int below = 16;
  while (diagonal_mass(sq, below) >= 0.01 && below < 4096) ++below;
  c.check("two-state-lazy: diagonal mass < 0.01 at L = 16", vals[15] < 0.01,
          Json{{"L_16", vals[15]}, {"decay_factor", rho}, {"first_L_below_0.01", below}}, "< 0.01");
}

inline void criterion_9(VerifyContext& c) {
  const MarkovMeasure m = bernoulli_measure();
  const ConditionalSquare sq(0, m);
  const long long N = 10000;
  const Coord horizon = 10000, short_h = 64;
  const RandomStream root = RandomStream(c.opt.seed).child("verify-9");
  long long certified = 0, limsup_hits = 0, liminf_hits = 0;
  for (long long i = 0; i < N; ++i) {
    const CouplingSample s = sample_coupling(sq, root.child(static_cast<std::uint64_t>(i)), horizon);
    const PairVerdict far = classify_pair(s.x, s.y, horizon);
    if (far.has("asymptotic_T") || far.has("identical")) ++certified;
    if (far.backward.liminf_estimate <= kDefaultLiminfThreshold) ++liminf_hits;
    const PairVerdict near = classify_pair(s.x, s.y, short_h);
    if (near.backward.limsup_estimate >= 1.0) ++limsup_hits;
  }
  const std::string path = "seed/verify-9/<i>";
  const auto rate = [&](long long k) { return static_cast<double>(k) / static_cast<double>(N); };
  c.check("forward certificates", certified == N, Json{{"certified", certified}, {"samples", N}}, "100%",
          Provenance::sampled(N, 0.0, "every sample certified; exact per sample", path));
  // Per sample the miss probability is 2^-64 (limsup) and below 1e-20 (liminf),
  // so a Hoeffding margin sqrt(ln(1/1e-9)/(2N)) is far inside the thresholds.
  const double margin = std::sqrt(std::log(1e9) / (2.0 * static_cast<double>(N)));
  c.check("backward limsup = 1 within horizon 64", rate(limsup_hits) >= 0.999,
          Json{{"rate", rate(limsup_hits)}, {"samples", N}}, ">= 0.999",
          Provenance::sampled(N, margin, "Hoeffding sqrt(ln(1e9)/(2N))", path));
  c.check("backward liminf <= 2^-4 within horizon 10^4", rate(liminf_hits) >= 0.95,
          Json{{"rate", rate(liminf_hits)}, {"samples", N}}, ">= 0.95",
          Provenance::sampled(N, margin, "Hoeffding sqrt(ln(1e9)/(2N))", path));
}

inline void criterion_10(VerifyContext& c) {
  const MarkovMeasure m = period_two();
  const ConditionalSquare sq(0, m);
  const RandomStream root = RandomStream(c.opt.seed).child("verify-10");
  int identical = 0;
  const int n = 200;
  for (int i = 0; i < n; ++i) {
    const CouplingSample s = sample_coupling(sq, root.child(static_cast<std::uint64_t>(i)), 64);
    identical += same_sequence(s.x, s.y) ? 1 : 0;
  }
  c.check("period-2 sampler yields identical pairs only", identical == n, Json{{"identical", identical}, {"samples", n}},
          "all identical", Provenance::sampled(n, 0.0, "deterministic chain: any difference is a failure", "seed/verify-10/<i>"));
  bool one = true;
  for (int d = 1; d <= 16; ++d)
    for (Symbol s : {0, 1}) one = one && stable_class_count(Word{s}, d, m) == 1;
  c.check("period-2 stable class count = 1 for depth <= 16", one, Json(one), "1");
  const DeltaReport dr = delta_sup(PinskerModel::for_measure(m), m);
  c.check("period-2 delta_sup = 0 with no witness", dr.delta == 0.0 && !dr.witness,
          Json{{"delta", dr.delta}, {"witness", dr.witness ? Json("present") : Json(nullptr)}}, "0, none");
}

inline void criterion_11(VerifyContext& c) {
  const MarkovMeasure b = bernoulli_measure();
  bool pow2 = true;
  Json counts = Json::array();
  for (int d = 1; d <= 10; ++d) {
    const auto k = stable_class_count(Word{0}, d, b);
    counts.push_back(k);
    pow2 = pow2 && k == (1ULL << d);
  }
  c.check("full-2-bernoulli stable class count = 2^d for d <= 10", pow2, counts, "2^d");

  const MarkovMeasure g = golden_mean_parry();
  bool match = true;
  std::map<int, std::uint64_t> gc;
  Json rows = Json::array();
  for (Symbol f : {0, 1})
    for (int d = 1; d <= 12; ++d) {
      std::uint64_t brute = 0;
      for (const Word& w : g.system().allowed_words(d)) {
        Word ext = w;
        ext.push_back(f);
        if (g.word_prob(ext) > 0.0) ++brute;
      }
      const auto k = stable_class_count(Word{f}, d, g);
      match = match && k == brute;
      if (f == 0) gc[d] = k;
      rows.push_back(Json{{"future", f}, {"d", d}, {"count", k}, {"enumerated", brute}});
    }
  c.check("golden-mean counts match enumeration for d <= 12", match, rows, "equal");

  const double ln_phi = std::log(std::numbers::phi);
  bool rate_ok = true;
  Json rates = Json::array();
  for (int d = 8; d < 12; ++d) {
    const double r = std::log(static_cast<double>(gc[d + 1]) / static_cast<double>(gc[d]));
    rates.push_back(r);
    rate_ok = rate_ok && std::abs(r - ln_phi) <= 0.02 * ln_phi;
  }
  c.check("golden-mean per-step growth within 2% of ln(phi) for d = 8..12", rate_ok,
          Json{{"rates", rates}, {"ln_phi", ln_phi}}, "|rate - ln phi| <= 0.02 ln phi");
}

inline void criterion_12(VerifyContext& c) {
  for (const auto& [name, m] : {std::pair<std::string, MarkovMeasure>{"full-2-bernoulli", bernoulli_measure()},
                                {"golden-mean-parry", golden_mean_parry()}}) {
    const auto q = CoordinatePartition::fine(m.system(), 0, 0);
    std::optional<SeparatedPair> sp;
    try {
      sp = find_separated_pair(q, m, c.opt.depth);
    } catch (const Inconclusive& e) {
      c.check(name + ": separated pair found", false, Json{{"error", e.what()}}, "found");
      continue;
    }
    if (!c.check(name + ": separated pair found", sp.has_value(), Json(sp.has_value()), "found")) continue;
    const PairVerdict v = classify_pair(sp->x, sp->y, 64);
    c.check(name + ": pair is asymptotic under T", v.has("asymptotic_T"),
            Json{{"agree_from", sp->agree_from}, {"x", point_json(sp->x)}, {"y", point_json(sp->y)}}, "asymptotic_T");
    const bool labels_ok = sp->label_x != sp->label_y && q.label_of(sp->x) == sp->label_x && q.label_of(sp->y) == sp->label_y;
    c.check(name + ": labels differ and match the partition", labels_ok,
            Json{{"label_x", sp->label_x}, {"label_y", sp->label_y}}, "distinct, recomputed equal");
  }
  const MarkovMeasure b = bernoulli_measure();
  const auto none = find_separated_pair(CoordinatePartition::trivial(b.system()), b, c.opt.depth);
  c.check("constant partition: no pair", !none.has_value(), Json(none.has_value()), "absent");
}

inline void criterion_13(VerifyContext& c) {
  const long long N = 100000;
  const std::vector<std::pair<Cylinder, Cylinder>> rects = {
      {Cylinder{0, {0}}, Cylinder{0, {0}}}, {Cylinder{0, {0}}, Cylinder{0, {1}}}, {Cylinder{0, {0, 0}}, Cylinder{1, {1}}}};
  for (const auto& [name, m] : {std::pair<std::string, MarkovMeasure>{"full-2-bernoulli", bernoulli_measure()},
                                {"two-state-lazy", two_state_lazy()}}) {
    const PinskerModel pm = PinskerModel::for_measure(m);
    for (std::size_t i = 0; i < rects.size(); ++i) {
      const RandomStream rng = RandomStream(c.opt.seed).child("verify-13").child(name).child(static_cast<std::uint64_t>(i));
      const BirkhoffResult r = birkhoff_check(pm, m, rects[i].first, rects[i].second, rng, N);
      c.check(name + ": " + cyl_text(rects[i].first) + " x " + cyl_text(rects[i].second) + " time average within 3 sigma",
              r.within(),
              Json{{"time_average", r.time_average}, {"lambda", r.lambda_value}, {"error", std::abs(r.time_average - r.lambda_value)}},
              "|error| <= bound",
              Provenance::sampled(N, r.bound, "3 sqrt(v (1+rho) / ((1-rho) N)), v = lambda(1-lambda)",
                                  "seed/verify-13/" + name + "/" + std::to_string(i)));
    }
  }
}

inline void criterion_14(VerifyContext& c) {
  for (const auto& [name, m] : all_presets()) {
    const SftSystem sys = m.support_system();
    const auto [transient, period] = sys.right_tail_from(0);
    const OneSidedPoint future{transient, period};
    const bool positive = entropy_rate(m) > kExactWidth;
    std::size_t best = 0;
    int at_depth = 0;
    bool projects = true;
    for (int d = 1; d <= m.alphabet_size(); ++d) {
      const auto lifts = backward_lifts(future, d, m);
      std::size_t distinct = 0;
      for (std::size_t i = 0; i < lifts.size(); ++i) {
        projects = projects && projects_to(lifts[i], future);
        bool fresh = true;
        for (std::size_t j = 0; j < i && fresh; ++j) fresh = !same_sequence(lifts[i], lifts[j]);
        distinct += fresh ? 1 : 0;
      }
      if (distinct > best) {
        best = distinct;
        at_depth = d;
      }
    }
    const Json obs{{"future", word_to_string(transient) + "(" + word_to_string(period) + ")"},
                   {"distinct_lifts", best},
                   {"depth", at_depth},
                   {"all_project", projects}};
    if (positive)
      c.check(name + ": at least two distinct lifts", best >= 2 && projects, obs, ">= 2");
    else
      c.check(name + ": exactly one lift", best == 1 && projects, obs, "1");
  }
}

inline const std::vector<std::function<void(VerifyContext&)>>& criterion_bodies() {
  static const std::vector<std::function<void(VerifyContext&)>> b = {
      criterion_1, criterion_2, criterion_3,  criterion_4,  criterion_5,  criterion_6,  criterion_7,
      criterion_8, criterion_9, criterion_10, criterion_11, criterion_12, criterion_13, criterion_14};
  return b;
}

}  // namespace detail

/// Runs the selected criteria in order. Deterministic given the options
/// unless `timing` is set.
inline VerifyResult run_verify(const VerifyOptions& opt) {
  VerifyResult out;
  out.report.command = "verify";
  Json timing = Json::array();
  for (const auto& info : criterion_table()) {
    if (!opt.only.empty() && !opt.only.count(info.id)) continue;
    const std::size_t first = out.report.assertions.size();
    detail::VerifyContext ctx{out.report, opt, std::to_string(info.id)};
    const auto t0 = std::chrono::steady_clock::now();
    try {
      detail::criterion_bodies()[static_cast<std::size_t>(info.id - 1)](ctx);
    } catch (const std::exception& e) {
      ctx.check("completes without error", false, Json{{"error", e.what()}}, "no error");
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    CriterionOutcome oc;
    oc.id = info.id;
    oc.title = info.title;
    oc.seconds = secs;
    oc.budget = info.budget_seconds;
    oc.assertions = out.report.assertions.size() - first;
    oc.passed = true;
    for (std::size_t i = first; i < out.report.assertions.size(); ++i)
      if (!out.report.assertions[i].passed) {
        oc.passed = false;
        oc.failures.push_back(out.report.assertions[i].name);
      }
    if (opt.timing) {
      ctx.check("runtime within budget", oc.within_budget(), Json{{"seconds", secs}}, "<= " + std::to_string(static_cast<int>(info.budget_seconds)) + " s");
      timing.push_back(Json{{"criterion", info.id}, {"seconds", secs}, {"budget", info.budget_seconds}});
    }
    out.criteria.push_back(oc);
  }
  Json lines = Json::array();
  for (const auto& oc : out.criteria)
    lines.push_back(Json{{"criterion", oc.id}, {"title", oc.title}, {"passed", oc.passed}, {"assertions", oc.assertions}});
  out.report.summary = Json{{"criteria", lines}};
  if (opt.timing) out.report.timing = timing;
  return out;
}

inline VerifyOptions verify_options(const ExperimentConfig& cfg, const std::string& only) {
  VerifyOptions o;
  o.seed = cfg.seed;
  o.depth = cfg.depth;
  if (cfg.tol) o.identity_tol = *cfg.tol;
  o.timing = cfg.timing;
  o.only = parse_only(only);
  return o;
}

/// "criterion  3 PASS  refinement chain comparison" and the failing names.
inline std::string criterion_line(const CriterionOutcome& oc, bool with_time) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "criterion %2d %s  %s", oc.id, oc.passed ? "PASS" : "FAIL", oc.title.c_str());
  std::string s = buf;
  if (with_time) {
    std::snprintf(buf, sizeof buf, "  (%.2f s, budget %.0f s)", oc.seconds, oc.budget);
    s += buf;
  }
  for (const auto& f : oc.failures) s += "\n    failed: " + f;
  return s;
}

}  // namespace sftlab
