#pragma once

// Conditional entropies of coordinate partitions under a Markov measure.
//
// A conditioning σ-algebra is described by a set of observed symbol
// coordinates plus, for every non-injective labeling, the set of positions
// where that labeling is observed. Symbol observations are handled exactly
// through the Markov property; infinitely many coarse observations are
// truncated around the target, which gives an upper bound, and the lower
// bound additionally reveals the symbols underneath the dropped ones.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sftlab/coordinate_set.hpp"
#include "sftlab/error.hpp"
#include "sftlab/markov_measure.hpp"
#include "sftlab/partition.hpp"

namespace sftlab {

inline constexpr double kExactWidth = 1e-12;
inline constexpr int kDefaultDepth = 12;

struct EntropyBracket {
  double lower = 0.0;
  double upper = 0.0;
  bool exact = true;

  static EntropyBracket point(double v) { return {v, v, true}; }
  static EntropyBracket between(double lo, double hi) {
    if (lo > hi) std::swap(lo, hi);
    return {lo, hi, hi - lo <= kExactWidth};
  }

  double width() const { return upper - lower; }
  double mid() const { return 0.5 * (lower + upper); }
  bool contains(double v, double tol = kExactWidth) const {
    return v >= lower - tol && v <= upper + tol;
  }
};

inline EntropyBracket operator+(const EntropyBracket& a, const EntropyBracket& b) {
  return EntropyBracket::between(a.lower + b.lower, a.upper + b.upper);
}
inline EntropyBracket operator-(const EntropyBracket& a, const EntropyBracket& b) {
  return EntropyBracket::between(a.lower - b.upper, a.upper - b.lower);
}

/// A labeling observed at every position of `starts`.
struct LabelFamily {
  LabelingPtr labeling;
  CoordinateSet starts;
};

/// σ-algebra generated by symbol coordinates and shifted labelings.
class Sigma {
 public:
  Sigma() = default;

  static Sigma coordinates(CoordinateSet s) {
    Sigma g;
    g.symbols_ = std::move(s);
    return g;
  }

  /// ∨_{o ∈ offsets} T^{-o} P.
  static Sigma orbit(const CoordinatePartition& p, const CoordinateSet& offsets) {
    Sigma g;
    for (const auto& c : p.components()) {
      const Coord w = c.labeling->width();
      if (c.labeling->num_labels() <= 1) continue;
      if (c.labeling->is_fine()) {
        for (Coord o : offsets.finite_points()) g.symbols_.insert_interval(o + c.start, o + c.start + w - 1);
        if (offsets.right_from()) g.symbols_.insert_right_ray(*offsets.right_from() + c.start);
        if (offsets.left_to()) g.symbols_.insert_left_ray(*offsets.left_to() + c.start + w - 1);
      } else {
        g.add_family(c.labeling, offsets.shifted(c.start));
      }
    }
    return g;
  }

  static Sigma of(const CoordinatePartition& p) { return orbit(p, CoordinateSet::points({0})); }
  /// P⁻ = ∨_{n≥1} T^{-n} P.
  static Sigma past(const CoordinatePartition& p) { return orbit(p, CoordinateSet::right_ray(1)); }
  /// Pᵀ = ∨_{n∈ℤ} T^{-n} P.
  static Sigma full(const CoordinatePartition& p) { return orbit(p, CoordinateSet::all()); }

  const CoordinateSet& symbols() const noexcept { return symbols_; }
  const std::vector<LabelFamily>& families() const noexcept { return families_; }

  Sigma& add_symbols(const CoordinateSet& s) {
    symbols_.unite(s);
    return *this;
  }

  Sigma& add_family(const LabelingPtr& lab, const CoordinateSet& starts) {
    if (starts.empty() || lab->num_labels() <= 1) return *this;
    for (auto& f : families_) {
      if (f.labeling->key() == lab->key()) {
        f.starts.unite(starts);
        return *this;
      }
    }
    families_.push_back({lab, starts});
    return *this;
  }

  Sigma& join(const Sigma& o) {
    symbols_.unite(o.symbols_);
    for (const auto& f : o.families_) add_family(f.labeling, f.starts);
    return *this;
  }

  friend Sigma operator|(Sigma a, const Sigma& b) { return a.join(b); }

  bool is_finite() const {
    if (!symbols_.is_finite()) return false;
    for (const auto& f : families_)
      if (!f.starts.is_finite()) return false;
    return true;
  }

 private:
  CoordinateSet symbols_;
  std::vector<LabelFamily> families_;
};

namespace detail {

/// One observed quantity: a labeling read at `start`, or the bare symbol
/// at `start` when `labeling` is null.
struct Observation {
  const Labeling* labeling = nullptr;
  Coord start = 0;
  int width() const { return labeling ? labeling->width() : 1; }
  Coord end() const { return start + width() - 1; }
  int radix(int alphabet) const { return labeling ? labeling->num_labels() : alphabet; }
};

inline constexpr std::uint64_t kNodeBudget = 200'000'000ULL;

/// Shannon entropy of the joint law of a finite list of observations.
/// Sweeps coordinates left to right carrying the joint mass of the last K
/// symbols and every observation outcome seen so far; the outcome tree is
/// explored depth first.
class JointEntropy {
 public:
  explicit JointEntropy(const MarkovMeasure& m) : m_(m), n_(m.alphabet_size()) {}

  double operator()(std::vector<Observation> obs) {
    obs.erase(std::remove_if(obs.begin(), obs.end(),
                             [](const Observation& o) { return o.labeling && o.labeling->num_labels() <= 1; }),
              obs.end());
    if (obs.empty()) return 0.0;
    k_ = 1;
    for (const auto& o : obs) k_ = std::max(k_, o.width());
    size_ = 1;
    for (int i = 0; i < k_; ++i) size_ *= n_;
    if (size_ > (1 << 20)) throw InvalidArgument("observation window too wide for the entropy engine");

    std::map<Coord, std::vector<Observation>> by_end;
    for (const auto& o : obs) by_end[o.end()].push_back(o);
    events_.assign(by_end.begin(), by_end.end());

    weight_.assign(static_cast<std::size_t>(size_), 0.0);
    const Matrix& p = m_.transition();
    for (long long code = 0; code < size_; ++code) {
      double w = 1.0;
      long long c = code;
      Symbol next = static_cast<Symbol>(c % n_);
      c /= n_;
      for (int i = 1; i < k_; ++i) {
        Symbol prev = static_cast<Symbol>(c % n_);
        c /= n_;
        w *= p(prev, next);
        next = prev;
      }
      weight_[static_cast<std::size_t>(code)] = w;
    }

    std::vector<double> alpha(static_cast<std::size_t>(size_));
    const Vector& pi = m_.stationary();
    for (long long code = 0; code < size_; ++code)
      alpha[static_cast<std::size_t>(code)] = pi(first_symbol(code)) * weight_[static_cast<std::size_t>(code)];
    nodes_ = 0;
    sum_ = 0.0L;
    carry_ = 0.0L;
    visit(0, alpha);
    return static_cast<double>(sum_ + carry_);
  }

 private:
  // Compensated summation: the tree can have millions of leaves.
  void add(long double x) {
    const long double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x))
      carry_ += (sum_ - t) + x;
    else
      carry_ += (x - t) + sum_;
    sum_ = t;
  }

  Symbol first_symbol(long long code) const {
    for (int i = 1; i < k_; ++i) code /= n_;
    return static_cast<Symbol>(code);
  }

  const Matrix& power(Coord e) {
    auto it = powers_.find(e);
    if (it != powers_.end()) return it->second;
    return powers_.emplace(e, m_.power(static_cast<int>(e))).first->second;
  }

  void advance(std::vector<double>& alpha, Coord steps) {
    const Matrix& p = m_.transition();
    if (steps >= k_) {
      Eigen::RowVectorXd v = Eigen::RowVectorXd::Zero(n_);
      for (long long code = 0; code < size_; ++code) v(code % n_) += alpha[static_cast<std::size_t>(code)];
      const Coord gap = steps - k_ + 1;
      Eigen::RowVectorXd u = gap == 1 ? Eigen::RowVectorXd(v * p) : Eigen::RowVectorXd(v * power(gap));
      for (long long code = 0; code < size_; ++code)
        alpha[static_cast<std::size_t>(code)] = u(first_symbol(code)) * weight_[static_cast<std::size_t>(code)];
      return;
    }
    std::vector<double> next(alpha.size());
    for (Coord s = 0; s < steps; ++s) {
      std::fill(next.begin(), next.end(), 0.0);
      for (long long code = 0; code < size_; ++code) {
        const double a = alpha[static_cast<std::size_t>(code)];
        if (a == 0.0) continue;
        const Symbol last = static_cast<Symbol>(code % n_);
        const long long base = (code * n_) % size_;
        for (Symbol b = 0; b < n_; ++b) {
          const double t = p(last, b);
          if (t != 0.0) next[static_cast<std::size_t>(base + b)] += a * t;
        }
      }
      alpha.swap(next);
    }
  }

  std::uint64_t outcome(long long code, const std::vector<Observation>& here) const {
    std::uint64_t key = 0;
    for (const auto& o : here) {
      const int r = o.radix(n_);
      long long mod = 1;
      for (int i = 0; i < o.width(); ++i) mod *= n_;
      const long long suffix = code % mod;
      const int label = o.labeling ? o.labeling->label_of_code(suffix) : static_cast<int>(suffix);
      key = key * static_cast<std::uint64_t>(r) + static_cast<std::uint64_t>(label);
    }
    return key;
  }

  void visit(std::size_t idx, std::vector<double>& alpha) {
    if (++nodes_ > kNodeBudget) throw InvalidArgument("entropy computation exceeds the node budget; lower the depth");
    const auto& here = events_[idx].second;
    std::vector<std::uint64_t> keys;
    std::vector<double> mass;
    std::vector<std::int32_t> group(static_cast<std::size_t>(size_), -1);
    for (long long code = 0; code < size_; ++code) {
      const double a = alpha[static_cast<std::size_t>(code)];
      if (a <= 0.0) continue;
      const std::uint64_t k = outcome(code, here);
      std::size_t g = 0;
      while (g < keys.size() && keys[g] != k) ++g;
      if (g == keys.size()) {
        keys.push_back(k);
        mass.push_back(0.0);
      }
      mass[g] += a;
      group[static_cast<std::size_t>(code)] = static_cast<std::int32_t>(g);
    }
    if (idx + 1 == events_.size()) {
      for (double q : mass) add(-xlogx(q));
      return;
    }
    const Coord steps = events_[idx + 1].first - events_[idx].first;
    if (keys.size() == 1) {
      advance(alpha, steps);
      visit(idx + 1, alpha);
      return;
    }
    std::vector<double> child(alpha.size());
    for (std::size_t g = 0; g < keys.size(); ++g) {
      for (long long code = 0; code < size_; ++code)
        child[static_cast<std::size_t>(code)] =
            group[static_cast<std::size_t>(code)] == static_cast<std::int32_t>(g) ? alpha[static_cast<std::size_t>(code)] : 0.0;
      advance(child, steps);
      visit(idx + 1, child);
    }
  }

  const MarkovMeasure& m_;
  int n_;
  int k_ = 1;
  long long size_ = 1;
  std::vector<std::pair<Coord, std::vector<Observation>>> events_;
  std::vector<double> weight_;
  std::map<Coord, Matrix> powers_;
  std::uint64_t nodes_ = 0;
  long double sum_ = 0.0L;
  long double carry_ = 0.0L;
};

struct FiniteFamily {
  LabelingPtr labeling;
  std::vector<Coord> starts;
};

/// Finite conditioning problem: target observations given observations.
struct FiniteProblem {
  std::vector<Coord> target_symbols;
  std::vector<FiniteFamily> target_families;
  CoordinateSet given_symbols;
  std::vector<FiniteFamily> given_families;
};

/// Starts of `starts` whose window of width w is not already inside `symbols`.
inline CoordinateSet trim_starts(const CoordinateSet& starts, Coord w, const CoordinateSet& symbols) {
  std::vector<Coord> pts;
  for (Coord s : starts.finite_points())
    if (!symbols.contains_interval(s, s + w - 1)) pts.push_back(s);
  CoordinateSet out = CoordinateSet::points(pts);
  if (starts.right_from()) {
    const Coord r = *starts.right_from();
    if (symbols.right_from()) {
      for (Coord s = r; s < *symbols.right_from(); ++s)
        if (!symbols.contains_interval(s, s + w - 1)) out.insert(s);
    } else {
      out.insert_right_ray(r);
    }
  }
  if (starts.left_to()) {
    const Coord l = *starts.left_to();
    if (symbols.left_to()) {
      for (Coord s = *symbols.left_to() - w + 2; s <= l; ++s)
        if (!symbols.contains_interval(s, s + w - 1)) out.insert(s);
    } else {
      out.insert_left_ray(l);
    }
  }
  return out;
}

inline bool family_has(const std::vector<FiniteFamily>& fams, const std::string& key, Coord s) {
  for (const auto& f : fams)
    if (f.labeling->key() == key && std::binary_search(f.starts.begin(), f.starts.end(), s)) return true;
  return false;
}

/// Removes observations already determined by others. Returns false when
/// the target is fully determined by the given observations.
inline bool reduce(FiniteProblem& fp) {
  std::vector<FiniteFamily> gf;
  for (auto& f : fp.given_families) {
    const Coord w = f.labeling->width();
    std::vector<Coord> keep;
    for (Coord s : f.starts)
      if (!fp.given_symbols.contains_interval(s, s + w - 1)) keep.push_back(s);
    if (!keep.empty()) gf.push_back({f.labeling, std::move(keep)});
  }
  fp.given_families = std::move(gf);

  std::vector<Coord> ts;
  for (Coord c : fp.target_symbols)
    if (!fp.given_symbols.contains(c)) ts.push_back(c);
  fp.target_symbols = std::move(ts);
  CoordinateSet known = fp.given_symbols;
  for (Coord c : fp.target_symbols) known.insert(c);

  std::vector<FiniteFamily> tf;
  for (auto& f : fp.target_families) {
    const Coord w = f.labeling->width();
    std::vector<Coord> keep;
    for (Coord s : f.starts) {
      if (known.contains_interval(s, s + w - 1)) continue;
      if (family_has(fp.given_families, f.labeling->key(), s)) continue;
      keep.push_back(s);
    }
    if (!keep.empty()) tf.push_back({f.labeling, std::move(keep)});
  }
  fp.target_families = std::move(tf);
  return !fp.target_symbols.empty() || !fp.target_families.empty();
}

inline double solve_finite(FiniteProblem fp, const MarkovMeasure& m) {
  if (!reduce(fp)) return 0.0;
  Coord lo = 0, hi = 0;
  bool any = false;
  auto span = [&](Coord a, Coord b) {
    lo = any ? std::min(lo, a) : a;
    hi = any ? std::max(hi, b) : b;
    any = true;
  };
  for (Coord c : fp.target_symbols) span(c, c);
  for (const auto& f : fp.target_families)
    for (Coord s : f.starts) span(s, s + f.labeling->width() - 1);
  for (const auto& f : fp.given_families)
    for (Coord s : f.starts) span(s, s + f.labeling->width() - 1);

  // Symbols outside the hull matter only through the nearest one per side.
  std::vector<Observation> given;
  for (Coord c : fp.given_symbols.within(lo, hi)) given.push_back({nullptr, c});
  if (auto b = fp.given_symbols.max_below(lo)) given.push_back({nullptr, *b});
  if (auto a = fp.given_symbols.min_above(hi)) given.push_back({nullptr, *a});
  for (const auto& f : fp.given_families)
    for (Coord s : f.starts) given.push_back({f.labeling.get(), s});

  std::vector<Observation> all = given;
  for (Coord c : fp.target_symbols) all.push_back({nullptr, c});
  for (const auto& f : fp.target_families)
    for (Coord s : f.starts) all.push_back({f.labeling.get(), s});

  JointEntropy joint(m);
  const double h = joint(all) - joint(given);
  return std::max(0.0, h);
}

}  // namespace detail

/// H(target | given). The target must be generated by finitely many
/// observations; `depth` is the number of coarse observations kept on each
/// side of the target when the given σ-algebra has infinitely many.
inline EntropyBracket conditional_entropy(const Sigma& target, const Sigma& given, const MarkovMeasure& m,
                                          int depth = kDefaultDepth) {
  if (!target.is_finite()) throw InvalidArgument("target σ-algebra must be finitely generated");
  if (depth < 1) throw InvalidArgument("depth must be >= 1");

  detail::FiniteProblem base;
  base.target_symbols = target.symbols().finite_points();
  for (const auto& f : target.families())
    base.target_families.push_back({f.labeling, f.starts.finite_points()});
  base.given_symbols = given.symbols();

  // Given families: drop members inside the observed symbols first.
  std::vector<LabelFamily> gfam;
  for (const auto& f : given.families()) {
    CoordinateSet st = detail::trim_starts(f.starts, f.labeling->width(), given.symbols());
    if (!st.empty()) gfam.push_back({f.labeling, st});
  }

  // Finite part of the given families, then check whether anything remains.
  detail::FiniteProblem probe = base;
  for (const auto& f : gfam)
    if (!f.starts.finite_points().empty()) probe.given_families.push_back({f.labeling, f.starts.finite_points()});
  // Members of infinite rays only matter for deciding same-key redundancy
  // of target members; resolve that here.
  for (auto& tf : probe.target_families) {
    std::vector<Coord> keep;
    for (Coord s : tf.starts) {
      bool covered = false;
      for (const auto& f : gfam)
        if (f.labeling->key() == tf.labeling->key() && f.starts.contains(s)) covered = true;
      if (!covered) keep.push_back(s);
    }
    tf.starts = std::move(keep);
  }
  probe.target_families.erase(std::remove_if(probe.target_families.begin(), probe.target_families.end(),
                                             [](const auto& f) { return f.starts.empty(); }),
                              probe.target_families.end());
  detail::FiniteProblem reduced = probe;
  if (!detail::reduce(reduced)) return EntropyBracket::point(0.0);

  bool infinite = false;
  for (const auto& f : gfam)
    if (!f.starts.is_finite()) infinite = true;
  if (!infinite) {
    const double h = detail::solve_finite(probe, m);
    return EntropyBracket::point(h);
  }

  // Focus window around what is left of the target.
  Coord lo = 0, hi = 0;
  bool any = false;
  for (Coord c : reduced.target_symbols) {
    lo = any ? std::min(lo, c) : c;
    hi = any ? std::max(hi, c) : c;
    any = true;
  }
  for (const auto& f : reduced.target_families)
    for (Coord s : f.starts) {
      lo = any ? std::min(lo, s) : s;
      hi = any ? std::max(hi, s + f.labeling->width() - 1) : s + f.labeling->width() - 1;
      any = true;
    }
  const Coord klo = lo - depth, khi = hi + depth;

  detail::FiniteProblem upper_p = probe;
  CoordinateSet reveal;
  for (const auto& f : gfam) {
    if (f.starts.is_finite()) continue;
    const Coord w = f.labeling->width();
    std::vector<Coord> kept;
    if (f.starts.right_from()) {
      const Coord r = *f.starts.right_from();
      if (r > khi) {
        reveal.insert_right_ray(r);
      } else {
        reveal.insert_right_ray(khi + 1);
        if (r < klo) reveal.insert_interval(r, klo - 1 + w - 1);
        for (Coord s = std::max(r, klo); s <= khi; ++s) kept.push_back(s);
      }
    }
    if (f.starts.left_to()) {
      const Coord l = *f.starts.left_to();
      if (l < klo) {
        reveal.insert_left_ray(l + w - 1);
      } else {
        reveal.insert_left_ray(klo - 1 + w - 1);
        if (l > khi) reveal.insert_interval(khi + 1, l + w - 1);
        for (Coord s = klo; s <= std::min(l, khi); ++s) kept.push_back(s);
      }
    }
    if (kept.empty()) continue;
    bool merged = false;
    for (auto& g : upper_p.given_families) {
      if (g.labeling->key() == f.labeling->key()) {
        g.starts.insert(g.starts.end(), kept.begin(), kept.end());
        std::sort(g.starts.begin(), g.starts.end());
        g.starts.erase(std::unique(g.starts.begin(), g.starts.end()), g.starts.end());
        merged = true;
      }
    }
    if (!merged) upper_p.given_families.push_back({f.labeling, kept});
  }

  detail::FiniteProblem lower_p = upper_p;
  lower_p.given_symbols.unite(reveal);

  const double up = detail::solve_finite(upper_p, m);
  const double low = std::min(detail::solve_finite(lower_p, m), up);
  return EntropyBracket::between(low, up);
}

/// Shannon entropy of the label distribution of P.
inline double entropy(const CoordinatePartition& p, const MarkovMeasure& m) {
  std::map<std::vector<int>, double> mass;
  const Coord a = p.window_begin();
  p.for_each_window_word([&](const Word& w) { mass[p.label_of(w, a)] += m.word_prob(w); });
  double h = 0.0;
  for (const auto& [label, q] : mass) h -= xlogx(q);
  return h;
}

/// H(P | σ(x_s : s ∈ S)).
inline EntropyBracket cond_entropy(const CoordinatePartition& p, const CoordinateSet& s, const MarkovMeasure& m,
                                   int depth = kDefaultDepth) {
  return conditional_entropy(Sigma::of(p), Sigma::coordinates(s), m, depth);
}

/// h_μ(P, T) = H(P | P⁻).
inline EntropyBracket process_entropy(const CoordinatePartition& p, const MarkovMeasure& m,
                                      int depth = kDefaultDepth) {
  return conditional_entropy(Sigma::of(p), Sigma::past(p), m, depth);
}

struct PinskerTerms {
  EntropyBracket joint;         // H(Q∨P | Q⁻∨P⁻)
  EntropyBracket own;           // H(P | P⁻)
  EntropyBracket relative;      // H(Q | Q⁻∨Pᵀ)
  EntropyBracket residual;
};

/// Residual of H(Q∨P | Q⁻∨P⁻) − H(P|P⁻) − H(Q | Q⁻∨Pᵀ), which vanishes.
inline PinskerTerms pinsker_terms(const CoordinatePartition& p, const CoordinatePartition& q, const MarkovMeasure& m,
                                  int depth = kDefaultDepth) {
  PinskerTerms t;
  t.joint = conditional_entropy(Sigma::of(q.join(p)), Sigma::past(q) | Sigma::past(p), m, depth);
  t.own = conditional_entropy(Sigma::of(p), Sigma::past(p), m, depth);
  t.relative = conditional_entropy(Sigma::of(q), Sigma::past(q) | Sigma::full(p), m, depth);
  t.residual = t.joint - t.own - t.relative;
  return t;
}

inline EntropyBracket pinsker_residual(const CoordinatePartition& p, const CoordinatePartition& q,
                                       const MarkovMeasure& m, int depth = kDefaultDepth) {
  return pinsker_terms(p, q, m, depth).residual;
}

struct ChainCheck {
  EntropyBracket lhs;       // H(P₁|P₁⁻) − H(P₁|P_k⁻)
  EntropyBracket rhs;       // k = 2: H(P₂|P₁∨P₂⁻) − H(P₂|P₁ᵀ∨P₂⁻); k > 2: Σ H(P_i|P_i⁻) − H(P_i|P_{i+1}⁻)
  EntropyBracket residual;  // lhs − rhs (the two-partition identity)
  EntropyBracket slack;     // rhs − lhs (the chain inequality)
  std::vector<EntropyBracket> pair_residuals;  // two-partition identity for each consecutive pair
};

namespace detail {

inline EntropyBracket past_gain(const CoordinatePartition& a, const CoordinatePartition& b, const MarkovMeasure& m,
                                int depth) {
  // H(A|A⁻) − H(A|B⁻); with A ≺ B the second conditioning contains the first.
  return conditional_entropy(Sigma::of(a), Sigma::past(a), m, depth) -
         conditional_entropy(Sigma::of(a), Sigma::past(b), m, depth);
}

inline EntropyBracket relative_gain(const CoordinatePartition& a, const CoordinatePartition& b,
                                    const MarkovMeasure& m, int depth) {
  // H(B|A∨B⁻) − H(B|Aᵀ∨B⁻)
  return conditional_entropy(Sigma::of(b), Sigma::of(a) | Sigma::past(b), m, depth) -
         conditional_entropy(Sigma::of(b), Sigma::full(a) | Sigma::past(b), m, depth);
}

}  // namespace detail

/// Checks the entropy comparison identities on a refinement chain
/// P₁ ≺ P₂ ≺ … ≺ P_k.
inline ChainCheck chain_check(const std::vector<CoordinatePartition>& chain, const MarkovMeasure& m,
                               int depth = kDefaultDepth) {
  if (chain.size() < 2) throw InvalidArgument("refinement chain needs at least two partitions");
  for (std::size_t i = 1; i < chain.size(); ++i)
    if (!chain[i].refines(chain[i - 1]))
      throw InvalidArgument("partition " + std::to_string(i + 1) + " does not refine partition " + std::to_string(i));

  ChainCheck out;
  for (std::size_t i = 1; i < chain.size(); ++i)
    out.pair_residuals.push_back(detail::past_gain(chain[i - 1], chain[i], m, depth) -
                                 detail::relative_gain(chain[i - 1], chain[i], m, depth));
  out.lhs = detail::past_gain(chain.front(), chain.back(), m, depth);
  if (chain.size() == 2) {
    out.rhs = detail::relative_gain(chain[0], chain[1], m, depth);
  } else {
    out.rhs = EntropyBracket::point(0.0);
    for (std::size_t i = 1; i < chain.size(); ++i) out.rhs = out.rhs + detail::past_gain(chain[i - 1], chain[i], m, depth);
  }
  out.residual = out.lhs - out.rhs;
  out.slack = out.rhs - out.lhs;
  return out;
}

}  // namespace sftlab
