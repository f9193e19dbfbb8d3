#pragma once

// Conditional squares ν_n = μ ⊗_{F_n} μ, F_n = σ(x_j : j ≥ n+1), evaluated
// exactly on cylinder rectangles, and their limit λ = μ ⊗_Π μ over the
// Pinsker factor.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sftlab/error.hpp"
#include "sftlab/markov_measure.hpp"
#include "sftlab/random.hpp"
#include "sftlab/shift_space.hpp"

namespace sftlab {

struct ConditionalSquare {
  int n = 0;
  MarkovMeasure measure;

  ConditionalSquare(int level, MarkovMeasure m) : n(level), measure(std::move(m)) {
    if (n < 0) throw InvalidArgument("conditional square level must be >= 0");
  }
};

/// The Pinsker factor of an irreducible Markov measure: trivial when the
/// chain is aperiodic, the cyclic-class rotation otherwise.
struct PinskerModel {
  enum class Kind { trivial, cyclic };
  Kind kind = Kind::trivial;
  int period = 1;
  std::vector<int> classes;  // symbol -> class, cyclic kind only

  static PinskerModel trivial_model() { return {}; }
  static PinskerModel cyclic_model(int p, std::vector<int> cls) { return {Kind::cyclic, p, std::move(cls)}; }

  static PinskerModel for_measure(const MarkovMeasure& m) {
    if (m.period() == 1) return trivial_model();
    return cyclic_model(m.period(), m.cyclic_classes());
  }

  /// Throws unless the model matches the chain's cyclic structure.
  void check(const MarkovMeasure& m) const {
    if (kind == Kind::trivial) {
      if (m.period() != 1)
        throw InvalidArgument("trivial Pinsker model on a chain of period " + std::to_string(m.period()));
      return;
    }
    if (period < 2) throw InvalidArgument("cyclic Pinsker model needs period >= 2");
    if (static_cast<int>(classes.size()) != m.alphabet_size())
      throw InvalidArgument("cyclic class map has the wrong size");
    std::vector<int> used(period, 0);
    for (int c : classes) {
      if (c < 0 || c >= period) throw InvalidArgument("cyclic class out of range");
      used[c] = 1;
    }
    if (std::find(used.begin(), used.end(), 0) != used.end())
      throw InvalidArgument("cyclic classes do not cover every phase");
    const Matrix& p = m.transition();
    for (int a = 0; a < m.alphabet_size(); ++a)
      for (int b = 0; b < m.alphabet_size(); ++b)
        if (p(a, b) > 0.0 && classes[b] != (classes[a] + 1) % period)
          throw InvalidArgument("transition " + std::to_string(a) + "->" + std::to_string(b) +
                                " does not advance the cyclic class");
    if (period != m.period())
      throw InvalidArgument("cyclic model period " + std::to_string(period) + " differs from the chain period " +
                            std::to_string(m.period()));
  }
};

namespace detail {

/// μ(x restricted to [c.start, min(c.end-1, upto)] matches c) jointly with
/// x_{upto+1} = s, divided by π(s): the conditional probability of the part
/// of `c` lying at or below `upto` given the symbol just above.
inline double low_part_given(const MarkovMeasure& m, const Cylinder& c, Coord upto, Symbol s,
                             const std::vector<Matrix>& powers) {
  if (c.is_whole_space() || c.start > upto) return 1.0;
  const Coord last = std::min<Coord>(c.end() - 1, upto);
  Word low(c.word.begin(), c.word.begin() + (last - c.start + 1));
  const double p = m.word_prob(low);
  if (p == 0.0) return 0.0;
  const Coord gap = upto + 1 - last;  // ≥ 1
  return p * powers[static_cast<std::size_t>(gap)](low.back(), s) / m.stationary()(s);
}

}  // namespace detail

/// ν_n(A × B) = Σ_z μ(z) μ(A | z) μ(B | z), z ranging over frontier words
/// on [n+1, M] with M the largest coordinate either cylinder touches.
inline double nu_rect(const ConditionalSquare& sq, const Cylinder& a, const Cylinder& b) {
  const MarkovMeasure& m = sq.measure;
  for (Symbol s : a.word) m.system().check_symbol(s);
  for (Symbol s : b.word) m.system().check_symbol(s);
  const Coord front = sq.n + 1;
  Coord top = front;
  if (!a.is_whole_space()) top = std::max(top, a.end() - 1);
  if (!b.is_whole_space()) top = std::max(top, b.end() - 1);
  Coord max_gap = 1;
  for (const Cylinder* c : {&a, &b})
    if (!c->is_whole_space() && c->start <= sq.n)
      max_gap = std::max(max_gap, front - std::min<Coord>(c->end() - 1, sq.n));
  std::vector<Matrix> powers(static_cast<std::size_t>(max_gap + 1));
  for (Coord g = 0; g <= max_gap; ++g) powers[static_cast<std::size_t>(g)] = m.power(static_cast<int>(g));

  const int len = static_cast<int>(top - front + 1);
  auto matches_high = [&](const Cylinder& c, const Word& z) {
    if (c.is_whole_space()) return true;
    for (Coord i = std::max(c.start, front); i < c.end(); ++i)
      if (c.word[static_cast<std::size_t>(i - c.start)] != z[static_cast<std::size_t>(i - front)]) return false;
    return true;
  };
  double total = 0.0;
  for (const Word& z : m.system().allowed_words(len)) {
    const double pz = m.word_prob(z);
    if (pz == 0.0 || !matches_high(a, z) || !matches_high(b, z)) continue;
    const double ga = detail::low_part_given(m, a, sq.n, z.front(), powers);
    if (ga == 0.0) continue;
    total += pz * ga * detail::low_part_given(m, b, sq.n, z.front(), powers);
  }
  return total;
}

/// Cyclic class of x_0 forced by the cylinder, if any.
inline int phase_of(const PinskerModel& pm, const Cylinder& c) {
  const Coord p = pm.period;
  const Coord k = (pm.classes[static_cast<std::size_t>(c.word.front())] - c.start) % p;
  return static_cast<int>((k + p) % p);
}

/// λ(A × B) for λ = μ ⊗_Π μ.
inline double lambda_rect(const PinskerModel& pm, const MarkovMeasure& m, const Cylinder& a, const Cylinder& b) {
  pm.check(m);
  const double ma = m.cylinder_prob(a), mb = m.cylinder_prob(b);
  if (pm.kind == PinskerModel::Kind::trivial) return ma * mb;
  // Σ_k μ(A ∩ C_k) μ(B ∩ C_k) / μ(C_k), every phase class C_k having mass 1/p.
  const double p = pm.period;
  if (a.is_whole_space() && b.is_whole_space()) return 1.0;
  if (a.is_whole_space()) return mb;
  if (b.is_whole_space()) return ma;
  return phase_of(pm, a) == phase_of(pm, b) ? ma * mb * p : 0.0;
}

struct ConvergenceProfile {
  std::vector<double> values;  // ν_n(A×B), n = 0..N
  double limit = 0.0;          // λ(A×B)
  double rate = 0.0;           // second eigenvalue modulus
  double constant = 0.0;       // |ν_0 − λ|, the envelope fitted at n = 0
  double fitted_constant = 0.0;  // max_n |ν_n − λ| / rate^n

  double gap(std::size_t n) const { return std::abs(values[n] - limit); }
  double envelope(std::size_t n) const { return constant * std::pow(rate, static_cast<double>(n)); }
};

inline ConvergenceProfile convergence_profile(const MarkovMeasure& m, const Cylinder& a, const Cylinder& b, int N) {
  if (N < 0) throw InvalidArgument("profile length must be >= 0");
  ConvergenceProfile prof;
  for (int n = 0; n <= N; ++n) prof.values.push_back(nu_rect(ConditionalSquare(n, m), a, b));
  prof.limit = lambda_rect(PinskerModel::for_measure(m), m, a, b);
  prof.rate = spectral_info(m).second_modulus;
  prof.constant = std::abs(prof.values.front() - prof.limit);
  for (int n = 0; n <= N; ++n) {
    const double env = std::pow(prof.rate, n);
    if (env > 0.0) prof.fitted_constant = std::max(prof.fitted_constant, prof.gap(static_cast<std::size_t>(n)) / env);
  }
  return prof;
}

/// ν_n of the pairs agreeing on every coordinate in (−L, n]; the two
/// backward extensions from a shared x_{n+1} = c agree step by step with
/// probability Σ_a R(c,a)².
inline double diagonal_mass(const ConditionalSquare& sq, int L) {
  if (L < 1) throw InvalidArgument("diagonal depth L must be >= 1");
  const MarkovMeasure& m = sq.measure;
  const Matrix& r = m.reverse_kernel();
  const Matrix sq_r = r.cwiseProduct(r);
  Vector f = Vector::Ones(m.alphabet_size());
  for (int j = 0; j < sq.n + L; ++j) f = sq_r * f;
  return m.stationary().dot(f);
}

/// Largest eigenvalue of R∘R: the asymptotic per-step agreement factor.
inline double diagonal_decay_factor(const MarkovMeasure& m) {
  const Matrix sq_r = m.reverse_kernel().cwiseProduct(m.reverse_kernel());
  Eigen::EigenSolver<Matrix> solver(sq_r, false);
  double best = 0.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) best = std::max(best, std::abs(solver.eigenvalues()(i)));
  return best;
}

struct CouplingSample {
  Point x;
  Point y;
  Coord shared_from = 1;
  Coord horizon = 0;
  std::uint64_t seed = 0;
  std::string seed_record;
};

/// Draws (x, y) from ν_n: a shared stationary future on [n+1, horizon] and two
/// conditionally independent pasts down to −horizon. Outside [−horizon,
/// horizon] the points continue along fixed periodic tails.
inline CouplingSample sample_coupling(const ConditionalSquare& sq, const RandomStream& rng, Coord horizon) {
  if (horizon < 1) throw InvalidArgument("sampling horizon must be >= 1");
  const MarkovMeasure& m = sq.measure;
  const int n_sym = m.alphabet_size();
  const Coord front = sq.n + 1;
  const Coord top = std::max(horizon, front);

  RandomStream fut = rng.child("shared-future");
  const Word shared = sample_path(m, fut, front, top);

  auto past = [&](const char* tag) {
    RandomStream s = rng.child(tag);
    const Coord len = front + horizon;  // coordinates −horizon .. n
    Word w(static_cast<std::size_t>(len));
    std::vector<double> row(n_sym);
    Symbol next = shared.front();
    for (Coord i = len - 1; i >= 0; --i) {
      for (int a = 0; a < n_sym; ++a) row[a] = m.reverse_kernel()(next, a);
      next = static_cast<Symbol>(s.categorical(row));
      w[static_cast<std::size_t>(i)] = next;
    }
    return w;
  };

  const SftSystem sys = m.support_system();
  const auto [r_trans, r_period] = sys.right_tail_from(shared.back());
  auto build = [&](const Word& back) {
    auto [l_period, l_trans] = sys.left_tail_into(back.front());
    Word core = l_trans;
    core.insert(core.end(), back.begin(), back.end());
    core.insert(core.end(), shared.begin(), shared.end());
    core.insert(core.end(), r_trans.begin(), r_trans.end());
    return Point::make(m.system(), l_period, core, r_period,
                       -horizon - static_cast<Coord>(l_trans.size()));
  };

  CouplingSample out{build(past("x-past")), build(past("y-past")), front, horizon, rng.seed(), ""};
  out.seed_record = "seed=" + std::to_string(rng.seed()) +
                    " streams=shared-future,x-past,y-past tails=least-predecessor/least-successor";
  return out;
}

struct AtomMasses {
  std::vector<std::pair<Word, double>> atoms;  // backward words on [1−L, 0], lexicographic
  double max_mass = 0.0;
};

/// Conditional law of x_{[1−L, 0]} given the future starting at coordinate 1;
/// by the Markov property only future[0] matters.
inline AtomMasses conditional_atom_masses(const Word& future, int L, const MarkovMeasure& m) {
  if (future.empty()) throw InvalidArgument("future must be nonempty");
  if (L < 1) throw InvalidArgument("depth L must be >= 1");
  if (!m.system().is_allowed(future)) throw InvalidArgument("future \"" + word_to_string(future) + "\" is not allowed");
  if (m.word_prob(future) <= 0.0) throw InvalidArgument("future has zero probability");
  AtomMasses out;
  const int n = m.alphabet_size();
  const Matrix& r = m.reverse_kernel();
  Word w(static_cast<std::size_t>(L));
  auto rec = [&](auto&& self, int pos, Symbol after, double mass) -> void {
    if (pos < 0) {
      out.atoms.emplace_back(w, mass);
      out.max_mass = std::max(out.max_mass, mass);
      return;
    }
    for (Symbol a = 0; a < n; ++a) {
      const double q = r(after, a);
      if (q <= 0.0) continue;
      w[static_cast<std::size_t>(pos)] = a;
      self(self, pos - 1, a, mass * q);
    }
  };
  rec(rec, L - 1, future.front(), 1.0);
  std::sort(out.atoms.begin(), out.atoms.end());
  return out;
}

}  // namespace sftlab
