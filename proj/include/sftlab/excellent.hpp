#pragma once

// Inductive choice of spacings k_n making P_n = P_{n-1} ∨ T^{-k_n} Q_n
// satisfy H(P_{n-1}|P_{n-1}⁻) − H(P_{n-1}|P_n⁻) < ε_n, and the agreement
// certificate for points in one atom of P⁻.

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "sftlab/entropy.hpp"
#include "sftlab/error.hpp"
#include "sftlab/shift_space.hpp"

namespace sftlab {

inline constexpr int kDefaultKMax = 256;

/// ε_1, ε_2, ... with a certified bound on the part of the series past the
/// listed terms.
struct SpacingSchedule {
  std::vector<double> epsilons;  // epsilons[0] is ε_1
  double tail_after = 0.0;       // Σ_{i > size} ε_i
  int k_max = kDefaultKMax;
  int depth = kDefaultDepth;

  /// ε_n = base^n, so Σ_{i>L} ε_i = base^{L+1} / (1 − base).
  static SpacingSchedule geometric(int levels, double base = 0.5, int k_max = kDefaultKMax,
                                   int depth = kDefaultDepth) {
    if (levels < 1) throw InvalidArgument("schedule needs at least one level");
    if (!(base > 0.0 && base < 1.0)) throw InvalidArgument("eps base must lie in (0, 1)");
    SpacingSchedule s;
    for (int n = 1; n <= levels; ++n) s.epsilons.push_back(std::pow(base, n));
    s.tail_after = std::pow(base, levels + 1) / (1.0 - base);
    s.k_max = k_max;
    s.depth = depth;
    return s;
  }

  int levels() const { return static_cast<int>(epsilons.size()); }

  double epsilon(int n) const {
    if (n < 1 || n > levels()) throw InvalidArgument("epsilon index " + std::to_string(n) + " out of range");
    return epsilons[static_cast<std::size_t>(n - 1)];
  }

  /// Σ_{i ≥ n} ε_i.
  double tail_sum(int n) const {
    double s = tail_after;
    for (int i = levels(); i >= std::max(n, 1); --i) s += epsilons[static_cast<std::size_t>(i - 1)];
    return s;
  }

  void validate() const {
    if (epsilons.empty()) throw InvalidArgument("schedule needs at least one epsilon");
    for (double e : epsilons)
      if (!(e > 0.0)) throw InvalidArgument("epsilons must be positive");
    if (!(tail_after >= 0.0) || !std::isfinite(tail_after))
      throw InvalidArgument("schedule tail bound must be finite and nonnegative");
    if (k_max < 0) throw InvalidArgument("k_max must be nonnegative");
    if (depth < 1) throw InvalidArgument("depth must be >= 1");
  }
};

/// D_k = H(Q | T^{k+1}P⁻ ∨ Q⁻) − H(Q | Pᵀ ∨ Q⁻).
inline EntropyBracket dk(const CoordinatePartition& p_prev, const CoordinatePartition& q, int k,
                         const MarkovMeasure& m, int depth = kDefaultDepth) {
  if (k < 0) throw InvalidArgument("k must be nonnegative");
  const Sigma q_past = Sigma::past(q);
  const EntropyBracket near =
      conditional_entropy(Sigma::of(q), Sigma::orbit(p_prev, CoordinateSet::right_ray(-k)) | q_past, m, depth);
  const EntropyBracket all = conditional_entropy(Sigma::of(q), Sigma::full(p_prev) | q_past, m, depth);
  // The first conditioning is contained in the second, so D_k >= 0.
  const double lo = std::max(0.0, near.lower - all.upper);
  const double hi = std::max(lo, near.upper - all.lower);
  return EntropyBracket::between(lo, hi);
}

/// The same quantity before the shift: H(P|P⁻) − H(P | P⁻ ∨ T^{-k}Q⁻).
inline EntropyBracket dk_unshifted(const CoordinatePartition& p_prev, const CoordinatePartition& q, int k,
                                   const MarkovMeasure& m, int depth = kDefaultDepth) {
  const Sigma p_past = Sigma::past(p_prev);
  const EntropyBracket a = conditional_entropy(Sigma::of(p_prev), p_past, m, depth);
  const EntropyBracket b = conditional_entropy(
      Sigma::of(p_prev), p_past | Sigma::orbit(q, CoordinateSet::right_ray(static_cast<Coord>(k) + 1)), m, depth);
  const double lo = std::max(0.0, a.lower - b.upper);
  return EntropyBracket::between(lo, std::max(lo, a.upper - b.lower));
}

struct LevelRecord {
  int n = 1;
  int k = 0;
  std::optional<EntropyBracket> d;  // D_{k_n}; none at the first level
  double epsilon_n = 0.0;
  std::optional<double> epsilon_prev;
  double defect_bound = 0.0;        // Σ_{i≥n} ε_i
  EntropyBracket defect_direct;     // H(P_n|P_n⁻) − H(P_n|P_L⁻)
};

struct ExcellentReport {
  std::vector<LevelRecord> levels;
  std::vector<int> spacings;
  std::vector<CoordinatePartition> partitions;  // P_1, ..., P_L
  int k_max = kDefaultKMax;
  int depth = kDefaultDepth;
};

inline void check_increasing_sequence(const std::vector<CoordinatePartition>& qs) {
  for (std::size_t i = 1; i < qs.size(); ++i) {
    if (qs[i].width() <= qs[i - 1].width())
      throw InvalidArgument("Q_" + std::to_string(i + 1) + " window is not wider than Q_" + std::to_string(i));
    if (!qs[i].refines(qs[i - 1]))
      throw InvalidArgument("Q_" + std::to_string(i + 1) + " does not refine Q_" + std::to_string(i));
  }
}

/// Q_n = fine partition of [0, n-1].
inline std::vector<CoordinatePartition> fine_sequence(const SftSystem& sys, int levels) {
  std::vector<CoordinatePartition> qs;
  for (int n = 1; n <= levels; ++n) qs.push_back(CoordinatePartition::fine(sys, 0, n - 1));
  return qs;
}

/// Q_n = indicator of `block` read at every start in [-(n-1), n-1], joined
/// with the fine partition of [-(n-2), n-2] once n >= 2. Coarse at every level.
inline std::vector<CoordinatePartition> block_indicator_sequence(const SftSystem& sys, int levels, const Word& block) {
  if (block.empty()) throw InvalidArgument("indicator block must be nonempty");
  auto ind = Labeling::from_function(sys, static_cast<int>(block.size()), [&](const Word& w) { return w == block ? 1 : 0; });
  std::vector<CoordinatePartition> qs;
  for (int n = 1; n <= levels; ++n) {
    auto q = CoordinatePartition::from_labeling(sys, ind, -(n - 1));
    for (Coord s = -(n - 1) + 1; s <= n - 1; ++s) q = q.join(CoordinatePartition::from_labeling(sys, ind, s));
    if (n >= 2) q = q.join(CoordinatePartition::fine(sys, -(n - 2), n - 2));
    qs.push_back(std::move(q));
  }
  return qs;
}

/// Smallest admissible spacing at every level, starting the search at the
/// previous spacing so the sequence is nondecreasing.
inline ExcellentReport choose_spacings(const std::vector<CoordinatePartition>& qs, const SpacingSchedule& schedule,
                                       const MarkovMeasure& m) {
  schedule.validate();
  if (qs.empty()) throw InvalidArgument("need at least one partition Q_1");
  if (static_cast<int>(qs.size()) > schedule.levels())
    throw InvalidArgument("schedule has " + std::to_string(schedule.levels()) + " epsilons for " +
                          std::to_string(qs.size()) + " levels");
  check_increasing_sequence(qs);

  ExcellentReport rep;
  rep.k_max = schedule.k_max;
  rep.depth = schedule.depth;
  rep.spacings.push_back(0);
  rep.partitions.push_back(qs.front());
  for (int n = 2; n <= static_cast<int>(qs.size()); ++n) {
    const auto& prev = rep.partitions.back();
    const auto& q = qs[static_cast<std::size_t>(n - 1)];
    const double eps = schedule.epsilon(n);
    std::optional<int> chosen;
    EntropyBracket d;
    for (int k = rep.spacings.back(); k <= schedule.k_max; ++k) {
      d = dk(prev, q, k, m, schedule.depth);
      if (d.upper < eps) {
        chosen = k;
        break;
      }
    }
    if (!chosen) throw SearchExhausted(n, schedule.k_max);
    rep.spacings.push_back(*chosen);
    rep.partitions.push_back(prev.join(q.shifted(*chosen)));
    LevelRecord r;
    r.n = n;
    r.k = *chosen;
    r.d = d;
    r.epsilon_n = eps;
    r.epsilon_prev = schedule.epsilon(n - 1);
    rep.levels.push_back(r);
  }
  LevelRecord first;
  first.epsilon_n = schedule.epsilon(1);
  rep.levels.insert(rep.levels.begin(), first);

  const Sigma last_past = Sigma::past(rep.partitions.back());
  for (std::size_t i = 0; i < rep.levels.size(); ++i) {
    auto& r = rep.levels[i];
    const auto& pn = rep.partitions[i];
    r.defect_bound = schedule.tail_sum(r.n);
    const EntropyBracket own = conditional_entropy(Sigma::of(pn), Sigma::past(pn), m, schedule.depth);
    const EntropyBracket deep = conditional_entropy(Sigma::of(pn), last_past, m, schedule.depth);
    const double lo = std::max(0.0, own.lower - deep.upper);
    r.defect_direct = EntropyBracket::between(lo, std::max(lo, own.upper - deep.lower));
  }
  return rep;
}

/// Certificate that x_n = y_n for every n ≥ agree_from.
struct AsymptoticCertificate {
  bool identical = false;
  std::optional<Coord> agree_from;  // least such N; absent when no N ≤ horizon works
  double bound = 0.0;               // guarantee on d(T^h x, T^h y) at h = horizon

  /// d(T^n x, T^n y) ≤ 2^{-(n - N)} for n ≥ N.
  double bound_at(Coord n) const {
    if (identical) return 0.0;
    if (!agree_from) return 1.0;
    if (n < *agree_from) return 1.0;
    return std::ldexp(1.0, -static_cast<int>(std::min<Coord>(n - *agree_from, 1074)));
  }
};

inline AsymptoticCertificate asymptotic_certificate(const Point& x, const Point& y, Coord horizon) {
  AsymptoticCertificate c;
  const TailAgreement t = forward_agreement(x, y);
  if (!t.tails_equal) {
    c.bound = 1.0;
    return c;
  }
  if (!t.extreme_difference) {
    c.identical = true;
    c.bound = 0.0;
    return c;
  }
  const Coord n0 = *t.extreme_difference + 1;
  if (n0 > horizon) {
    c.bound = 1.0;
    return c;
  }
  c.agree_from = n0;
  c.bound = c.bound_at(horizon);
  return c;
}

}  // namespace sftlab
