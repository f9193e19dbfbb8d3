#pragma once

// Pairs of points: classification, the entropy-pair distance δ, separated
// asymptotic pairs, branching of stable classes, and a sampled ergodicity
// check for λ.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sftlab/conditional_square.hpp"
#include "sftlab/entropy.hpp"
#include "sftlab/excellent.hpp"
#include "sftlab/random.hpp"
#include "sftlab/shift_space.hpp"

namespace sftlab {

inline constexpr double kDefaultLiminfThreshold = 0.0625;  // 2^-4

struct PairThresholds {
  double delta = 1.0;                         // limsup must reach this
  double liminf = kDefaultLiminfThreshold;    // liminf must get down to this
};

struct ForwardVerdict {
  std::optional<Coord> asymptotic_certificate;
  double max_distance_tail = 0.0;  // sup_{n ≥ horizon} d(T^n x, T^n y)
};

struct BackwardVerdict {
  double limsup_estimate = 0.0;  // max_{1≤n≤H} d(T^{-n}x, T^{-n}y)
  double liminf_estimate = 0.0;  // min_{1≤n≤H} d(T^{-n}x, T^{-n}y)
  Coord horizon = 0;
  bool tails_equal = false;      // x_n = y_n for all very negative n
};

struct PairVerdict {
  ForwardVerdict forward;
  BackwardVerdict backward;
  PairThresholds thresholds;
  std::set<std::string> labels;  // identical | asymptotic_T | proximal_Tinv | li_yorke_Tinv

  bool has(const std::string& l) const { return labels.count(l) > 0; }
};

namespace detail {

/// Distances d(T^{-n}x, T^{-n}y) for n = 1..H in one sweep over the sorted
/// positions where the points differ.
inline std::vector<double> backward_distances(const Point& x, const Point& y, Coord H) {
  const Coord lp = tail_lcm(x, y, false), rp = tail_lcm(x, y, true);
  const Coord lo = std::min({x.core_begin(), y.core_begin(), -H}) - lp;
  const Coord hi = std::max({x.core_end(), y.core_end(), Coord{0}}) + rp;
  std::vector<Coord> diff;
  for (Coord c = lo; c <= hi; ++c)
    if (x.at(c) != y.at(c)) diff.push_back(c);
  std::vector<double> out(static_cast<std::size_t>(H));
  // Walk n upward, i.e. the centre −n moves left.
  std::size_t idx = diff.size();  // first diff position > centre
  for (Coord n = 1; n <= H; ++n) {
    const Coord centre = -n;
    while (idx > 0 && diff[idx - 1] > centre) --idx;
    Coord best = std::numeric_limits<Coord>::max();
    if (idx < diff.size()) best = std::min(best, diff[idx] - centre);
    if (idx > 0) best = std::min(best, centre - diff[idx - 1]);
    out[static_cast<std::size_t>(n - 1)] =
        best == std::numeric_limits<Coord>::max() ? 0.0 : std::ldexp(1.0, -static_cast<int>(std::min<Coord>(best, 1074)));
  }
  return out;
}

}  // namespace detail

inline PairVerdict classify_pair(const Point& x, const Point& y, Coord horizon, PairThresholds th = {}) {
  if (horizon < 1) throw InvalidArgument("classification horizon must be >= 1");
  PairVerdict v;
  v.thresholds = th;
  v.backward.horizon = horizon;
  if (same_sequence(x, y)) {
    v.labels.insert("identical");
    v.forward.asymptotic_certificate = std::numeric_limits<Coord>::min();
    return v;
  }
  const AsymptoticCertificate cert = asymptotic_certificate(x, y, std::numeric_limits<Coord>::max() / 4);
  v.forward.asymptotic_certificate = cert.agree_from;

  // Differences repeat with the joint tail period beyond the cores, so the
  // sup over n >= horizon is set by the last difference before the horizon
  // unless one lies at or past it.
  const Coord lo = std::min(x.core_begin(), y.core_begin()) - detail::tail_lcm(x, y, false);
  const Coord stop = std::max(horizon, std::max(x.core_end(), y.core_end())) + detail::tail_lcm(x, y, true);
  std::optional<Coord> last;
  for (Coord c = stop; c >= lo; --c)
    if (x.at(c) != y.at(c)) {
      last = c;
      break;
    }
  double tail = 0.0;
  if (last) tail = *last >= horizon ? 1.0 : std::ldexp(1.0, -static_cast<int>(std::min<Coord>(horizon - *last, 1074)));
  v.forward.max_distance_tail = tail;

  const auto d = detail::backward_distances(x, y, horizon);
  v.backward.limsup_estimate = *std::max_element(d.begin(), d.end());
  v.backward.liminf_estimate = *std::min_element(d.begin(), d.end());
  v.backward.tails_equal = backward_agreement(x, y).tails_equal;

  if (v.forward.asymptotic_certificate) v.labels.insert("asymptotic_T");
  const bool proximal = v.backward.liminf_estimate <= th.liminf;
  if (proximal) v.labels.insert("proximal_Tinv");
  if (proximal && !v.backward.tails_equal && th.delta > 0.0 && v.backward.limsup_estimate >= th.delta)
    v.labels.insert("li_yorke_Tinv");
  return v;
}

struct DeltaReport {
  double delta = 0.0;
  std::optional<std::pair<Cylinder, Cylinder>> witness;
  double witness_mass = 0.0;
};

/// δ = sup{d(x,y) : (x,y) a non-diagonal point of supp λ}. λ is shift
/// invariant, so the least |n| carrying an off-diagonal rectangle of
/// positive mass is 0 as soon as one exists anywhere.
inline DeltaReport delta_sup(const PinskerModel& pm, const MarkovMeasure& m) {
  pm.check(m);
  DeltaReport rep;
  if (entropy_rate(m) <= kExactWidth) return rep;
  const int n = m.alphabet_size();
  for (Symbol a = 0; a < n; ++a)
    for (Symbol b = 0; b < n; ++b) {
      if (a == b) continue;
      const Cylinder ca{0, {a}}, cb{0, {b}};
      const double mass = lambda_rect(pm, m, ca, cb);
      if (mass > kExactWidth) {
        rep.delta = 1.0;
        rep.witness = std::make_pair(ca, cb);
        rep.witness_mass = mass;
        return rep;
      }
    }
  return rep;
}

/// Two points with different Q-labels that agree from some coordinate on.
struct SeparatedPair {
  Point x;
  Point y;
  std::vector<int> label_x;
  std::vector<int> label_y;
  Coord agree_from = 0;
};

namespace detail {

/// Shortest pair of equal-length paths from (a, b) to a common symbol in
/// the support graph; returns the two paths excluding a and b.
inline std::optional<std::pair<Word, Word>> meet(const SftSystem& sys, Symbol a, Symbol b) {
  const int n = sys.alphabet_size();
  if (a == b) return std::make_pair(Word{}, Word{});
  std::vector<int> parent(static_cast<std::size_t>(n * n), -2);
  std::deque<int> queue;
  const int start = a * n + b;
  parent[static_cast<std::size_t>(start)] = -1;
  queue.push_back(start);
  while (!queue.empty()) {
    const int cur = queue.front();
    queue.pop_front();
    const int u = cur / n, v = cur % n;
    for (int s = 0; s < n; ++s) {
      if (!sys.allowed(u, s)) continue;
      for (int t = 0; t < n; ++t) {
        if (!sys.allowed(v, t)) continue;
        const int nxt = s * n + t;
        if (parent[static_cast<std::size_t>(nxt)] != -2) continue;
        parent[static_cast<std::size_t>(nxt)] = cur;
        if (s == t) {
          Word px, py;
          for (int c = nxt; c != start; c = parent[static_cast<std::size_t>(c)]) {
            px.push_back(c / n);
            py.push_back(c % n);
          }
          std::reverse(px.begin(), px.end());
          std::reverse(py.begin(), py.end());
          return std::make_pair(px, py);
        }
        queue.push_back(nxt);
      }
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Searches for an asymptotic pair separated by a two-label partition.
/// Absent when h_μ(Q,T) = 0; Inconclusive when the entropy bracket cannot
/// decide the sign.
inline std::optional<SeparatedPair> find_separated_pair(const CoordinatePartition& q, const MarkovMeasure& m,
                                                        int depth = kDefaultDepth) {
  const int labels = q.num_labels();
  if (labels > 2) throw InvalidArgument("partition has " + std::to_string(labels) + " labels; expected two");
  if (labels < 2) return std::nullopt;
  const EntropyBracket h = process_entropy(q, m, depth);
  if (h.upper <= kExactWidth) return std::nullopt;
  if (h.lower <= kExactWidth)
    throw Inconclusive("process entropy bracket [" + std::to_string(h.lower) + ", " + std::to_string(h.upper) +
                       "] does not decide positivity at depth " + std::to_string(depth));

  const SftSystem sys = m.support_system();
  const Coord a = q.window_begin();
  std::vector<std::vector<int>> label_set;
  std::vector<std::pair<Word, std::vector<int>>> words;
  q.for_each_word(a, q.window_end(), [&](const Word& w) {
    if (m.word_prob(w) <= 0.0) return;
    auto l = q.label_of(w, a);
    words.emplace_back(w, l);
    if (std::find(label_set.begin(), label_set.end(), l) == label_set.end()) label_set.push_back(l);
  });
  if (label_set.size() < 2) return std::nullopt;
  std::sort(label_set.begin(), label_set.end());

  std::optional<SeparatedPair> best;
  std::size_t best_len = std::numeric_limits<std::size_t>::max();
  for (const auto& [u, lu] : words) {
    if (lu != label_set[0]) continue;
    for (const auto& [v, lv] : words) {
      if (lv != label_set[1]) continue;
      auto path = detail::meet(sys, u.back(), v.back());
      if (!path || path->first.size() >= best_len) continue;
      const Symbol join = path->first.empty() ? u.back() : path->first.back();
      if (path->first.empty() && u.back() != v.back()) continue;
      const auto [r_trans, r_period] = sys.right_tail_from(join);
      auto build = [&](const Word& w, const Word& p) {
        auto [l_period, l_trans] = sys.left_tail_into(w.front());
        Word core = l_trans;
        core.insert(core.end(), w.begin(), w.end());
        core.insert(core.end(), p.begin(), p.end());
        core.insert(core.end(), r_trans.begin(), r_trans.end());
        return Point::make(m.system(), l_period, core, r_period, a - static_cast<Coord>(l_trans.size()));
      };
      SeparatedPair sp{build(u, path->first), build(v, path->second), lu, lv, 0};
      const TailAgreement t = forward_agreement(sp.x, sp.y);
      sp.agree_from = t.extreme_difference ? *t.extreme_difference + 1 : a;
      best_len = path->first.size();
      best = std::move(sp);
    }
  }
  return best;
}

/// Number of positive-probability backward words on [1−depth, 0] given the
/// future from coordinate 1.
inline std::uint64_t stable_class_count(const Word& future, int depth, const MarkovMeasure& m) {
  if (future.empty()) throw InvalidArgument("future must be nonempty");
  if (depth < 1) throw InvalidArgument("depth must be >= 1");
  if (!m.system().is_allowed(future)) throw InvalidArgument("future \"" + word_to_string(future) + "\" is not allowed");
  const int n = m.alphabet_size();
  const Matrix& r = m.reverse_kernel();
  std::vector<std::uint64_t> count(static_cast<std::size_t>(n), 0), next(static_cast<std::size_t>(n));
  count[static_cast<std::size_t>(future.front())] = 1;
  for (int step = 0; step < depth; ++step) {
    std::fill(next.begin(), next.end(), 0);
    for (int b = 0; b < n; ++b) {
      if (count[static_cast<std::size_t>(b)] == 0) continue;
      for (int a = 0; a < n; ++a) {
        if (r(b, a) <= 0.0) continue;
        auto& slot = next[static_cast<std::size_t>(a)];
        if (slot > std::numeric_limits<std::uint64_t>::max() - count[static_cast<std::size_t>(b)])
          throw InvalidArgument("stable class count overflows at depth " + std::to_string(step + 1));
        slot += count[static_cast<std::size_t>(b)];
      }
    }
    count.swap(next);
  }
  std::uint64_t total = 0;
  for (auto c : count) total += c;
  return total;
}

struct BirkhoffResult {
  double time_average = 0.0;
  double lambda_value = 0.0;
  double bound = 0.0;  // 3·sqrt(v(1+ρ)/((1−ρ)N)), v = λ(1−λ)
  long long samples = 0;
  std::uint64_t seed = 0;

  bool within() const { return std::abs(time_average - lambda_value) <= bound; }
};

/// Time average of 1_A(T^t x)·1_B(T^t y), t < N, along one λ-typical orbit
/// of T×T.
inline BirkhoffResult birkhoff_check(const PinskerModel& pm, const MarkovMeasure& m, const Cylinder& a,
                                     const Cylinder& b, const RandomStream& rng, long long N) {
  pm.check(m);
  if (N < 1) throw InvalidArgument("orbit length must be >= 1");
  BirkhoffResult res;
  res.samples = N;
  res.seed = rng.seed();
  res.lambda_value = lambda_rect(pm, m, a, b);

  Coord lo = 0, hi = 0;
  for (const Cylinder* c : {&a, &b})
    if (!c->is_whole_space()) {
      lo = std::min(lo, c->start);
      hi = std::max(hi, c->end() - 1);
    }
  const Coord to = static_cast<Coord>(N) - 1 + hi;

  RandomStream sx = rng.child("x-orbit"), sy = rng.child("y-orbit"), phase = rng.child("phase");
  const Word wx = sample_path(m, sx, lo, to);
  std::optional<std::pair<Coord, Symbol>> anchor;
  if (pm.kind == PinskerModel::Kind::cyclic) {
    // Same phase as x at coordinate 0: π restricted to that cyclic class.
    const Symbol x0 = wx[static_cast<std::size_t>(-lo)];
    std::vector<double> w(static_cast<std::size_t>(m.alphabet_size()));
    for (int s = 0; s < m.alphabet_size(); ++s)
      w[static_cast<std::size_t>(s)] = pm.classes[s] == pm.classes[x0] ? m.stationary()(s) : 0.0;
    anchor = std::make_pair(Coord{0}, static_cast<Symbol>(phase.categorical(w)));
  }
  const Word wy = sample_path(m, sy, lo, to, anchor);

  auto hit = [&](const Cylinder& c, const Word& w, Coord t) {
    if (c.is_whole_space()) return true;
    for (std::size_t i = 0; i < c.word.size(); ++i)
      if (w[static_cast<std::size_t>(t + c.start + static_cast<Coord>(i) - lo)] != c.word[i]) return false;
    return true;
  };
  long long hits = 0;
  for (Coord t = 0; t < static_cast<Coord>(N); ++t)
    if (hit(a, wx, t) && hit(b, wy, t)) ++hits;
  res.time_average = static_cast<double>(hits) / static_cast<double>(N);

  const double rho = spectral_info(m).second_modulus;
  const double v = res.lambda_value * (1.0 - res.lambda_value);
  res.bound = 3.0 * std::sqrt(v * (1.0 + rho) / ((1.0 - rho) * static_cast<double>(N)));
  return res;
}

/// Distinct two-sided lifts of a one-sided point: one per allowed,
/// positive-probability backward word of length `depth` into future[0].
inline std::vector<Point> backward_lifts(const OneSidedPoint& future, int depth, const MarkovMeasure& m) {
  if (depth < 1) throw InvalidArgument("depth must be >= 1");
  std::vector<Point> out;
  const Word head{future.at(0)};
  for (const auto& [w, mass] : conditional_atom_masses(head, depth, m).atoms)
    out.push_back(natural_extension_lift(m.system(), future, w));
  return out;
}

}  // namespace sftlab
