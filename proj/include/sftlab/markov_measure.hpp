#pragma once

// Stationary Markov measures on an SFT.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "sftlab/error.hpp"
#include "sftlab/random.hpp"
#include "sftlab/shift_space.hpp"

namespace sftlab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kStochasticTol = 1e-12;

namespace detail {

inline void check_square_stochastic(const Matrix& p) {
  if (p.rows() != p.cols() || p.rows() == 0)
    throw InvalidArgument("transition matrix must be square and nonempty");
  for (Eigen::Index a = 0; a < p.rows(); ++a) {
    double s = 0.0;
    for (Eigen::Index b = 0; b < p.cols(); ++b) {
      if (!(p(a, b) >= 0.0))
        throw InvalidArgument("transition row " + std::to_string(a) + " has a negative entry");
      s += p(a, b);
    }
    if (std::abs(s - 1.0) > kStochasticTol)
      throw InvalidArgument("transition row " + std::to_string(a) + " sums to " +
                            std::to_string(s) + ", not 1");
  }
}

/// Reachability closure from `from` in the support graph.
inline std::vector<char> reachable(const Matrix& p, int from) {
  const int n = static_cast<int>(p.rows());
  std::vector<char> seen(n, 0);
  std::vector<int> stack{from};
  seen[from] = 1;
  while (!stack.empty()) {
    int a = stack.back();
    stack.pop_back();
    for (int b = 0; b < n; ++b)
      if (p(a, b) > 0.0 && !seen[b]) {
        seen[b] = 1;
        stack.push_back(b);
      }
  }
  return seen;
}

inline bool is_irreducible(const Matrix& p) {
  const int n = static_cast<int>(p.rows());
  for (int a = 0; a < n; ++a) {
    auto r = reachable(p, a);
    if (std::count(r.begin(), r.end(), 1) != n) return false;
  }
  return true;
}

/// Period (gcd of cycle lengths) and cyclic class of each state, via BFS levels.
inline std::pair<int, std::vector<int>> cyclic_structure(const Matrix& p) {
  const int n = static_cast<int>(p.rows());
  std::vector<int> level(n, -1);
  level[0] = 0;
  std::queue<int> q;
  q.push(0);
  int g = 0;
  while (!q.empty()) {
    int a = q.front();
    q.pop();
    for (int b = 0; b < n; ++b) {
      if (!(p(a, b) > 0.0)) continue;
      if (level[b] < 0) {
        level[b] = level[a] + 1;
        q.push(b);
      } else {
        g = std::gcd(g, std::abs(level[a] + 1 - level[b]));
      }
    }
  }
  if (g == 0) g = 1;
  std::vector<int> cls(n);
  for (int a = 0; a < n; ++a) cls[a] = level[a] % g;
  return {g, cls};
}

}  // namespace detail

/// Unique π with πP = π, ‖π‖₁ = 1 for an irreducible stochastic P.
inline Vector stationary_distribution(const Matrix& transition) {
  detail::check_square_stochastic(transition);
  if (!detail::is_irreducible(transition))
    throw InvalidArgument("transition matrix is reducible");
  const Eigen::Index n = transition.rows();
  // (Pᵀ - I)π = 0 with the last equation replaced by Σπ = 1.
  Matrix a = transition.transpose() - Matrix::Identity(n, n);
  a.row(n - 1).setOnes();
  Vector rhs = Vector::Zero(n);
  rhs(n - 1) = 1.0;
  Vector pi = a.fullPivLu().solve(rhs);
  for (Eigen::Index i = 0; i < n; ++i) pi(i) = std::max(pi(i), 0.0);
  pi /= pi.sum();
  // A few power steps tighten the residual well below 1e-12.
  for (int it = 0; it < 4; ++it) {
    Vector next = transition.transpose() * pi;
    next /= next.sum();
    pi = next;
  }
  return pi;
}

struct SpectralInfo {
  bool is_primitive = true;
  int period = 1;
  double second_modulus = 0.0;  // largest eigenvalue modulus off the unit circle
};

/// Stationary Markov measure; immutable once built.
class MarkovMeasure {
 public:
  MarkovMeasure() = default;

  /// Builds the measure on `system`. Positive transitions must be allowed
  /// words; `strict` additionally requires every allowed word to be positive.
  MarkovMeasure(SftSystem system, Matrix transition, bool strict = false)
      : system_(std::move(system)), p_(std::move(transition)) {
    const int n = system_.alphabet_size();
    if (p_.rows() != n || p_.cols() != n)
      throw InvalidArgument("transition size does not match alphabet size " + std::to_string(n));
    detail::check_square_stochastic(p_);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (p_(a, b) > 0.0 && !system_.allowed(a, b))
          throw InvalidArgument("transition (" + std::to_string(a) + "," + std::to_string(b) +
                                ") is positive but the word is forbidden");
        if (strict && p_(a, b) <= 0.0 && system_.allowed(a, b))
          throw InvalidArgument("strict support: allowed word (" + std::to_string(a) + "," +
                                std::to_string(b) + ") has zero probability");
      }
    pi_ = stationary_distribution(p_);
    r_ = Matrix::Zero(n, n);
    for (int b = 0; b < n; ++b)
      for (int a = 0; a < n; ++a) r_(b, a) = pi_(a) * p_(a, b) / pi_(b);
    auto [period, cls] = detail::cyclic_structure(p_);
    period_ = period;
    classes_ = std::move(cls);
  }

  /// Measure whose support graph is exactly the positive entries of `transition`.
  static MarkovMeasure on_support(const Matrix& transition) {
    const int n = static_cast<int>(transition.rows());
    std::vector<std::vector<int>> adj(n, std::vector<int>(n, 0));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) adj[a][b] = transition(a, b) > 0.0 ? 1 : 0;
    return MarkovMeasure(SftSystem(n, adj), transition, true);
  }

  const SftSystem& system() const noexcept { return system_; }
  int alphabet_size() const noexcept { return system_.alphabet_size(); }
  const Matrix& transition() const noexcept { return p_; }
  const Vector& stationary() const noexcept { return pi_; }
  /// R(b,a) = π(a)P(a,b)/π(b): law of x_{-1} given x_0 = b.
  const Matrix& reverse_kernel() const noexcept { return r_; }
  int period() const noexcept { return period_; }
  /// Cyclic class of each symbol; a transition advances the class by 1 mod period.
  const std::vector<int>& cyclic_classes() const noexcept { return classes_; }

  /// The support of the measure as an SFT (edges with positive probability).
  SftSystem support_system() const {
    const int n = alphabet_size();
    std::vector<std::vector<int>> adj(n, std::vector<int>(n, 0));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) adj[a][b] = p_(a, b) > 0.0 ? 1 : 0;
    return SftSystem(n, adj);
  }

  /// The time-reversed chain, a measure on the transposed system.
  MarkovMeasure reversed() const {
    const int n = alphabet_size();
    std::vector<std::vector<int>> adj(n, std::vector<int>(n, 0));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) adj[a][b] = system_.adjacency()[b][a];
    return MarkovMeasure(SftSystem(n, adj), r_);
  }

  /// μ([w]); 0 for forbidden words. Independent of the start coordinate.
  double word_prob(const Word& w) const {
    if (w.empty()) return 1.0;
    for (Symbol s : w) system_.check_symbol(s);
    double p = pi_(w[0]);
    for (std::size_t i = 1; i < w.size() && p > 0.0; ++i) p *= p_(w[i - 1], w[i]);
    return p;
  }

  double cylinder_prob(const Cylinder& c) const { return word_prob(c.word); }

  /// P^k by repeated squaring.
  Matrix power(int k) const {
    Matrix out = Matrix::Identity(p_.rows(), p_.cols());
    Matrix base = p_;
    while (k > 0) {
      if (k & 1) out = out * base;
      base = base * base;
      k >>= 1;
    }
    return out;
  }

 private:
  SftSystem system_;
  Matrix p_;
  Vector pi_;
  Matrix r_;
  int period_ = 1;
  std::vector<int> classes_;
};

inline double cylinder_prob(const MarkovMeasure& m, const Cylinder& c) { return m.cylinder_prob(c); }

inline Matrix reverse_kernel(const MarkovMeasure& m) { return m.reverse_kernel(); }

inline double xlogx(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }

/// Shannon entropy (nats) of a finite distribution.
template <typename Range>
double shannon_entropy(const Range& probs) {
  double h = 0.0;
  for (double p : probs) h -= xlogx(p);
  return h;
}

/// −Σᵢⱼ πᵢ Pᵢⱼ ln Pᵢⱼ, in nats.
inline double entropy_rate(const MarkovMeasure& m) {
  const Matrix& p = m.transition();
  const Vector& pi = m.stationary();
  double h = 0.0;
  for (Eigen::Index a = 0; a < p.rows(); ++a)
    for (Eigen::Index b = 0; b < p.cols(); ++b) h -= pi(a) * xlogx(p(a, b));
  return h;
}

inline SpectralInfo spectral_info(const MarkovMeasure& m) {
  SpectralInfo info;
  info.period = m.period();
  info.is_primitive = info.period == 1;
  Eigen::EigenSolver<Matrix> solver(m.transition(), false);
  double second = 0.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    double mod = std::abs(solver.eigenvalues()(i));
    if (std::abs(mod - 1.0) > 1e-9) second = std::max(second, mod);
  }
  info.second_modulus = second;
  return info;
}

/// Parry measure (maximal entropy) of an irreducible SFT from its Perron data.
inline MarkovMeasure parry_measure(const SftSystem& sys) {
  const int n = sys.alphabet_size();
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = sys.adjacency()[i][j];
  // Power iteration on (A + I) keeps periodic graphs from oscillating.
  Matrix shifted = a + Matrix::Identity(n, n);
  Vector right = Vector::Ones(n), left = Vector::Ones(n);
  for (int it = 0; it < 5000; ++it) {
    Vector r2 = shifted * right;
    Vector l2 = shifted.transpose() * left;
    r2 /= r2.sum();
    l2 /= l2.sum();
    double delta = (r2 - right).cwiseAbs().maxCoeff() + (l2 - left).cwiseAbs().maxCoeff();
    right = r2;
    left = l2;
    if (delta < 1e-16) break;
  }
  const double lambda = (a * right).sum() / right.sum();
  Matrix p(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) p(i, j) = a(i, j) * right(j) / (lambda * right(i));
  // Renormalize rows against accumulated rounding.
  for (int i = 0; i < n; ++i) p.row(i) /= p.row(i).sum();
  return MarkovMeasure(sys, p);
}

/// Exact finite-dimensional path sampler: forward via P, backward via R.
/// Returns the word on coordinates [from, to]; when `anchor` is set the
/// symbol at anchor->first is fixed to anchor->second.
inline Word sample_path(const MarkovMeasure& m, RandomStream& rng, Coord from, Coord to,
                        std::optional<std::pair<Coord, Symbol>> anchor = std::nullopt) {
  if (to < from) return {};
  const int n = m.alphabet_size();
  Coord pivot = from;
  Symbol start;
  std::vector<double> w(n);
  if (anchor) {
    pivot = anchor->first;
    start = anchor->second;
    m.system().check_symbol(start);
    if (m.stationary()(start) <= 0.0) throw InvalidArgument("anchor symbol has zero mass");
  } else {
    for (int a = 0; a < n; ++a) w[a] = m.stationary()(a);
    start = rng.categorical(w);
  }
  // Coordinates may extend beyond [from, to] to reach the anchor.
  const Coord lo = std::min(from, pivot), hi = std::max(to, pivot);
  Word full(static_cast<std::size_t>(hi - lo + 1));
  full[static_cast<std::size_t>(pivot - lo)] = start;
  for (Coord c = pivot + 1; c <= hi; ++c) {
    Symbol prev = full[static_cast<std::size_t>(c - 1 - lo)];
    for (int b = 0; b < n; ++b) w[b] = m.transition()(prev, b);
    full[static_cast<std::size_t>(c - lo)] = rng.categorical(w);
  }
  for (Coord c = pivot - 1; c >= lo; --c) {
    Symbol next = full[static_cast<std::size_t>(c + 1 - lo)];
    for (int a = 0; a < n; ++a) w[a] = m.reverse_kernel()(next, a);
    full[static_cast<std::size_t>(c - lo)] = rng.categorical(w);
  }
  return Word(full.begin() + (from - lo), full.begin() + (to - lo + 1));
}

// Presets ------------------------------------------------------------------

inline MarkovMeasure bernoulli_measure(double p0 = 0.5) {
  if (!(p0 > 0.0 && p0 < 1.0)) throw InvalidArgument("Bernoulli parameter must lie in (0,1)");
  Matrix p(2, 2);
  p << p0, 1.0 - p0, p0, 1.0 - p0;
  return MarkovMeasure(SftSystem::full_shift(2), p);
}

inline MarkovMeasure golden_mean_parry() {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  Matrix p(2, 2);
  p << 1.0 / phi, 1.0 / (phi * phi), 1.0, 0.0;
  return MarkovMeasure(SftSystem::golden_mean(), p);
}

inline MarkovMeasure two_state_lazy() {
  Matrix p(2, 2);
  p << 0.9, 0.1, 0.2, 0.8;
  return MarkovMeasure(SftSystem::full_shift(2), p);
}

inline MarkovMeasure period_two() {
  Matrix p(2, 2);
  p << 0.0, 1.0, 1.0, 0.0;
  return MarkovMeasure(SftSystem::period_two(), p);
}

/// Period-2 chain with positive entropy: {0,1} -> {2,3} -> {0,1}, uniform branching.
inline MarkovMeasure cyclic_four() {
  Matrix p(4, 4);
  p << 0, 0, .5, .5,  //
      0, 0, .5, .5,   //
      .5, .5, 0, 0,   //
      .5, .5, 0, 0;
  return MarkovMeasure(SftSystem::cyclic_four(), p);
}

struct NamedMeasure {
  std::string name;
  MarkovMeasure measure;
};

/// The five named presets, in a fixed order.
inline std::vector<NamedMeasure> all_presets() {
  return {{"full-2-bernoulli", bernoulli_measure()},
          {"golden-mean-parry", golden_mean_parry()},
          {"two-state-lazy", two_state_lazy()},
          {"period-2", period_two()},
          {"cyclic-4", cyclic_four()}};
}

}  // namespace sftlab
