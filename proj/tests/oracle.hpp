#pragma once

// Brute-force reference computations used by the tests. Everything here
// enumerates words directly and shares no code path with the library beyond
// word probabilities.

#include <cmath>
#include <functional>
#include <map>
#include <vector>

#include "sftlab/sftlab.hpp"

namespace oracle {

using namespace sftlab;

/// Positive-probability words on [lo, hi] with their probabilities.
inline std::vector<std::pair<Word, double>> words(const MarkovMeasure& m, Coord lo, Coord hi) {
  std::vector<std::pair<Word, double>> out;
  const int len = static_cast<int>(hi - lo + 1);
  const int n = m.alphabet_size();
  Word w(static_cast<std::size_t>(len));
  // Plain odometer over all n^len strings, filtered by probability.
  std::vector<int> digits(static_cast<std::size_t>(len), 0);
  for (;;) {
    for (int i = 0; i < len; ++i) w[static_cast<std::size_t>(i)] = digits[static_cast<std::size_t>(i)];
    double p = m.stationary()(w[0]);
    for (int i = 1; i < len && p > 0.0; ++i) p *= m.transition()(w[i - 1], w[i]);
    if (p > 0.0) out.emplace_back(w, p);
    int i = len - 1;
    while (i >= 0 && ++digits[static_cast<std::size_t>(i)] == n) digits[static_cast<std::size_t>(i--)] = 0;
    if (i < 0) break;
  }
  return out;
}

using Key = std::vector<int>;
using Feature = std::function<Key(const Word&)>;

inline double entropy_of(const std::map<Key, double>& dist) {
  double h = 0.0;
  for (const auto& [k, p] : dist)
    if (p > 0.0) h -= p * std::log(p);
  return h;
}

/// H(target | given) over words on [lo, hi].
inline double cond_entropy(const MarkovMeasure& m, Coord lo, Coord hi, const Feature& target, const Feature& given) {
  std::map<Key, double> joint, marg;
  for (const auto& [w, p] : words(m, lo, hi)) {
    Key g = given(w);
    Key t = target(w);
    marg[g] += p;
    t.insert(t.end(), g.begin(), g.end());
    t.push_back(-7);  // separator so (t,g) splits are unambiguous
    joint[t] += p;
  }
  return entropy_of(joint) - entropy_of(marg);
}

/// Symbols at the listed coordinates of a word starting at `lo`.
inline Feature symbols_at(std::vector<Coord> coords, Coord lo) {
  return [coords, lo](const Word& w) {
    Key k;
    for (Coord c : coords) k.push_back(w[static_cast<std::size_t>(c - lo)]);
    return k;
  };
}

/// Label of a partition read off a word starting at `lo`, shifted by `off`.
inline Feature label_at(const CoordinatePartition& p, Coord off, Coord lo) {
  return [p, off, lo](const Word& w) {
    const Coord a = p.window_begin() + off;
    const Word sub(w.begin() + (a - lo), w.begin() + (a - lo + p.width()));
    return p.label_of(sub, p.window_begin());
  };
}

inline Feature concat(std::vector<Feature> fs) {
  return [fs](const Word& w) {
    Key k;
    for (const auto& f : fs) {
      Key part = f(w);
      k.insert(k.end(), part.begin(), part.end());
      k.push_back(-3);
    }
    return k;
  };
}

/// ν_n(A×B) by summing over word pairs on [lo, hi] that agree on [n+1, hi].
inline double nu_rect(const MarkovMeasure& m, int n, const Cylinder& a, const Cylinder& b, Coord lo, Coord hi) {
  const auto ws = words(m, lo, hi);
  const std::size_t cut = static_cast<std::size_t>(n + 1 - lo);
  auto in = [&](const Word& w, const Cylinder& c) {
    for (std::size_t i = 0; i < c.word.size(); ++i)
      if (w[static_cast<std::size_t>(c.start - lo) + i] != c.word[i]) return false;
    return true;
  };
  std::map<Word, double> shared;
  for (const auto& [w, p] : ws) shared[Word(w.begin() + static_cast<std::ptrdiff_t>(cut), w.end())] += p;
  double s = 0.0;
  for (const auto& [x, px] : ws) {
    if (!in(x, a)) continue;
    const Word zx(x.begin() + static_cast<std::ptrdiff_t>(cut), x.end());
    for (const auto& [y, py] : ws) {
      if (!in(y, b)) continue;
      if (!std::equal(zx.begin(), zx.end(), y.begin() + static_cast<std::ptrdiff_t>(cut))) continue;
      s += px * py / shared[zx];
    }
  }
  return s;
}

}  // namespace oracle
