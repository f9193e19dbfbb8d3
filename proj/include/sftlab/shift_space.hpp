#pragma once

// Two-sided subshifts of finite type, eventually periodic points, the
// metric d(x,y) = 2^-min{|n| : x_n != y_n}, the shift, and the lift of a
// one-sided point into the natural extension.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sftlab/error.hpp"

namespace sftlab {

using Symbol = int;
using Word = std::vector<Symbol>;
using Coord = std::int64_t;

inline char symbol_char(Symbol s) {
  return s < 10 ? static_cast<char>('0' + s) : static_cast<char>('a' + (s - 10));
}

inline std::string word_to_string(const Word& w) {
  std::string out;
  out.reserve(w.size());
  for (Symbol s : w) out.push_back(symbol_char(s));
  return out;
}

/// Parses "0110"; symbols >= 10 are written 'a', 'b', ...
inline Word parse_word(std::string_view text) {
  Word w;
  w.reserve(text.size());
  for (char c : text) {
    if (c >= '0' && c <= '9') {
      w.push_back(c - '0');
    } else if (c >= 'a' && c <= 'z') {
      w.push_back(10 + (c - 'a'));
    } else {
      throw InvalidArgument(std::string("invalid symbol character '") + c + "' in word \"" +
                            std::string(text) + "\"");
    }
  }
  return w;
}

/// Alphabet {0..N-1} with a 0/1 transition graph: "ab" is allowed iff adjacency(a,b) = 1.
class SftSystem {
 public:
  SftSystem() : SftSystem(1, {{1}}) {}

  SftSystem(int alphabet_size, std::vector<std::vector<int>> adjacency)
      : n_(alphabet_size), adj_(std::move(adjacency)) {
    if (n_ < 1) throw InvalidArgument("alphabet_size must be >= 1");
    if (static_cast<int>(adj_.size()) != n_)
      throw InvalidArgument("adjacency must have alphabet_size rows");
    std::vector<int> col(n_, 0);
    for (int a = 0; a < n_; ++a) {
      if (static_cast<int>(adj_[a].size()) != n_)
        throw InvalidArgument("adjacency row " + std::to_string(a) + " has wrong length");
      int row = 0;
      for (int b = 0; b < n_; ++b) {
        int v = adj_[a][b];
        if (v != 0 && v != 1)
          throw InvalidArgument("adjacency entry (" + std::to_string(a) + "," + std::to_string(b) +
                                ") is not 0/1");
        row += v;
        col[b] += v;
      }
      if (row == 0) throw InvalidArgument("symbol " + std::to_string(a) + " has no successor");
    }
    for (int b = 0; b < n_; ++b)
      if (col[b] == 0) throw InvalidArgument("symbol " + std::to_string(b) + " has no predecessor");
  }

  static SftSystem full_shift(int n) {
    return SftSystem(n, std::vector<std::vector<int>>(n, std::vector<int>(n, 1)));
  }
  /// Forbidden word "11".
  static SftSystem golden_mean() { return SftSystem(2, {{1, 1}, {1, 0}}); }
  /// The single orbit ...0101...
  static SftSystem period_two() { return SftSystem(2, {{0, 1}, {1, 0}}); }
  /// Symbols {0,1} -> {2,3} -> {0,1}: period 2 with branching.
  static SftSystem cyclic_four() {
    return SftSystem(4, {{0, 0, 1, 1}, {0, 0, 1, 1}, {1, 1, 0, 0}, {1, 1, 0, 0}});
  }

  int alphabet_size() const noexcept { return n_; }
  const std::vector<std::vector<int>>& adjacency() const noexcept { return adj_; }
  bool allowed(Symbol a, Symbol b) const { return adj_[a][b] == 1; }

  void check_symbol(Symbol s) const {
    if (s < 0 || s >= n_)
      throw InvalidArgument("symbol " + std::to_string(s) + " outside alphabet of size " +
                            std::to_string(n_));
  }

  bool is_allowed(const Word& w) const {
    for (Symbol s : w) check_symbol(s);
    for (std::size_t i = 1; i < w.size(); ++i)
      if (!allowed(w[i - 1], w[i])) return false;
    return true;
  }

  /// All allowed words of the given length, in lexicographic order.
  std::vector<Word> allowed_words(int length) const {
    std::vector<Word> out;
    if (length <= 0) {
      out.emplace_back();
      return out;
    }
    Word w(length);
    auto rec = [&](auto&& self, int pos) -> void {
      if (pos == length) {
        out.push_back(w);
        return;
      }
      for (Symbol s = 0; s < n_; ++s) {
        if (pos > 0 && !allowed(w[pos - 1], s)) continue;
        w[pos] = s;
        self(self, pos + 1);
      }
    };
    rec(rec, 0);
    return out;
  }

  /// Returns (period, transient) so that ...period·period·transient·s is allowed.
  /// Walks backwards through least predecessors until a symbol repeats.
  std::pair<Word, Word> left_tail_into(Symbol s) const {
    check_symbol(s);
    Word back;  // back[0] precedes s, back[1] precedes back[0], ...
    std::vector<int> seen(n_, -1);
    Symbol cur = s;
    while (true) {
      Symbol pred = -1;
      for (Symbol a = 0; a < n_; ++a)
        if (allowed(a, cur)) {
          pred = a;
          break;
        }
      if (seen[pred] >= 0) {
        // back[seen[pred]..end] closes a cycle through pred
        int first = seen[pred];
        Word period(back.begin() + first, back.end());
        std::reverse(period.begin(), period.end());
        Word transient(back.begin(), back.begin() + first);
        std::reverse(transient.begin(), transient.end());
        return {period, transient};
      }
      seen[pred] = static_cast<int>(back.size());
      back.push_back(pred);
      cur = pred;
    }
  }

  /// Returns (transient, period) so that s·transient·period·period... is allowed.
  std::pair<Word, Word> right_tail_from(Symbol s) const {
    check_symbol(s);
    Word fwd;
    std::vector<int> seen(n_, -1);
    Symbol cur = s;
    while (true) {
      Symbol next = -1;
      for (Symbol b = 0; b < n_; ++b)
        if (allowed(cur, b)) {
          next = b;
          break;
        }
      if (seen[next] >= 0) {
        int first = seen[next];
        Word transient(fwd.begin(), fwd.begin() + first);
        Word period(fwd.begin() + first, fwd.end());
        return {transient, period};
      }
      seen[next] = static_cast<int>(fwd.size());
      fwd.push_back(next);
      cur = next;
    }
  }

  friend bool operator==(const SftSystem&, const SftSystem&) = default;

 private:
  int n_;
  std::vector<std::vector<int>> adj_;
};

/// The cylinder {x : x_{start..start+|word|-1} = word}; an empty word is the whole space.
struct Cylinder {
  Coord start = 0;
  Word word;

  static Cylinder whole_space() { return {}; }
  Coord end() const { return start + static_cast<Coord>(word.size()); }  // exclusive
  bool is_whole_space() const { return word.empty(); }
};

/// A bi-infinite sequence ...LLL·core·RRR... where core[0] sits at coordinate
/// core_begin(). Both periodic tails are nonempty.
class Point {
 public:
  Point() = default;

  /// left_transient·center·right_transient form the core; origin_offset is the
  /// index of coordinate 0 inside that concatenation.
  static Point from_parts(const SftSystem& sys, Word left_period, const Word& left_transient,
                          const Word& center, const Word& right_transient, Word right_period,
                          Coord origin_offset) {
    Word core = left_transient;
    core.insert(core.end(), center.begin(), center.end());
    core.insert(core.end(), right_transient.begin(), right_transient.end());
    return make(sys, std::move(left_period), std::move(core), std::move(right_period),
                -origin_offset);
  }

  /// Core placed at coordinates [core_begin, core_begin + |core|).
  static Point make(const SftSystem& sys, Word left_period, Word core, Word right_period,
                    Coord core_begin) {
    Point p;
    p.alphabet_ = sys.alphabet_size();
    p.left_ = std::move(left_period);
    p.core_ = std::move(core);
    p.right_ = std::move(right_period);
    p.begin_ = core_begin;
    p.validate(sys);
    p.normalize();
    return p;
  }

  /// The periodic point with x_{phase + k|period| + i} = period[i].
  static Point periodic(const SftSystem& sys, const Word& period, Coord phase = 0) {
    return make(sys, period, {}, period, phase);
  }

  int alphabet_size() const noexcept { return alphabet_; }
  const Word& left_period() const noexcept { return left_; }
  const Word& core() const noexcept { return core_; }
  const Word& right_period() const noexcept { return right_; }
  Coord core_begin() const noexcept { return begin_; }
  Coord core_end() const noexcept { return begin_ + static_cast<Coord>(core_.size()); }

  Symbol at(Coord n) const {
    if (n >= begin_ && n < core_end()) return core_[static_cast<std::size_t>(n - begin_)];
    if (n >= core_end()) {
      Coord len = static_cast<Coord>(right_.size());
      return right_[static_cast<std::size_t>((n - core_end()) % len)];
    }
    Coord len = static_cast<Coord>(left_.size());
    Coord back = (begin_ - 1 - n) % len;  // 0 = last symbol of the left period
    return left_[static_cast<std::size_t>(len - 1 - back)];
  }

  /// x restricted to [from, from + length).
  Word window(Coord from, Coord length) const {
    Word w(static_cast<std::size_t>(length));
    for (Coord i = 0; i < length; ++i) w[static_cast<std::size_t>(i)] = at(from + i);
    return w;
  }

  /// (T^n x)_k = x_{k+n}.
  Point shifted(Coord n) const {
    Point p = *this;
    p.begin_ -= n;
    return p;
  }

  bool in(const Cylinder& c) const {
    for (std::size_t i = 0; i < c.word.size(); ++i)
      if (at(c.start + static_cast<Coord>(i)) != c.word[i]) return false;
    return true;
  }

 private:
  void validate(const SftSystem& sys) const {
    if (left_.empty() || right_.empty()) throw InvalidArgument("periodic tails must be nonempty");
    auto check = [&](const Word& w) {
      if (!sys.is_allowed(w)) throw InvalidArgument("point violates adjacency in \"" +
                                                    word_to_string(w) + "\"");
    };
    Word l2 = left_;
    l2.insert(l2.end(), left_.begin(), left_.end());
    Word r2 = right_;
    r2.insert(r2.end(), right_.begin(), right_.end());
    check(l2);
    check(r2);
    Word junction{left_.back()};
    junction.insert(junction.end(), core_.begin(), core_.end());
    junction.push_back(right_.front());
    check(junction);
  }

  static Word primitive_root(const Word& w) {
    std::size_t n = w.size();
    for (std::size_t p = 1; p < n; ++p) {
      if (n % p) continue;
      bool ok = true;
      for (std::size_t i = p; i < n && ok; ++i) ok = w[i] == w[i - p];
      if (ok) return Word(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(p));
    }
    return w;
  }

  // Minimal periods, and core symbols that continue a tail are absorbed into it.
  void normalize() {
    left_ = primitive_root(left_);
    right_ = primitive_root(right_);
    while (!core_.empty() && core_.back() == right_.back()) {
      std::rotate(right_.rbegin(), right_.rbegin() + 1, right_.rend());
      core_.pop_back();
    }
    while (!core_.empty() && core_.front() == left_.front()) {
      std::rotate(left_.begin(), left_.begin() + 1, left_.end());
      core_.erase(core_.begin());
      ++begin_;
    }
  }

  int alphabet_ = 1;
  Word left_{0};
  Word core_;
  Word right_{0};
  Coord begin_ = 0;
};

namespace detail {

inline Coord tail_lcm(const Point& x, const Point& y, bool right) {
  const auto a = static_cast<Coord>(right ? x.right_period().size() : x.left_period().size());
  const auto b = static_cast<Coord>(right ? y.right_period().size() : y.left_period().size());
  return std::lcm(a, b);
}

inline void check_same_alphabet(const Point& x, const Point& y) {
  if (x.alphabet_size() != y.alphabet_size())
    throw InvalidArgument("points over different alphabets (" + std::to_string(x.alphabet_size()) +
                          " vs " + std::to_string(y.alphabet_size()) + ")");
}

}  // namespace detail

/// Smallest |j| with x_{n+j} != y_{n+j}, or nullopt when x = y.
inline std::optional<Coord> first_difference_radius(const Point& x, const Point& y, Coord n = 0) {
  detail::check_same_alphabet(x, y);
  const Coord lo = std::min(x.core_begin(), y.core_begin()) - detail::tail_lcm(x, y, false);
  const Coord hi = std::max(x.core_end(), y.core_end()) + detail::tail_lcm(x, y, true);
  // Every difference, if any exists, repeats inside [lo, hi).
  const Coord radius = std::max(std::abs(lo - n), std::abs(hi - n)) + 1;
  for (Coord j = 0; j <= radius; ++j) {
    if (x.at(n + j) != y.at(n + j) || x.at(n - j) != y.at(n - j)) return j;
  }
  return std::nullopt;
}

inline bool same_sequence(const Point& x, const Point& y) {
  return !first_difference_radius(x, y).has_value();
}

/// d(x, y) = 2^-k with k = min{|n| : x_n != y_n}; 0 when x = y.
inline double distance(const Point& x, const Point& y) {
  auto k = first_difference_radius(x, y);
  return k ? std::ldexp(1.0, -static_cast<int>(std::min<Coord>(*k, 1074))) : 0.0;
}

/// d(T^n x, T^n y) without materializing the shifted points.
inline double shifted_distance(const Point& x, const Point& y, Coord n) {
  auto k = first_difference_radius(x, y, n);
  return k ? std::ldexp(1.0, -static_cast<int>(std::min<Coord>(*k, 1074))) : 0.0;
}

inline Point shift(const Point& x, Coord n) { return x.shifted(n); }

/// Where two points stop (forward) or start (backward) disagreeing.
struct TailAgreement {
  bool tails_equal = false;              // the relevant periodic tails coincide
  std::optional<Coord> extreme_difference;  // last (forward) / first (backward) difference
};

/// Forward: tails_equal iff x_n = y_n for all large n; extreme_difference is
/// the largest n with x_n != y_n (absent when x = y).
inline TailAgreement forward_agreement(const Point& x, const Point& y) {
  detail::check_same_alphabet(x, y);
  const Coord hi = std::max(x.core_end(), y.core_end());
  const Coord per = detail::tail_lcm(x, y, true);
  for (Coord n = hi; n < hi + per; ++n)
    if (x.at(n) != y.at(n)) return {false, std::nullopt};
  const Coord lo = std::min(x.core_begin(), y.core_begin()) - detail::tail_lcm(x, y, false);
  for (Coord n = hi - 1; n >= lo; --n)
    if (x.at(n) != y.at(n)) return {true, n};
  return {true, std::nullopt};
}

/// Backward mirror of forward_agreement: smallest n with x_n != y_n.
inline TailAgreement backward_agreement(const Point& x, const Point& y) {
  detail::check_same_alphabet(x, y);
  const Coord lo = std::min(x.core_begin(), y.core_begin());
  const Coord per = detail::tail_lcm(x, y, false);
  for (Coord n = lo - 1; n >= lo - per; --n)
    if (x.at(n) != y.at(n)) return {false, std::nullopt};
  const Coord hi = std::max(x.core_end(), y.core_end()) + detail::tail_lcm(x, y, true);
  for (Coord n = lo; n < hi; ++n)
    if (x.at(n) != y.at(n)) return {true, n};
  return {true, std::nullopt};
}

/// A one-sided point x_0 x_1 ... = prefix·period·period...
struct OneSidedPoint {
  Word prefix;
  Word period;

  Symbol at(Coord n) const {
    if (n < static_cast<Coord>(prefix.size())) return prefix[static_cast<std::size_t>(n)];
    return period[static_cast<std::size_t>((n - static_cast<Coord>(prefix.size())) %
                                           static_cast<Coord>(period.size()))];
  }
};

/// Two-sided point whose coordinates >= 0 are `future` and whose coordinates
/// -|past|..-1 are `past`, preceded by a fixed allowed periodic tail.
inline Point natural_extension_lift(const SftSystem& sys, const OneSidedPoint& future,
                                    const Word& past) {
  if (future.period.empty()) throw InvalidArgument("one-sided point needs a nonempty period");
  Word joined = past;
  joined.push_back(future.at(0));
  if (!sys.is_allowed(joined))
    throw InvalidArgument("incompatible junction: past \"" + word_to_string(past) +
                          "\" cannot precede " + std::string(1, symbol_char(future.at(0))));
  const Symbol first = past.empty() ? future.at(0) : past.front();
  auto [period, transient] = sys.left_tail_into(first);
  Word core = transient;
  core.insert(core.end(), past.begin(), past.end());
  core.insert(core.end(), future.prefix.begin(), future.prefix.end());
  return Point::make(sys, period, core, future.period,
                     -static_cast<Coord>(transient.size() + past.size()));
}

/// True iff x_n = future_n for every n >= 0 (decided on a finite window).
inline bool projects_to(const Point& x, const OneSidedPoint& future) {
  const Coord stop = std::max<Coord>(static_cast<Coord>(future.prefix.size()), x.core_end()) +
                     std::lcm(static_cast<Coord>(future.period.size()),
                              static_cast<Coord>(x.right_period().size()));
  for (Coord n = 0; n < stop; ++n)
    if (x.at(n) != future.at(n)) return false;
  return true;
}

}  // namespace sftlab
