#pragma once

// Finite partitions given by labelings of coordinate windows, and their
// joins and shifts. A partition is kept as a join of shifted atomic
// labelings, so P ∨ T^{-k}Q never materializes the labeling of its hull.

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sftlab/error.hpp"
#include "sftlab/shift_space.hpp"

namespace sftlab {

/// Labels of the allowed words of one fixed width. Words are coded
/// big-endian in base `alphabet`; forbidden codes carry label -1.
class Labeling {
 public:
  Labeling(const SftSystem& sys, int width, std::vector<int> labels)
      : alphabet_(sys.alphabet_size()), width_(width), labels_(std::move(labels)) {
    if (width_ < 1) throw InvalidArgument("labeling width must be >= 1");
    long long count = 1;
    for (int i = 0; i < width_; ++i) count *= alphabet_;
    if (count > (1LL << 24)) throw InvalidArgument("labeling window too wide");
    if (static_cast<long long>(labels_.size()) != count)
      throw InvalidArgument("labeling table has the wrong size");
    // Relabel to 0..k-1 in order of first appearance; check coverage.
    std::map<int, int> dense;
    Word w(width_);
    for (long long code = 0; code < count; ++code) {
      decode(code, w);
      const bool ok = sys.is_allowed(w);
      int& lab = labels_[static_cast<std::size_t>(code)];
      if (!ok) {
        lab = -1;
        continue;
      }
      if (lab < 0)
        throw InvalidArgument("allowed word \"" + word_to_string(w) + "\" has no label");
      auto [it, inserted] = dense.emplace(lab, static_cast<int>(dense.size()));
      lab = it->second;
      ++allowed_;
    }
    num_labels_ = static_cast<int>(dense.size());
    fine_ = num_labels_ == allowed_;
    key_ = std::to_string(alphabet_) + ":" + std::to_string(width_) + ":";
    for (int l : labels_) key_ += std::to_string(l) + ",";
  }

  static std::shared_ptr<const Labeling> fine(const SftSystem& sys, int width) {
    std::vector<int> t(table_size(sys, width));
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<int>(i);
    return std::make_shared<const Labeling>(sys, width, std::move(t));
  }

  static std::shared_ptr<const Labeling> constant(const SftSystem& sys, int width = 1) {
    return std::make_shared<const Labeling>(sys, width, std::vector<int>(table_size(sys, width), 0));
  }

  static std::shared_ptr<const Labeling> from_map(const SftSystem& sys, int width,
                                                  const std::map<Word, int>& labels) {
    std::vector<int> t(table_size(sys, width), -1);
    for (const auto& [w, l] : labels) {
      if (static_cast<int>(w.size()) != width)
        throw InvalidArgument("label key \"" + word_to_string(w) + "\" has the wrong length");
      if (l < 0) throw InvalidArgument("labels must be nonnegative");
      for (Symbol s : w) sys.check_symbol(s);
      t[static_cast<std::size_t>(encode(w, sys.alphabet_size()))] = l;
    }
    return std::make_shared<const Labeling>(sys, width, std::move(t));
  }

  /// Labeling computed from a function of the word.
  template <typename F>
  static std::shared_ptr<const Labeling> from_function(const SftSystem& sys, int width, F&& f) {
    std::vector<int> t(table_size(sys, width), -1);
    Word w(width);
    for (std::size_t code = 0; code < t.size(); ++code) {
      decode_into(static_cast<long long>(code), sys.alphabet_size(), w);
      if (sys.is_allowed(w)) t[code] = f(w);
    }
    return std::make_shared<const Labeling>(sys, width, std::move(t));
  }

  int alphabet() const noexcept { return alphabet_; }
  int width() const noexcept { return width_; }
  int num_labels() const noexcept { return num_labels_; }
  bool is_fine() const noexcept { return fine_; }
  const std::string& key() const noexcept { return key_; }
  int label_of_code(long long code) const { return labels_[static_cast<std::size_t>(code)]; }
  int label_of(const Word& w) const { return labels_[static_cast<std::size_t>(encode(w, alphabet_))]; }
  const std::vector<int>& table() const noexcept { return labels_; }

  static long long encode(const Word& w, int alphabet) {
    long long code = 0;
    for (Symbol s : w) code = code * alphabet + s;
    return code;
  }

 private:
  static std::size_t table_size(const SftSystem& sys, int width) {
    std::size_t n = 1;
    for (int i = 0; i < width; ++i) n *= static_cast<std::size_t>(sys.alphabet_size());
    return n;
  }
  static void decode_into(long long code, int alphabet, Word& w) {
    for (int i = static_cast<int>(w.size()) - 1; i >= 0; --i) {
      w[i] = static_cast<Symbol>(code % alphabet);
      code /= alphabet;
    }
  }
  void decode(long long code, Word& w) const { decode_into(code, alphabet_, w); }

  int alphabet_;
  int width_;
  std::vector<int> labels_;
  int num_labels_ = 0;
  int allowed_ = 0;
  bool fine_ = false;
  std::string key_;
};

using LabelingPtr = std::shared_ptr<const Labeling>;

/// One factor of a join: the labeling read on [start, start + width).
struct PartitionComponent {
  LabelingPtr labeling;
  Coord start = 0;
  Coord end() const { return start + labeling->width() - 1; }  // inclusive
};

/// A finite partition of the shift space: the join of its components. The
/// label of a point is the tuple of component labels.
class CoordinatePartition {
 public:
  CoordinatePartition() = default;

  CoordinatePartition(const SftSystem& sys, std::vector<PartitionComponent> parts)
      : system_(sys), parts_(std::move(parts)) {
    for (const auto& c : parts_)
      if (c.labeling->alphabet() != sys.alphabet_size())
        throw InvalidArgument("component alphabet does not match the system");
    canonicalize();
  }

  /// Labeling of the window [a, b] given word by word.
  static CoordinatePartition from_labels(const SftSystem& sys, Coord a, Coord b,
                                         const std::map<Word, int>& labels) {
    if (b < a) throw InvalidArgument("empty partition window");
    return CoordinatePartition(sys, {{Labeling::from_map(sys, static_cast<int>(b - a + 1), labels), a}});
  }

  static CoordinatePartition from_labeling(const SftSystem& sys, LabelingPtr lab, Coord start) {
    return CoordinatePartition(sys, {{std::move(lab), start}});
  }

  /// Atoms are the cylinders on [a, b].
  static CoordinatePartition fine(const SftSystem& sys, Coord a, Coord b) {
    if (b < a) throw InvalidArgument("empty partition window");
    return CoordinatePartition(sys, {{Labeling::fine(sys, static_cast<int>(b - a + 1)), a}});
  }

  /// The one-atom partition.
  static CoordinatePartition trivial(const SftSystem& sys) {
    return CoordinatePartition(sys, {{Labeling::constant(sys), 0}});
  }

  const SftSystem& system() const noexcept { return system_; }
  const std::vector<PartitionComponent>& components() const noexcept { return parts_; }

  Coord window_begin() const {
    Coord lo = parts_.front().start;
    for (const auto& c : parts_) lo = std::min(lo, c.start);
    return lo;
  }
  Coord window_end() const {
    Coord hi = parts_.front().end();
    for (const auto& c : parts_) hi = std::max(hi, c.end());
    return hi;
  }
  Coord width() const { return window_end() - window_begin() + 1; }

  CoordinatePartition join(const CoordinatePartition& other) const {
    if (!(system_ == other.system_)) throw InvalidArgument("joining partitions of different systems");
    auto parts = parts_;
    parts.insert(parts.end(), other.parts_.begin(), other.parts_.end());
    return CoordinatePartition(system_, std::move(parts));
  }

  /// T^{-k}P: the label of x is the label of T^k x, read k coordinates later.
  CoordinatePartition shifted(Coord k) const {
    auto parts = parts_;
    for (auto& c : parts) c.start += k;
    return CoordinatePartition(system_, std::move(parts));
  }

  /// Label tuple of the word `w` occupying coordinates [w_start, w_start + |w|).
  std::vector<int> label_of(const Word& w, Coord w_start) const {
    std::vector<int> out;
    out.reserve(parts_.size());
    for (const auto& c : parts_) {
      Coord off = c.start - w_start;
      if (off < 0 || off + c.labeling->width() > static_cast<Coord>(w.size()))
        throw InvalidArgument("word does not cover the partition window");
      long long code = 0;
      for (int i = 0; i < c.labeling->width(); ++i)
        code = code * system_.alphabet_size() + w[static_cast<std::size_t>(off + i)];
      out.push_back(c.labeling->label_of_code(code));
    }
    return out;
  }

  std::vector<int> label_of(const Point& x) const {
    return label_of(x.window(window_begin(), width()), window_begin());
  }

  /// Number of distinct labels over allowed words of the window.
  int num_labels() const {
    std::set<std::vector<int>> seen;
    for_each_window_word([&](const Word& w) { seen.insert(label_of(w, window_begin())); });
    return static_cast<int>(seen.size());
  }

  /// Injective on allowed words of the window (atoms are cylinders).
  bool is_fine() const {
    if (parts_.size() == 1) return parts_.front().labeling->is_fine() && width() == parts_.front().labeling->width();
    std::set<std::vector<int>> seen;
    std::size_t words = 0;
    for_each_window_word([&](const Word& w) {
      ++words;
      seen.insert(label_of(w, window_begin()));
    });
    return seen.size() == words;
  }

  /// True iff every atom of *this lies inside an atom of `coarser`.
  bool refines(const CoordinatePartition& coarser) const {
    const Coord lo = std::min(window_begin(), coarser.window_begin());
    const Coord hi = std::max(window_end(), coarser.window_end());
    std::map<std::vector<int>, std::vector<int>> factor;
    bool ok = true;
    for_each_word(lo, hi, [&](const Word& w) {
      if (!ok) return;
      auto fine_label = label_of(w, lo);
      auto coarse_label = coarser.label_of(w, lo);
      auto [it, inserted] = factor.emplace(std::move(fine_label), coarse_label);
      if (!inserted && it->second != coarse_label) ok = false;
    });
    return ok;
  }

  /// Calls f on every allowed word of [lo, hi].
  template <typename F>
  void for_each_word(Coord lo, Coord hi, F&& f) const {
    const int len = static_cast<int>(hi - lo + 1);
    if (len > 26) throw InvalidArgument("window too wide to enumerate");
    Word w(static_cast<std::size_t>(len));
    const int n = system_.alphabet_size();
    auto rec = [&](auto&& self, int pos) -> void {
      if (pos == len) {
        f(static_cast<const Word&>(w));
        return;
      }
      for (Symbol s = 0; s < n; ++s) {
        if (pos > 0 && !system_.allowed(w[pos - 1], s)) continue;
        w[pos] = s;
        self(self, pos + 1);
      }
    };
    rec(rec, 0);
  }

  template <typename F>
  void for_each_window_word(F&& f) const {
    for_each_word(window_begin(), window_end(), std::forward<F>(f));
  }

 private:
  void canonicalize() {
    if (parts_.empty()) throw InvalidArgument("partition needs at least one component");
    std::sort(parts_.begin(), parts_.end(), [](const auto& a, const auto& b) {
      if (a.start != b.start) return a.start < b.start;
      return a.labeling->key() < b.labeling->key();
    });
    parts_.erase(std::unique(parts_.begin(), parts_.end(),
                             [](const auto& a, const auto& b) {
                               return a.start == b.start && a.labeling->key() == b.labeling->key();
                             }),
                 parts_.end());
  }

  SftSystem system_;
  std::vector<PartitionComponent> parts_;
};

}  // namespace sftlab
