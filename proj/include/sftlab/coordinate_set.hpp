#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "sftlab/shift_space.hpp"

namespace sftlab {

/// A set of integer coordinates: finitely many points plus optional rays
/// (-inf, left_to] and [right_from, +inf). Kept in a canonical form: points
/// never touch a ray and rays never overlap.
class CoordinateSet {
 public:
  CoordinateSet() = default;

  static CoordinateSet points(std::vector<Coord> pts) {
    CoordinateSet s;
    s.points_ = std::move(pts);
    s.normalize();
    return s;
  }
  static CoordinateSet interval(Coord a, Coord b) {
    CoordinateSet s;
    for (Coord c = a; c <= b; ++c) s.points_.push_back(c);
    s.normalize();
    return s;
  }
  static CoordinateSet right_ray(Coord from) {
    CoordinateSet s;
    s.right_from_ = from;
    return s;
  }
  static CoordinateSet left_ray(Coord to) {
    CoordinateSet s;
    s.left_to_ = to;
    return s;
  }
  static CoordinateSet all() {
    CoordinateSet s;
    s.left_to_ = -1;
    s.right_from_ = 0;
    s.normalize();
    return s;
  }

  const std::vector<Coord>& finite_points() const noexcept { return points_; }
  const std::optional<Coord>& right_from() const noexcept { return right_from_; }
  const std::optional<Coord>& left_to() const noexcept { return left_to_; }

  bool empty() const { return points_.empty() && !right_from_ && !left_to_; }
  bool is_finite() const { return !right_from_ && !left_to_; }
  bool is_everything() const { return right_from_ && left_to_ && *left_to_ + 1 >= *right_from_; }

  bool contains(Coord c) const {
    if (right_from_ && c >= *right_from_) return true;
    if (left_to_ && c <= *left_to_) return true;
    return std::binary_search(points_.begin(), points_.end(), c);
  }

  bool contains_interval(Coord a, Coord b) const {
    for (Coord c = a; c <= b; ++c) {
      if (right_from_ && c >= *right_from_) return true;
      if (!contains(c)) return false;
    }
    return true;
  }

  CoordinateSet& insert(Coord c) {
    points_.push_back(c);
    normalize();
    return *this;
  }
  CoordinateSet& insert_interval(Coord a, Coord b) {
    for (Coord c = a; c <= b; ++c) points_.push_back(c);
    normalize();
    return *this;
  }
  CoordinateSet& insert_right_ray(Coord from) {
    right_from_ = right_from_ ? std::min(*right_from_, from) : from;
    normalize();
    return *this;
  }
  CoordinateSet& insert_left_ray(Coord to) {
    left_to_ = left_to_ ? std::max(*left_to_, to) : to;
    normalize();
    return *this;
  }

  CoordinateSet& unite(const CoordinateSet& o) {
    points_.insert(points_.end(), o.points_.begin(), o.points_.end());
    if (o.right_from_) right_from_ = right_from_ ? std::min(*right_from_, *o.right_from_) : *o.right_from_;
    if (o.left_to_) left_to_ = left_to_ ? std::max(*left_to_, *o.left_to_) : *o.left_to_;
    normalize();
    return *this;
  }

  CoordinateSet shifted(Coord k) const {
    CoordinateSet s = *this;
    for (Coord& c : s.points_) c += k;
    if (s.right_from_) *s.right_from_ += k;
    if (s.left_to_) *s.left_to_ += k;
    return s;
  }

  /// Largest element strictly below c.
  std::optional<Coord> max_below(Coord c) const {
    std::optional<Coord> best;
    if (right_from_ && *right_from_ < c) best = c - 1;
    if (best) return best;
    auto it = std::lower_bound(points_.begin(), points_.end(), c);
    if (it != points_.begin()) best = *std::prev(it);
    if (left_to_) {
      Coord l = std::min(*left_to_, c - 1);
      if (!best || l > *best) best = l;
    }
    return best;
  }

  /// Smallest element strictly above c.
  std::optional<Coord> min_above(Coord c) const {
    std::optional<Coord> best;
    if (left_to_ && *left_to_ > c) best = c + 1;
    if (best) return best;
    auto it = std::upper_bound(points_.begin(), points_.end(), c);
    if (it != points_.end()) best = *it;
    if (right_from_) {
      Coord r = std::max(*right_from_, c + 1);
      if (!best || r < *best) best = r;
    }
    return best;
  }

  /// Elements inside [a, b].
  std::vector<Coord> within(Coord a, Coord b) const {
    std::vector<Coord> out;
    for (Coord c = a; c <= b; ++c)
      if (contains(c)) out.push_back(c);
    return out;
  }

  std::string to_string() const {
    std::string s = "{";
    if (left_to_) s += "(-inf," + std::to_string(*left_to_) + "] ";
    for (Coord c : points_) s += std::to_string(c) + " ";
    if (right_from_) s += "[" + std::to_string(*right_from_) + ",+inf)";
    return s + "}";
  }

  friend bool operator==(const CoordinateSet&, const CoordinateSet&) = default;

 private:
  void normalize() {
    std::sort(points_.begin(), points_.end());
    points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
    bool changed = true;
    while (changed) {
      changed = false;
      if (right_from_) {
        while (!points_.empty() && points_.back() >= *right_from_ - 1) {
          right_from_ = std::min(*right_from_, points_.back());
          points_.pop_back();
          changed = true;
        }
      }
      if (left_to_) {
        while (!points_.empty() && points_.front() <= *left_to_ + 1) {
          left_to_ = std::max(*left_to_, points_.front());
          points_.erase(points_.begin());
          changed = true;
        }
      }
    }
    if (right_from_ && left_to_ && *left_to_ + 1 >= *right_from_) {
      // Whole line: pin a canonical representation.
      left_to_ = -1;
      right_from_ = 0;
      points_.clear();
    }
  }

  std::vector<Coord> points_;
  std::optional<Coord> right_from_;
  std::optional<Coord> left_to_;
};

}  // namespace sftlab
