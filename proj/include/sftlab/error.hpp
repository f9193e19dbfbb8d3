#pragma once

#include <stdexcept>
#include <string>

namespace sftlab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid system, measure, partition or point; also malformed input files.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The spacing search ran past its cap without certifying the bound.
class SearchExhausted : public Error {
 public:
  SearchExhausted(int level, int k_max)
      : Error("SearchExhausted: no admissible spacing <= " + std::to_string(k_max) +
              " at level " + std::to_string(level)),
        level_(level),
        k_max_(k_max) {}
  int level() const noexcept { return level_; }
  int k_max() const noexcept { return k_max_; }

 private:
  int level_;
  int k_max_;
};

/// An entropy bracket straddles zero at the deepest depth tried.
class Inconclusive : public Error {
 public:
  using Error::Error;
};

}  // namespace sftlab
