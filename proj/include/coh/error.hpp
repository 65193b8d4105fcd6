#pragma once

#include <cstddef>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace coh {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A distribution or configuration parameter violates its invariant.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Matrix or vector dimensions outside the supported range.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Index or small-sample selector outside its valid range.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// The centered correlation at n = 2 is a two-point law with no density.
class DiscreteLawError : public Error {
 public:
  using Error::Error;
};

/// A level-to-threshold inversion produced s_n <= 0 (or >= 1).
class InfeasibleThresholdError : public Error {
 public:
  using Error::Error;
};

/// A column is constant (centered) or zero (uncentered), so its
/// correlation with anything is undefined.
class DegenerateColumnError : public Error {
 public:
  DegenerateColumnError(std::size_t column, const std::string& what)
      : Error(what + " (column " + std::to_string(column) + ")"),
        column_(column) {}

  /// Zero-based index of the offending column.
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

/// An experiment would exceed the configured flop budget.
class ResourceError : public Error {
 public:
  ResourceError(double estimate, double budget)
      : Error("estimated " + format(estimate) + " flops exceeds budget of " +
              format(budget)),
        estimate_(estimate),
        budget_(budget) {}

  double estimate() const noexcept { return estimate_; }
  double budget() const noexcept { return budget_; }

 private:
  static std::string format(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
  }

  double estimate_;
  double budget_;
};

/// File could not be read or parsed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace coh
