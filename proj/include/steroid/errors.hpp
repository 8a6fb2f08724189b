#pragma once

#include <stdexcept>
#include <string>

namespace steroid {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dimension or length mismatch: non-square reshape, wrong vector length,
/// odd order where an even one is required, and similar structural problems.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A size or index falls outside the representable range (e.g. n^d overflows).
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Input violates symmetry beyond tolerance, or two entries of the same
/// permutation orbit were given conflicting values.
class SymmetryError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values, or an iterative kernel failed to converge.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input. Carries the 1-based line number when known.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what, long line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  long line() const noexcept { return line_; }

 private:
  long line_ = 0;
};

}  // namespace steroid
