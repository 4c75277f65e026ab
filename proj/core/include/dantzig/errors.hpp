#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dantzig {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree (vector lengths, block row counts, Haar divisibility).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Some column of XB has (numerically) zero norm, so D is not invertible.
class SingularNormalization : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

class DivisionByZero : public Error {
 public:
  using Error::Error;
};

class RankError : public Error {
 public:
  using Error::Error;
};

class DegenerateScores : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. `row()` is 1-based; 0 means the error is not tied to a row.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t row)
      : Error(row == 0 ? what : "row " + std::to_string(row) + ": " + what), row_(row) {}

  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

class CountError : public Error {
 public:
  using Error::Error;
};

}  // namespace dantzig
