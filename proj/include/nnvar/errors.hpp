#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nnvar {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fewer than two points; nearest-neighbor distances are undefined.
class EmptySampleError : public Error {
 public:
  using Error::Error;
};

/// One or more points coincide, so some rho_i would be zero.
class DuplicatePointsError : public Error {
 public:
  using IndexPair = std::pair<std::size_t, std::size_t>;

  explicit DuplicatePointsError(std::vector<IndexPair> pairs);

  const std::vector<IndexPair>& pairs() const noexcept { return pairs_; }

 private:
  std::vector<IndexPair> pairs_;
};

class NonpositiveDistanceError : public Error {
 public:
  using Error::Error;
};

class UnsupportedOrderError : public Error {
 public:
  using Error::Error;
};

class InvalidParamsError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

class UnsupportedQuadratureDimensionError : public Error {
 public:
  using Error::Error;
};

class NegativeArgumentError : public Error {
 public:
  using Error::Error;
};

class BudgetTooSmallError : public Error {
 public:
  using Error::Error;
};

class QuadratureNonconvergenceError : public Error {
 public:
  using Error::Error;
};

class TooFewPointsError : public Error {
 public:
  using Error::Error;
};

class CalibrationBudgetTooSmallError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input: distribution specs, config files, CSV data.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Semantically invalid campaign configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace nnvar
