#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gipsa {

/// Input failed a documented precondition (dimension mismatch, out-of-range
/// parameter, malformed file).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A matrix with no usable spectrum (all zero) was handed to an estimator.
class DegenerateMatrix : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iteration produced non-finite values or an exploding objective.
class NumericalDivergence : public std::runtime_error {
 public:
  NumericalDivergence(std::int64_t iteration, const std::string& what);

  std::int64_t iteration() const noexcept { return iteration_; }

 private:
  std::int64_t iteration_;
};

/// The point passed as a reference solution is not accurate enough.
class StaleSolution : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gipsa
