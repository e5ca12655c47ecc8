#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace multiness {

// Base of every error the library throws. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments, malformed data, out-of-range parameters.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// Eigensolver or iterative solver could not produce a trustworthy answer.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

// A truncated eigendecomposition found more than `budget` eigenvalues above the
// threshold. `partial_rank` is the budget that was exhausted, so callers can retry.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::ptrdiff_t partial_rank, const std::string& what)
      : Error(what), partial_rank_(partial_rank) {}
  std::ptrdiff_t partial_rank() const noexcept { return partial_rank_; }

 private:
  std::ptrdiff_t partial_rank_;
};

// Refit design matrix is rank deficient (e.g. duplicated eigenvectors).
class DegenerateDesign : public Error {
 public:
  using Error::Error;
};

class CvFailed : public Error {
 public:
  using Error::Error;
};

class HoldoutTooLarge : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace multiness
