#pragma once

#include <stdexcept>
#include <string>

namespace geim {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inputs live on different grids, or vector/matrix sizes disagree.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Input is valid structurally but numerically degenerate (zero functional,
/// all-zero snapshot set, nonpositive sequence entries, ...).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// Every dictionary functional annihilates the current residual.
class UnisolvenceError : public Error {
 public:
  UnisolvenceError(std::size_t step, const std::string& what)
      : Error(what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

class RankDeficientError : public Error {
 public:
  using Error::Error;
};

class UnsupportedModeError : public Error {
 public:
  using Error::Error;
};

/// A bound formula needs sequence entries beyond what was measured.
class InsufficientHistoryError : public Error {
 public:
  using Error::Error;
};

}  // namespace geim
