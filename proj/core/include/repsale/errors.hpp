#pragma once

#include <stdexcept>
#include <string>

namespace repsale {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument lies outside the operation's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// The revenue curve is not strictly concave.
class RegularityError : public Error {
 public:
  using Error::Error;
};

// A posterior is requested after a zero-probability observation.
class DegeneratePosteriorError : public Error {
 public:
  explicit DegeneratePosteriorError(const std::string& branch)
      : Error("degenerate posterior: " + branch + " event has zero mass"), branch_(branch) {}
  const std::string& branch() const noexcept { return branch_; }

 private:
  std::string branch_;
};

// No sophisticated-focused continuation implements the requested threshold.
class NotImplementableError : public Error {
 public:
  using Error::Error;
};

// Two routes to the same quantity disagree.
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

// A closed form is evaluated outside the branch where it holds.
class OutOfBranchError : public Error {
 public:
  using Error::Error;
};

// A strategy profile reaches a state its case table does not cover.
class UnreachableStateError : public Error {
 public:
  using Error::Error;
};

// A solver invariant failed; indicates a bug rather than bad input.
class InternalError : public Error {
 public:
  using Error::Error;
};

// Malformed configuration, model file or table.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace repsale
