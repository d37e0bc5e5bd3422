#pragma once

#include <stdexcept>
#include <string>

namespace dshell {

// Argument lies outside the domain of a mathematical function (branch cut,
// spectrum of the free operator, Re w <= 0 for Bessel K).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Caller violated a stated precondition (coupling excluded, bad step, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A symbol is not invertible at the requested point; the point is spectral.
class SingularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed user input (decimal strings, complex literals, grid specs).
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace dshell
