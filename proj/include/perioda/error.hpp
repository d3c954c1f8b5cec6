#pragma once

#include <stdexcept>
#include <string>

namespace perioda {

/// Malformed or out-of-contract input (CLI exit code 2).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numeric evaluation too close to a pole.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A check that the underlying theorem guarantees has failed; always an
/// implementation bug (CLI exit code 3).
class TheoremViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Request outside the supported case, e.g. non-coprime dilations handed to
/// the full reconstruction.
class Unsupported : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace perioda
