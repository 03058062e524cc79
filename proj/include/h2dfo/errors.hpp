#pragma once

#include <stdexcept>
#include <string>

namespace h2dfo {

/// Raised when a caller breaks an operation's precondition (dimension
/// mismatch, base/center mismatch, invalid index, ...).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The interpolation set does not determine a unique model (singular KKT matrix).
class NotPoisedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point equal to a retained interpolation point was offered as a replacement.
class DuplicatePointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// |sigma| fell below the degeneracy guard of the inverse update.
class DegenerateUpdateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The maintained inverse no longer satisfies W*H = I to tolerance.
class StaleFactorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No candidate of the geometry step produced a usable |sigma|.
class GeometryFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownProblemError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace h2dfo
