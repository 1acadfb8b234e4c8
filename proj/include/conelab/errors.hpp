#pragma once

#include <stdexcept>
#include <string>

namespace conelab {

/// Precondition violated by the caller (shape, range, trace).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input is well-formed but numerically degenerate (e.g. rank-deficient).
class DegenerateInputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalUnderflowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A search would exceed its fixed size limits; never silently truncated.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two results that must be mutually exclusive were both produced.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace conelab
