#pragma once

#include <stdexcept>
#include <string>

namespace cockedhat {

/// Input that is geometrically degenerate (coincident points, collinear
/// triples, antipodal tangent points, ...) within the predicate tolerance.
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A model or scenario that fails a required validation (pairwise
/// intersection, general position, counterexample property).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller violated an operation precondition (wrong site count, zero trials).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace cockedhat
