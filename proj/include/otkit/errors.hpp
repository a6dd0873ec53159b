#pragma once

#include <stdexcept>
#include <string>

namespace otkit {

// Base class for all library errors.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Mismatched point/matrix dimensions.
struct dimension_error : error {
  using error::error;
};

// Index outside its documented range.
struct index_error : error {
  using error::error;
};

// Wrong number of arguments (points, tuple size).
struct arity_error : error {
  using error::error;
};

// Invalid argument value (zero denominator, equal vectors, ...).
struct argument_error : error {
  using error::error;
};

// A predicate could not be evaluated on the given tuple.
struct evaluation_error : error {
  using error::error;
};

// A guard limit refused the operation; the message carries the size estimate.
struct guard_error : error {
  using error::error;
};

}  // namespace otkit
