#pragma once

#include <stdexcept>

namespace specrad {

// Numeric failures, as opposed to usage errors (std::invalid_argument).
// The CLI maps usage errors to exit 1 and these to exit 2.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Eigen iteration budget exhausted; the partial spectrum is still available
// on the result carrying converged = false.
struct NonConvergence : NumericError {
  using NumericError::NumericError;
};

// Two cubic roots stayed in the upper half plane after continuity tracking.
struct BranchAmbiguity : NumericError {
  using NumericError::NumericError;
};

// The edge-recentring constant log n - 2 log log n - log 2pi is not positive;
// the expansion is meaningless at this dimension.
struct GammaNonpositive : NumericError {
  using NumericError::NumericError;
};

}  // namespace specrad
