#pragma once

#include <cstdint>

#include "specrad/entry_laws.hpp"
#include "specrad/profiles.hpp"
#include "specrad/sampler.hpp"

namespace specrad {

// E Tr(A^p (A^*)^p) = E ||A^p||_F^2, the quantity behind the moment-method
// bounds on the spectral radius.
struct MomentEstimate {
  double value = 0.0;      // +infinity marks a genuinely divergent moment
  double std_error = 0.0;  // 0 in exact mode
  enum class Mode { Exact, MonteCarlo } mode = Mode::Exact;
  int p = 0;
  long trials = 0;
};

inline constexpr double kTraceExactGuard = 1e7;  // max n^(2p) tuples

// Exact expectation by enumerating all index tuples of the trace expansion,
// grouping the 2p factors by entry position and multiplying exact mixed
// moments with the sqrt-variance coefficients.  Deliberately brute force:
// this is the independent oracle, so no path-shape classification.
// Throws std::invalid_argument when n^(2p) exceeds the guard.
MomentEstimate trace_moment_exact(const VarianceProfile& profile, const EntryLaw& law, int p);

// Mean and standard error of ||A^p||_F^2 over seeded trials (trials >= 2).
MomentEstimate trace_moment_mc(const VarianceProfile& profile, const EntryLaw& law, int p,
                               long trials, const SeedPath& seed_path);

}  // namespace specrad
