#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "specrad/complex_mat.hpp"
#include "specrad/entry_laws.hpp"
#include "specrad/profiles.hpp"

namespace specrad {

// Addressing of one realization inside a campaign.  The per-entry stream is
// a pure function of this triple and the entry coordinates, so the matrix is
// identical regardless of fill order or worker count.
struct SeedPath {
  std::uint64_t master_seed = 0;
  std::string experiment_id;
  std::uint64_t trial_index = 0;

  std::uint64_t trial_key() const {
    return rng::trial_key(master_seed, experiment_id, trial_index);
  }
};

struct MatrixSample {
  int n = 0;
  CMat a;
  SeedPath seed_path;
};

// A = (b_ij x_ij) with b_ij = sqrt(s_ij).  Zero-variance positions are
// exactly 0.0 and consume no randomness.
MatrixSample sample(const VarianceProfile& profile, const EntryLaw& law,
                    const SeedPath& seed_path);

// Binary dump: 16-byte header (magic "SRLB", version u32, n u32, flags u32,
// little endian) followed by 2n^2 doubles, re/im interleaved row-major.
// flags bit 0 is set for complex-valued laws.
void write_matrix_dump(std::ostream& os, const MatrixSample& sample, bool law_complex);
CMat read_matrix_dump(std::istream& is);

}  // namespace specrad
