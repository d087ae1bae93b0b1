#include "specrad/sampler.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace specrad {

static_assert(std::endian::native == std::endian::little,
              "matrix dump writer assumes a little-endian host");

MatrixSample sample(const VarianceProfile& profile, const EntryLaw& law,
                    const SeedPath& seed_path) {
  const int n = profile.n;
  MatrixSample out;
  out.n = n;
  out.a = CMat(n, n);
  out.seed_path = seed_path;
  const std::uint64_t tkey = seed_path.trial_key();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double s = profile(i, j);
      if (s == 0.0) continue;  // exact zero pattern, no stream consumed
      rng::CounterRng r(rng::entry_key(tkey, i, j));
      out.a(i, j) = std::sqrt(s) * draw(law, r);
    }
  }
  return out;
}

namespace {
constexpr char kMagic[4] = {'S', 'R', 'L', 'B'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

void write_matrix_dump(std::ostream& os, const MatrixSample& sample, bool law_complex) {
  const std::uint32_t n = static_cast<std::uint32_t>(sample.n);
  const std::uint32_t flags = law_complex ? 1u : 0u;
  os.write(kMagic, 4);
  os.write(reinterpret_cast<const char*>(&kVersion), 4);
  os.write(reinterpret_cast<const char*>(&n), 4);
  os.write(reinterpret_cast<const char*>(&flags), 4);
  for (int i = 0; i < sample.n; ++i) {
    for (int j = 0; j < sample.n; ++j) {
      const double re = sample.a(i, j).real();
      const double im = sample.a(i, j).imag();
      os.write(reinterpret_cast<const char*>(&re), 8);
      os.write(reinterpret_cast<const char*>(&im), 8);
    }
  }
}

CMat read_matrix_dump(std::istream& is) {
  char magic[4];
  std::uint32_t version = 0, n = 0, flags = 0;
  is.read(magic, 4);
  is.read(reinterpret_cast<char*>(&version), 4);
  is.read(reinterpret_cast<char*>(&n), 4);
  is.read(reinterpret_cast<char*>(&flags), 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw std::invalid_argument("matrix dump: bad magic");
  if (version != kVersion) throw std::invalid_argument("matrix dump: unsupported version");
  CMat a(static_cast<int>(n), static_cast<int>(n));
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) {
      double re = 0.0, im = 0.0;
      is.read(reinterpret_cast<char*>(&re), 8);
      is.read(reinterpret_cast<char*>(&im), 8);
      a(static_cast<int>(i), static_cast<int>(j)) = {re, im};
    }
  }
  if (!is) throw std::invalid_argument("matrix dump: truncated payload");
  return a;
}

}  // namespace specrad
