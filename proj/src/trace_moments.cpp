#include "specrad/trace_moments.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "specrad/complex_mat.hpp"

namespace specrad {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double int_pow(double b, int m) {
  double r = 1.0;
  for (int k = 0; k < m; ++k) r *= b;
  return r;
}

}  // namespace

MomentEstimate trace_moment_exact(const VarianceProfile& profile, const EntryLaw& law, int p) {
  if (p < 1) throw std::invalid_argument("trace moment: p must be >= 1");
  const int n = profile.n;
  double tuples = 1.0;
  for (int k = 0; k < 2 * p; ++k) tuples *= n;
  if (tuples > kTraceExactGuard)
    throw std::invalid_argument("trace moment: n^(2p) exceeds the exact-enumeration guard");

  // Exact mixed-moment table up to total order 2p.
  std::vector<std::vector<double>> mm(2 * p + 1, std::vector<double>(2 * p + 1, 0.0));
  for (int a = 0; a <= 2 * p; ++a)
    for (int b = 0; a + b <= 2 * p; ++b) mm[a][b] = mixed_moment(law, a, b);

  std::vector<double> b_ij(profile.s.size());
  for (std::size_t k = 0; k < profile.s.size(); ++k) b_ij[k] = std::sqrt(profile.s[k]);

  // Free indices: i_0..i_p plus j_1..j_{p-1}; the conjugate path is pinned
  // at j_0 = i_0 and j_p = i_p.
  const int nfree = 2 * p;
  std::vector<int> idx(nfree, 0);
  struct Group {
    int key;
    int cu;
    int cc;
  };
  std::vector<Group> groups;
  groups.reserve(2 * p);

  double total = 0.0;
  while (true) {
    const int* iv = idx.data();        // i_0..i_p at [0..p]
    const int* jv = idx.data() + p + 1;  // j_1..j_{p-1}

    groups.clear();
    auto add_edge = [&](int u, int v, bool conj) {
      const int key = u * n + v;
      for (Group& g : groups) {
        if (g.key == key) {
          (conj ? g.cc : g.cu) += 1;
          return;
        }
      }
      groups.push_back({key, conj ? 0 : 1, conj ? 1 : 0});
    };
    for (int t = 0; t < p; ++t) add_edge(iv[t], iv[t + 1], false);
    for (int t = 0; t < p; ++t) {
      const int u = t == 0 ? iv[0] : jv[t - 1];
      const int v = t == p - 1 ? iv[p] : jv[t];
      add_edge(u, v, true);
    }

    double term = 1.0;
    bool divergent = false;
    for (const Group& g : groups) {
      const double b = b_ij[static_cast<std::size_t>(g.key)];
      if (b == 0.0) {
        term = 0.0;
        break;
      }
      const double m = mm[g.cu][g.cc];
      if (std::isinf(m)) {
        divergent = true;
        continue;
      }
      if (m == 0.0) {
        term = 0.0;
        break;
      }
      term *= int_pow(b, g.cu + g.cc) * m;
    }
    if (divergent && term != 0.0) {
      // A required moment diverges on a positive-variance tuple; the trace
      // moment itself is +infinity.
      return {kInf, 0.0, MomentEstimate::Mode::Exact, p, 0};
    }
    total += term;

    int pos = nfree - 1;
    while (pos >= 0 && ++idx[pos] == n) idx[pos--] = 0;
    if (pos < 0) break;
  }
  return {total, 0.0, MomentEstimate::Mode::Exact, p, 0};
}

MomentEstimate trace_moment_mc(const VarianceProfile& profile, const EntryLaw& law, int p,
                               long trials, const SeedPath& seed_path) {
  if (p < 1) throw std::invalid_argument("trace moment: p must be >= 1");
  if (trials < 2) throw std::invalid_argument("trace moment mc: trials must be >= 2");
  double sum = 0.0, sumsq = 0.0;
  for (long t = 0; t < trials; ++t) {
    SeedPath sp = seed_path;
    sp.trial_index = seed_path.trial_index + static_cast<std::uint64_t>(t);
    const MatrixSample ms = sample(profile, law, sp);
    const double v = mat_power(ms.a, p).frobenius_norm_sq();
    sum += v;
    sumsq += v * v;
  }
  const double mean = sum / trials;
  const double var = std::max(0.0, (sumsq - trials * mean * mean) / (trials - 1));
  return {mean, std::sqrt(var / trials), MomentEstimate::Mode::MonteCarlo, p, trials};
}

}  // namespace specrad
