#include "specrad/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "specrad/eig.hpp"

namespace specrad {

namespace {

VarianceProfile blank(int n, std::string label) {
  if (n < 1) throw std::invalid_argument("profile: n must be >= 1");
  if (n > kMaxProfileDim) throw std::invalid_argument("profile: n exceeds configured cap");
  VarianceProfile p;
  p.n = n;
  p.s.assign(static_cast<std::size_t>(n) * n, 0.0);
  p.label = std::move(label);
  return p;
}

void require_nonneg(double v, const char* what) {
  if (!(v >= 0.0) || !std::isfinite(v))
    throw std::invalid_argument(std::string("profile: ") + what + " must be finite and >= 0");
}

}  // namespace

std::vector<double> VarianceProfile::row_sums() const {
  std::vector<double> r(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) acc += (*this)(i, j);
    r[i] = acc;
  }
  return r;
}

std::vector<double> VarianceProfile::col_sums() const {
  std::vector<double> c(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) c[j] += (*this)(i, j);
  return c;
}

std::string VarianceProfile::to_json() const {
  nlohmann::json j;
  j["label"] = label;
  j["n"] = n;
  j["format"] = "dense";
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < n; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 0; k < n; ++k) row.push_back((*this)(i, k));
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j.dump();
}

VarianceProfile VarianceProfile::from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  if (j.at("format").get<std::string>() != "dense")
    throw std::invalid_argument("profile json: unsupported format");
  VarianceProfile p = blank(j.at("n").get<int>(), j.at("label").get<std::string>());
  const auto& rows = j.at("rows");
  if (static_cast<int>(rows.size()) != p.n) throw std::invalid_argument("profile json: row count mismatch");
  for (int i = 0; i < p.n; ++i) {
    if (static_cast<int>(rows[i].size()) != p.n)
      throw std::invalid_argument("profile json: column count mismatch");
    for (int k = 0; k < p.n; ++k) p.at(i, k) = rows[i][k].get<double>();
  }
  return p;
}

VarianceProfile make_homogeneous(int n) {
  VarianceProfile p = blank(n, "homogeneous");
  const double v = 1.0 / n;
  std::fill(p.s.begin(), p.s.end(), v);
  return p;
}

VarianceProfile make_block_band(int m, int b, double v) {
  if (m < 3) throw std::invalid_argument("block band: need m >= 3, the corner-wrap pattern degenerates");
  if (b < 1) throw std::invalid_argument("block band: block size must be >= 1");
  require_nonneg(v, "variance");
  VarianceProfile p = blank(m * b, "block-band");
  for (int bi = 0; bi < m; ++bi) {
    for (int bj = 0; bj < m; ++bj) {
      const int d = ((bj - bi) % m + m) % m;
      if (d != 0 && d != 1 && d != m - 1) continue;
      for (int i = 0; i < b; ++i)
        for (int j = 0; j < b; ++j) p.at(bi * b + i, bj * b + j) = v;
    }
  }
  return p;
}

VarianceProfile make_periodic_band(int n, int d, double v) {
  if (d % 2 == 0) throw std::invalid_argument("periodic band: bandwidth must be odd");
  if (d < 1 || d > n) throw std::invalid_argument("periodic band: need 1 <= d <= n");
  require_nonneg(v, "variance");
  VarianceProfile p = blank(n, "periodic-band");
  const int half = (d - 1) / 2;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int dist = std::abs(i - j);
      if (dist <= half || dist >= n - half) p.at(i, j) = v;
    }
  return p;
}

VarianceProfile make_hetero_block(int half_n, double lambda1, double lambda2) {
  if (half_n < 1) throw std::invalid_argument("hetero block: half_n must be >= 1");
  if (!(lambda1 > 0.0) || !(lambda2 > 0.0))
    throw std::invalid_argument("hetero block: lambdas must be positive");
  VarianceProfile p = blank(2 * half_n, "hetero-block");
  const double top = lambda1 * lambda1 / half_n;
  const double bot = lambda2 * lambda2 / half_n;
  for (int i = 0; i < half_n; ++i)
    for (int j = 0; j < half_n; ++j) {
      p.at(i, half_n + j) = top;
      p.at(half_n + i, j) = bot;
    }
  return p;
}

VarianceProfile make_product_linearization(int p_blocks, int q) {
  if (p_blocks < 1 || q < 1)
    throw std::invalid_argument("product linearization: p and q must be >= 1");
  VarianceProfile p = blank(p_blocks * q, "product-linearization");
  const double v = 1.0 / q;
  for (int bi = 0; bi < p_blocks; ++bi) {
    const int bj = (bi + 1) % p_blocks;
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < q; ++j) p.at(bi * q + i, bj * q + j) = v;
  }
  return p;
}

VarianceProfile make_nilpotent_superdiag(int n) {
  if (n < 2) throw std::invalid_argument("nilpotent profile: n must be >= 2");
  VarianceProfile p = blank(n, "nilpotent");
  for (int i = 0; i + 1 < n; ++i) p.at(i, i + 1) = 1.0;
  return p;
}

VarianceProfile make_diag_block_ginibre(int n, int d) {
  if (d < 1 || n % d != 0)
    throw std::invalid_argument("diag block: block size must divide n");
  VarianceProfile p = blank(n, "diag-block");
  const double v = 1.0 / d;
  for (int blk = 0; blk < n / d; ++blk)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) p.at(blk * d + i, blk * d + j) = v;
  return p;
}

VarianceProfile make_perturbed_regular(int n, double c_exp, double d_exp, double big_d) {
  if (!(c_exp > 0.0 && c_exp < 1.0))
    throw std::invalid_argument("perturbed regular: c_exp must lie in (0,1)");
  if (!(d_exp > 0.0 && d_exp <= c_exp))
    throw std::invalid_argument("perturbed regular: d_exp must lie in (0,c_exp]");
  if (!(big_d >= 0.0)) throw std::invalid_argument("perturbed regular: D must be >= 0");
  const int r = static_cast<int>(std::floor(std::pow(n, c_exp)));
  if (r < 1) throw std::invalid_argument("perturbed regular: floor(n^c_exp) must be >= 1");
  VarianceProfile p = blank(n, "perturbed-regular");
  // Circulant r-regular digraph: edges i -> i+1, ..., i+r (mod n).
  const double base = 1.0 / r;
  for (int i = 0; i < n; ++i)
    for (int k = 1; k <= r; ++k) p.at(i, (i + k) % n) += base;
  // Perturbation: floor(n^d_exp) entries of D*n^(-c_exp) on row 0, lowest
  // available off-diagonal columns.
  const int cnt = static_cast<int>(std::floor(std::pow(n, d_exp)));
  if (cnt > n - 1)
    throw std::invalid_argument("perturbed regular: perturbation entries cannot avoid the diagonal");
  if (big_d > 0.0) {
    const double lam = big_d * std::pow(n, -c_exp);
    for (int k = 1; k <= cnt; ++k) p.at(0, k) += lam;
  }
  return p;
}

ProfileParams params(const VarianceProfile& profile, int K) {
  if (K < 1) throw std::invalid_argument("params: K must be >= 1");
  const int n = profile.n;
  ProfileParams out;

  double max_s = 0.0, min_s = std::numeric_limits<double>::infinity();
  for (double v : profile.s) {
    max_s = std::max(max_s, v);
    min_s = std::min(min_s, v);
  }
  out.sigma_star = std::sqrt(max_s);
  out.flatness = {n * min_s, n * max_s};

  const auto rs = profile.row_sums();
  const auto cs = profile.col_sums();
  out.sigma = std::sqrt(std::max(*std::max_element(rs.begin(), rs.end()),
                                 *std::max_element(cs.begin(), cs.end())));

  // rho(S) through the eigen kernel.
  CMat sm(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) sm(i, j) = profile(i, j);
  out.rho_s = spectral_radius(sm);

  // Row sums of S^k and (S^t)^k via iterated products against ones.
  std::vector<double> r(n, 1.0), c(n, 1.0), rn(n), cn(n);
  out.ltc_sequence.reserve(K);
  for (int k = 1; k <= K; ++k) {
    std::fill(rn.begin(), rn.end(), 0.0);
    std::fill(cn.begin(), cn.end(), 0.0);
    for (int i = 0; i < n; ++i) {
      const double* si = profile.s.data() + static_cast<std::size_t>(i) * n;
      double acc = 0.0;
      const double ci = c[i];
      for (int j = 0; j < n; ++j) {
        acc += si[j] * r[j];       // (S * r)_i
        cn[j] += si[j] * ci;       // (S^t * c)_j
      }
      rn[i] = acc;
    }
    r.swap(rn);
    c.swap(cn);
    const double mk = std::max(*std::max_element(r.begin(), r.end()),
                               *std::max_element(c.begin(), c.end()));
    out.ltc_sequence.emplace_back(k, mk);
  }

  double hat = std::numeric_limits<double>::infinity();
  for (const auto& [k, mk] : out.ltc_sequence)
    hat = std::min(hat, mk > 0.0 ? std::pow(mk, 0.5 / k) : 0.0);
  out.ltc_sigma_hat = std::isfinite(hat) ? hat : 0.0;

  out.empirical_c = 0.0;
  for (const auto& [k, mk] : out.ltc_sequence) {
    if (mk == 0.0) continue;
    const double denom = std::pow(out.ltc_sigma_hat, 2.0 * k);
    out.empirical_c = std::max(out.empirical_c,
                               denom > 0.0 ? mk / denom : std::numeric_limits<double>::infinity());
  }
  return out;
}

bool is_doubly_stochastic(const VarianceProfile& profile, double tol) {
  for (double v : profile.row_sums())
    if (v > 1.0 + tol) return false;
  for (double v : profile.col_sums())
    if (v > 1.0 + tol) return false;
  return true;
}

}  // namespace specrad
