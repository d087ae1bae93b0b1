#include "specrad/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <sstream>

#include "specrad/eig.hpp"
#include "specrad/harness.hpp"
#include "specrad/mde.hpp"
#include "specrad/rng.hpp"
#include "specrad/sampler.hpp"
#include "specrad/theory.hpp"
#include "specrad/trace_moments.hpp"

namespace specrad {

namespace {

// Heavy-tail thresholds fixed by the committed pilot run (500 trials at
// n = 128 and 256, master seed 77, experiment ids "pilot-heavy-128/256"):
// frac(rho <= sigma + 0.5) came out 0.972 / 0.990 and
// frac(opnorm/rho >= 1.3) came out 0.988 / 0.996, with the rho median at
// 1.00 and ratio q05 above 1.9.  Thresholds sit many binomial standard
// errors inside those observations.
constexpr double kHeavyDelta = 0.5;
constexpr double kHeavyMinFrac = 0.90;
constexpr double kHeavyRatioMinFrac = 0.80;

struct Ctx {
  std::ostream& log;
  int threads;
  std::vector<CriterionResult> results;

  void run(int index, const std::string& name,
           const std::function<bool(std::string&)>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    r.index = index;
    r.name = name;
    try {
      r.pass = body(r.detail);
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    char line[512];
    std::snprintf(line, sizeof(line), "[%2d/10] %s  %s  %s  [%.1fs]", index,
                  r.pass ? "PASS" : "FAIL", name.c_str(), r.detail.c_str(), r.seconds);
    log << line << std::endl;
    results.push_back(std::move(r));
  }
};

ExperimentConfig base_config(ExperimentKind kind, const std::string& id, int threads) {
  ExperimentConfig c;
  c.kind = kind;
  c.experiment_id = id;
  c.master_seed = 20260808;
  c.worker_count = threads;
  return c;
}

bool ginibre_ks_criterion(int n, int d, long trials, const std::string& id, int threads,
                          std::string& detail) {
  ExperimentConfig c = base_config(ExperimentKind::DiagBlockExact, id, threads);
  c.profile.kind = "diag-block";
  c.profile.d = d;
  c.n_list = {n};
  c.trials = trials;
  for (int i = 0; i < 20; ++i) c.a_grid.push_back(0.55 + 0.07 * i);
  const ExperimentResult res = run(c);
  const double ks = res.summary["per_n"][0]["ks"].get<double>();
  char buf[128];
  std::snprintf(buf, sizeof(buf), "ks=%.4f (<=0.035)", ks);
  detail = buf;
  return res.summary["flagged_fraction"].get<double>() <= 0.01 && ks <= 0.035;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(std::ostream& log, int threads, int only) {
  Ctx ctx{log, threads, {}};
  auto want = [&](int i) { return only == 0 || only == i; };

  if (want(1))
    ctx.run(1, "exact-ginibre-radius-law", [&](std::string& detail) {
      return ginibre_ks_criterion(16, 16, 4000, "acc1-ginibre-exact", threads, detail);
    });

  if (want(2))
    ctx.run(2, "block-product-radius-law", [&](std::string& detail) {
      return ginibre_ks_criterion(16, 4, 4000, "acc2-block-product", threads, detail);
    });

  if (want(3))
    ctx.run(3, "nilpotent-exactness", [&](std::string& detail) {
      const VarianceProfile prof = make_nilpotent_superdiag(64);
      const std::vector<std::string> laws = {"real-gaussian", "complex-gaussian", "rademacher",
                                             "laplace",       "pareto:2.5",       "bernoulli:0.05"};
      double worst = 0.0;
      for (const std::string& lname : laws) {
        const EntryLaw law = EntryLaw::parse(lname);
        for (long t = 0; t < 50; ++t) {
          const MatrixSample ms = sample(prof, law, {3, "acc3-nilpotent-" + lname, static_cast<std::uint64_t>(t)});
          const EigResult r = eigenvalues(ms.a);
          if (!r.converged) return false;
          for (const cplx& v : r.values) worst = std::max(worst, std::abs(v));
        }
      }
      char buf[128];
      std::snprintf(buf, sizeof(buf), "max |eigenvalue| = %.2e (<=1e-7), 6 laws x 50 trials", worst);
      detail = buf;
      return worst <= 1e-7;
    });

  if (want(4))
    ctx.run(4, "suppressed-fluctuations-product", [&](std::string& detail) {
      ExperimentConfig c = base_config(ExperimentKind::ProductLinearization, "acc4-product", threads);
      c.profile.kind = "product-linearization";
      c.profile.q = 6;
      c.n_list = {60};
      c.trials = 2000;
      c.t_grid = {1.0, 2.0, 4.0};
      const ExperimentResult res = run(c);
      const auto& jn = res.summary["per_n"][0];
      const double max_rel = jn["identity"]["max_rel_err"].get<double>();
      std::ostringstream os;
      os << "bound pass at t={1,2,4}: " << (jn["pass"].get<bool>() ? "yes" : "no")
         << ", identity max rel err = " << max_rel << " (<=1e-6)";
      detail = os.str();
      return res.pass;
    });

  if (want(5))
    ctx.run(5, "trace-moment-oracle", [&](std::string& detail) {
      bool ok = true;
      std::ostringstream os;
      const VarianceProfile h3 = make_homogeneous(3);
      for (const std::string& lname : {std::string("complex-gaussian"), std::string("rademacher")}) {
        const EntryLaw law = EntryLaw::parse(lname);
        const MomentEstimate ex = trace_moment_exact(h3, law, 2);
        const MomentEstimate mc = trace_moment_mc(h3, law, 2, 5000, {5, "acc5-" + lname, 0});
        const bool agree = std::abs(ex.value - mc.value) <= 4.0 * mc.std_error;
        ok = ok && agree;
        os << lname << ": exact=" << ex.value << " mc=" << mc.value << "+-" << mc.std_error << "; ";
      }
      // p = 1 must reproduce the entrywise variance total exactly.
      const MomentEstimate p1 = trace_moment_exact(h3, EntryLaw::complex_gaussian(), 1);
      ok = ok && std::abs(p1.value - 3.0) <= 1e-12;
      // Small-power envelope at n = 32.
      const VarianceProfile h32 = make_homogeneous(32);
      const MomentEstimate p3 =
          trace_moment_mc(h32, EntryLaw::complex_gaussian(), 3, 400, {5, "acc5-envelope", 0});
      const bool envelope = p3.value >= 32.0 && p3.value <= 128.0;
      os << "p3(n=32)=" << p3.value << " in [32,128]: " << (envelope ? "yes" : "no");
      detail = os.str();
      return ok && envelope;
    });

  if (want(6))
    ctx.run(6, "long-time-control-chain", [&](std::string& detail) {
      std::vector<VarianceProfile> profiles;
      for (int n : {1, 4, 17, 100}) profiles.push_back(make_homogeneous(n));
      profiles.push_back(make_block_band(3, 1, 1.0));
      profiles.push_back(make_block_band(4, 2, 1.0 / 6.0));
      profiles.push_back(make_block_band(5, 3, 0.1));
      profiles.push_back(make_periodic_band(8, 3, 1.0 / 3.0));
      profiles.push_back(make_periodic_band(16, 5, 0.2));
      profiles.push_back(make_periodic_band(9, 1, 1.0));
      profiles.push_back(make_hetero_block(2, 1.0, 1.0));
      profiles.push_back(make_hetero_block(4, 4.0, 1.0));
      profiles.push_back(make_hetero_block(1, 2.0, 3.0));
      profiles.push_back(make_hetero_block(3, 0.5, 2.0));
      profiles.push_back(make_product_linearization(2, 1));
      profiles.push_back(make_product_linearization(3, 2));
      profiles.push_back(make_product_linearization(1, 2));
      profiles.push_back(make_product_linearization(5, 3));
      for (int n : {2, 4, 8}) profiles.push_back(make_nilpotent_superdiag(n));
      profiles.push_back(make_diag_block_ginibre(4, 2));
      profiles.push_back(make_diag_block_ginibre(6, 2));
      profiles.push_back(make_diag_block_ginibre(16, 16));
      profiles.push_back(make_diag_block_ginibre(12, 3));
      profiles.push_back(make_perturbed_regular(16, 0.5, 0.5, 1.0));
      profiles.push_back(make_perturbed_regular(16, 0.5, 0.5, 0.0));
      profiles.push_back(make_perturbed_regular(64, 0.5, 0.25, 2.0));
      profiles.push_back(make_perturbed_regular(81, 0.4, 0.3, 1.5));
      bool chain_ok = true;
      for (const VarianceProfile& p : profiles) {
        const ProfileParams pp = params(p, 8);
        const double tol_hat = 1e-9 * std::max(1.0, pp.ltc_sigma_hat);
        const double tol_sig = 1e-9 * std::max(1.0, pp.sigma);
        if (!(std::sqrt(pp.rho_s) <= pp.ltc_sigma_hat + tol_hat &&
              pp.ltc_sigma_hat <= pp.sigma + tol_sig))
          chain_ok = false;
      }
      const ProfileParams hb = params(make_hetero_block(4, 4.0, 1.0), 8);
      const bool hetero_ok = std::abs(hb.ltc_sigma_hat - 2.0) <= 1e-9;
      char buf[160];
      std::snprintf(buf, sizeof(buf),
                    "%zu profiles, chain sqrt(rho_S)<=sigma_hat<=sigma: %s; hetero sigma_hat=%.12f",
                    profiles.size(), chain_ok ? "all" : "VIOLATED", hb.ltc_sigma_hat);
      detail = buf;
      return chain_ok && hetero_ok;
    });

  if (want(7))
    ctx.run(7, "mde-cubic-and-sigma-min", [&](std::string& detail) {
      // Residuals on 10^4 random (z, v).
      rng::CounterRng gen(rng::mix64(7));
      bool resid_ok = true;
      for (int k = 0; k < 10000; ++k) {
        const double zr = 3.0 * (2.0 * gen.next_unit() - 1.0);
        const double zi = 3.0 * (2.0 * gen.next_unit() - 1.0);
        const double vr = 2.0 * (2.0 * gen.next_unit() - 1.0);
        const double vi = 2.0 * (2.0 * gen.next_unit() - 1.0);
        const cplx z(zr, zi), v(vr, vi);
        if (z == cplx(0.0) && v == cplx(0.0)) continue;
        for (const MDESolution& s : solve_cubic(z, v)) {
          const double scale = 1.0 + std::pow(std::abs(s.a), 3.0);
          if (s.residual > 1e-12 * scale) resid_ok = false;
        }
      }
      // Herglotz uniqueness off the edge.
      bool herg_ok = true;
      for (int k = 0; k < 500; ++k) {
        const double r = 1.1 + 1.9 * gen.next_unit();
        const double th = 2.0 * 3.14159265358979323846 * gen.next_unit();
        const cplx z = r * cplx(std::cos(th), std::sin(th));
        const cplx v(0.6 * (gen.next_unit() - 0.5), 0.05 + 0.95 * gen.next_unit());
        const MDESolution s = herglotz_root(z, v);
        if (!(s.a.imag() > 1e-10)) herg_ok = false;
        int positive = 0;
        for (const MDESolution& cand : solve_cubic(z, v))
          if (cand.a.imag() > 1e-10) ++positive;
        if (positive != 1) herg_ok = false;
      }
      // Sufficient-condition implication on a 100x100 grid.
      long violations = 0;
      for (int i = 0; i < 100; ++i) {
        const double tau = 1.01 + (4.0 - 1.01) * i / 99.0;
        for (int j = 0; j < 100; ++j) {
          const double v = -0.33 + 0.66 * j / 99.0;
          if (tau - 1.0 - v * v > 9.0 * std::pow(std::abs(v), 2.0 / 3.0)) {
            if (!support_indicator(cplx(std::sqrt(tau), 0.0), v)) ++violations;
          }
        }
      }
      // Empirical sigma_min floor at |z| = 1.5, n = 200.
      ExperimentConfig c = base_config(ExperimentKind::MdeSanity, "acc7-mde-sigma-min", threads);
      c.profile.kind = "homogeneous";
      c.n_list = {200};
      c.trials = 100;
      c.a_grid = {1.5};
      const ExperimentResult res = run(c);
      const long cnt = res.summary["per_n"][0]["count_ge_bound"].get<long>();
      std::ostringstream os;
      os << "resid:" << (resid_ok ? "ok" : "FAIL") << " herglotz:" << (herg_ok ? "ok" : "FAIL")
         << " grid violations:" << violations << " sigma_min>=bound in " << cnt << "/100 (need 95)";
      detail = os.str();
      return resid_ok && herg_ok && violations == 0 && cnt >= 95;
    });

  if (want(8))
    ctx.run(8, "gumbel-edge-soft", [&](std::string& detail) {
      ExperimentConfig c = base_config(ExperimentKind::GumbelFit, "acc8-gumbel", threads);
      c.profile.kind = "homogeneous";
      c.n_list = {1024};
      c.trials = 1000;
      const ExperimentResult res = run(c);
      const auto& jn = res.summary["per_n"][0];
      char buf[160];
      std::snprintf(buf, sizeof(buf), "median G = %.4f (target %.4f +- 0.35), ks=%.4f (report-only)",
                    jn["median_g"].get<double>(), 0.36651292058166435, jn["ks_gumbel"].get<double>());
      detail = buf;
      return res.pass;
    });

  if (want(9))
    ctx.run(9, "heavy-tail-boundedness", [&](std::string& detail) {
      ExperimentConfig c = base_config(ExperimentKind::HeavyTailCompare, "acc9-heavy", threads);
      c.profile.kind = "homogeneous";
      c.law = "pareto:2.5";
      c.n_list = {256};
      c.trials = 200;
      c.t_grid = {kHeavyDelta};
      const ExperimentResult res = run(c);
      const auto& jn = res.summary["per_n"][0];
      const double fb = jn["frac_rho_bounded"].get<double>();
      const double fr = jn["frac_ratio_ge_threshold"].get<double>();
      char buf[200];
      std::snprintf(buf, sizeof(buf),
                    "frac(rho<=sigma+%.2f)=%.3f (need >=%.2f), frac(opnorm/rho>=1.3)=%.3f (need >=%.2f)",
                    kHeavyDelta, fb, kHeavyMinFrac, fr, kHeavyRatioMinFrac);
      detail = buf;
      return res.pass && fb >= kHeavyMinFrac && fr >= kHeavyRatioMinFrac;
    });

  if (want(10))
    ctx.run(10, "bitwise-reproducibility", [&](std::string& detail) {
      ExperimentConfig c = base_config(ExperimentKind::DiagBlockExact, "acc10-repro", 1);
      c.profile.kind = "diag-block";
      c.profile.d = 4;
      c.n_list = {16};
      c.trials = 200;
      c.a_grid = {0.8, 1.0, 1.2};
      c.worker_count = 1;
      const ExperimentResult r1 = run(c);
      const ExperimentResult r2 = run(c);
      ExperimentConfig c4 = c;
      c4.worker_count = 4;
      const ExperimentResult r4 = run(c4);
      const bool same_twice = r1.results_csv() == r2.results_csv();
      auto strip = [](nlohmann::json j) {
        j.erase("wall_clock_s");
        return j;
      };
      const bool same_workers = r1.results_csv() == r4.results_csv() &&
                                strip(r1.summary) == strip(r4.summary);
      detail = std::string("rerun identical: ") + (same_twice ? "yes" : "NO") +
               ", workers 1 vs 4 identical: " + (same_workers ? "yes" : "NO");
      return same_twice && same_workers;
    });

  return ctx.results;
}

bool all_passed(const std::vector<CriterionResult>& results) {
  for (const CriterionResult& r : results)
    if (!r.pass) return false;
  return !results.empty();
}

}  // namespace specrad
