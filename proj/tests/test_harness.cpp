#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "specrad/harness.hpp"
#include "specrad/trace_moments.hpp"

using namespace specrad;

namespace {

ExperimentConfig tiny_diag_block() {
  ExperimentConfig c;
  c.kind = ExperimentKind::DiagBlockExact;
  c.profile.kind = "diag-block";
  c.profile.d = 2;
  c.n_list = {8};
  c.trials = 20;
  c.a_grid = {0.8, 1.0, 1.2};
  c.master_seed = 5;
  c.experiment_id = "tiny";
  c.worker_count = 1;
  return c;
}

}  // namespace

TEST_CASE("config json round trip and validation") {
  ExperimentConfig c = tiny_diag_block();
  c.t_grid = {1.0, 2.0};
  const ExperimentConfig back = ExperimentConfig::from_json(c.to_json());
  CHECK(back.to_json() == c.to_json());

  nlohmann::json bad = c.to_json();
  bad["mystery"] = 1;
  CHECK_THROWS_AS(ExperimentConfig::from_json(bad), std::invalid_argument);

  nlohmann::json bad_kind = c.to_json();
  bad_kind["kind"] = "nope";
  CHECK_THROWS_AS(ExperimentConfig::from_json(bad_kind), std::invalid_argument);

  ExperimentConfig no_id = c;
  no_id.experiment_id = "";
  CHECK_THROWS_AS(no_id.validate(), std::invalid_argument);

  ExperimentConfig bad_grid = c;
  bad_grid.t_grid = {2.0, 1.0};
  CHECK_THROWS_AS(bad_grid.validate(), std::invalid_argument);

  ExperimentConfig no_trials = c;
  no_trials.trials = 0;
  CHECK_THROWS_AS(no_trials.validate(), std::invalid_argument);
}

TEST_CASE("runs are bit-reproducible and worker-count independent") {
  const ExperimentConfig c = tiny_diag_block();
  const ExperimentResult r1 = run(c);
  const ExperimentResult r2 = run(c);
  CHECK(r1.results_csv() == r2.results_csv());

  ExperimentConfig c3 = c;
  c3.worker_count = 3;
  const ExperimentResult r3 = run(c3);
  CHECK(r1.results_csv() == r3.results_csv());

  nlohmann::json s1 = r1.summary, s3 = r3.summary;
  s1.erase("wall_clock_s");
  s3.erase("wall_clock_s");
  CHECK(s1 == s3);
}

TEST_CASE("results csv has the pinned header and well-formed rows") {
  const ExperimentResult r = run(tiny_diag_block());
  const std::string csv = r.results_csv();
  CHECK(csv.rfind("experiment_id,kind,n,trial,seed_hi,seed_lo,rho,op_norm,extra1,extra2,flag\n",
                  0) == 0);
  // 20 rows plus header.
  long lines = 0;
  for (char ch : csv)
    if (ch == '\n') ++lines;
  CHECK(lines == 21);
  CHECK(csv.find("tiny,diag_block_exact,8,0,") != std::string::npos);
  CHECK(r.summary["flagged_rows"].get<long>() == 0);
}

TEST_CASE("product linearization identity holds in the harness") {
  ExperimentConfig c;
  c.kind = ExperimentKind::ProductLinearization;
  c.profile.kind = "product-linearization";
  c.profile.q = 2;
  c.n_list = {6};
  c.trials = 30;
  c.t_grid = {1.0, 2.0};
  c.master_seed = 6;
  c.experiment_id = "prod-tiny";
  c.worker_count = 2;
  const ExperimentResult r = run(c);
  const auto& jn = r.summary["per_n"][0];
  CHECK(jn["identity"]["spot_checked"].get<long>() == 30);
  CHECK(jn["identity"]["max_rel_err"].get<double>() <= 1e-6);
  CHECK(jn["p_blocks"].get<int>() == 3);
}

TEST_CASE("moment_check matches the trace oracle module bit for bit") {
  ExperimentConfig c;
  c.kind = ExperimentKind::MomentCheck;
  c.profile.kind = "homogeneous";
  c.n_list = {3};
  c.trials = 50;
  c.t_grid = {1.0, 2.0};
  c.master_seed = 9;
  c.experiment_id = "moments-tiny";
  c.worker_count = 1;
  const ExperimentResult r = run(c);
  for (const auto& jb : r.summary["per_n"][0]["moments"]) {
    const int p = jb["p"].get<int>();
    const MomentEstimate mc = trace_moment_mc(make_homogeneous(3), EntryLaw::complex_gaussian(), p,
                                              50, {9, "moments-tiny", 0});
    CHECK(jb["mc_mean"].get<double>() == doctest::Approx(mc.value).epsilon(1e-13));
    const double exact = jb["exact"].get<double>();
    CHECK(std::abs(exact - mc.value) <= 4.0 * mc.std_error);
  }
  CHECK(r.pass);
}

TEST_CASE("mde sanity experiment reports the bound") {
  ExperimentConfig c;
  c.kind = ExperimentKind::MdeSanity;
  c.profile.kind = "homogeneous";
  c.n_list = {32};
  c.trials = 20;
  c.a_grid = {1.5};
  c.master_seed = 12;
  c.experiment_id = "mde-tiny";
  c.worker_count = 2;
  const ExperimentResult r = run(c);
  const auto& jn = r.summary["per_n"][0];
  CHECK(jn["sigma_min_bound"].get<double>() == doctest::Approx(0.044194173824).epsilon(1e-9));
  CHECK(jn["frac_ge_bound"].get<double>() >= 0.95);
  CHECK(r.pass);
}

TEST_CASE("per-trial failures become flagged rows and fail the campaign") {
  // smallest_singular rejects n above its cap, so every mde_sanity trial
  // at n = 520 flags; the campaign must report that instead of aborting.
  ExperimentConfig c;
  c.kind = ExperimentKind::MdeSanity;
  c.profile.kind = "homogeneous";
  c.n_list = {520};
  c.trials = 2;
  c.a_grid = {1.5};
  c.master_seed = 18;
  c.experiment_id = "flagged";
  c.worker_count = 2;
  const ExperimentResult r = run(c);
  for (const TrialRow& row : r.rows) CHECK(row.flag == 1);
  CHECK(r.summary["flagged_fraction"].get<double>() == 1.0);
  CHECK_FALSE(r.pass);
}

TEST_CASE("gumbel fit emits recentring fields") {
  ExperimentConfig c;
  c.kind = ExperimentKind::GumbelFit;
  c.profile.kind = "homogeneous";
  c.n_list = {200};
  c.trials = 40;
  c.master_seed = 13;
  c.experiment_id = "gumbel-tiny";
  c.worker_count = 2;
  const ExperimentResult r = run(c);
  const auto& jn = r.summary["per_n"][0];
  CHECK(jn["location"].get<double>() > 1.0);
  CHECK(jn["scale"].get<double>() > 0.0);
  CHECK(jn["note"] == "asymptotic, soft");
  CHECK(std::isfinite(jn["median_g"].get<double>()));
}

TEST_CASE("heavy tail compare reports fractions") {
  ExperimentConfig c;
  c.kind = ExperimentKind::HeavyTailCompare;
  c.profile.kind = "homogeneous";
  c.law = "pareto:2.5";
  c.n_list = {24};
  c.trials = 25;
  c.t_grid = {0.5};
  c.master_seed = 14;
  c.experiment_id = "heavy-tiny";
  c.worker_count = 2;
  const ExperimentResult r = run(c);
  const auto& jn = r.summary["per_n"][0];
  CHECK(jn["sigma"].get<double>() == doctest::Approx(1.0));
  CHECK(jn["frac_rho_bounded"].get<double>() >= 0.0);
  CHECK(jn["frac_rho_bounded"].get<double>() <= 1.0);
  CHECK(jn["ratio_threshold"].get<double>() == doctest::Approx(1.3));
}

TEST_CASE("convergence sweep aggregates quantiles and exceedance") {
  ExperimentConfig c;
  c.kind = ExperimentKind::ConvergenceSweep;
  c.profile.kind = "homogeneous";
  c.n_list = {8, 16};
  c.trials = 25;
  c.t_grid = {0.5, 1.0};
  c.master_seed = 16;
  c.experiment_id = "sweep-tiny";
  c.worker_count = 2;
  const ExperimentResult r = run(c);
  REQUIRE(r.summary["per_n"].size() == 2);
  for (const auto& jn : r.summary["per_n"]) {
    CHECK(jn["sigma"].get<double>() == doctest::Approx(1.0));
    CHECK(jn["rho_q05"].get<double>() <= jn["rho_q95"].get<double>());
    CHECK(jn["mean_op_norm"].get<double>() >= jn["mean_rho"].get<double>());
    CHECK(jn["exceedance"].size() == 2);
    CHECK(jn.contains("thm11_overlay"));
  }
}

TEST_CASE("tail curve blocks carry the three bound families") {
  ExperimentConfig c;
  c.kind = ExperimentKind::TailCurve;
  c.profile.kind = "periodic-band";
  c.profile.bandwidth = 3;
  c.n_list = {16};
  c.trials = 30;
  c.t_grid = {1.0, 4.0};
  c.master_seed = 15;
  c.experiment_id = "tail-tiny";
  c.worker_count = 2;
  const ExperimentResult r = run(c);
  const auto& jn = r.summary["per_n"][0];
  CHECK(jn["thm14"].size() == 2);
  CHECK(jn["thm15"].size() == 2);
  CHECK(jn["thm16_qualitative"]["points"].size() == 2);
  CHECK(jn.contains("ltc_sigma_hat"));
}
