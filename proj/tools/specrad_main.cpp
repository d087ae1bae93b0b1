#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "specrad/acceptance.hpp"
#include "specrad/eig.hpp"
#include "specrad/errors.hpp"
#include "specrad/harness.hpp"
#include "specrad/mde.hpp"
#include "specrad/profiles.hpp"
#include "specrad/sampler.hpp"
#include "specrad/theory.hpp"
#include "specrad/trace_moments.hpp"

namespace {

using namespace specrad;

// Exit codes: 0 success, 1 usage error, 2 numeric failure, 3 acceptance
// suite failure.
constexpr int kExitUsage = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitAcceptance = 3;

int default_threads() {
  if (const char* env = std::getenv("SPECRAD_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 0;  // harness resolves 0 to the logical core count
}

struct ProfileOpts {
  std::string kind = "homogeneous";
  int n = 16;
  int blocks = 4;
  int bandwidth = 3;
  int d = 2;
  int q = 2;
  double v = -1.0;
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double c_exp = 0.5;
  double d_exp = 0.5;
  double big_d = 1.0;

  void add_flags(CLI::App* cmd) {
    cmd->add_option("--kind", kind,
                    "profile kind: homogeneous|block-band|periodic-band|hetero-block|"
                    "product-linearization|nilpotent|diag-block|perturbed-regular");
    cmd->add_option("--n", n, "matrix dimension");
    cmd->add_option("--blocks", blocks, "block-band: number of block rows");
    cmd->add_option("--bandwidth", bandwidth, "periodic-band: odd bandwidth");
    cmd->add_option("--d", d, "diag-block: block size");
    cmd->add_option("--q", q, "product-linearization: block size");
    cmd->add_option("--v", v, "band variance (default: row-stochastic choice)");
    cmd->add_option("--lambda1", lambda1, "hetero-block: top-right weight");
    cmd->add_option("--lambda2", lambda2, "hetero-block: bottom-left weight");
    cmd->add_option("--c-exp", c_exp, "perturbed-regular: degree exponent");
    cmd->add_option("--d-exp", d_exp, "perturbed-regular: perturbation count exponent");
    cmd->add_option("--big-d", big_d, "perturbed-regular: perturbation strength D");
  }

  VarianceProfile build() const {
    ProfileSpec spec;
    spec.kind = kind;
    spec.blocks = blocks;
    spec.bandwidth = bandwidth;
    spec.d = d;
    spec.q = q;
    spec.v = v;
    spec.lambda1 = lambda1;
    spec.lambda2 = lambda2;
    spec.c_exp = c_exp;
    spec.d_exp = d_exp;
    spec.big_d = big_d;
    return spec.build(n);
  }
};

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output path '" + out_path + "'");
  out << text;
}

nlohmann::json params_json(const VarianceProfile& prof, int depth) {
  const ProfileParams pp = params(prof, depth);
  nlohmann::json jp;
  jp["sigma"] = pp.sigma;
  jp["sigma_star"] = pp.sigma_star;
  jp["rho_s"] = pp.rho_s;
  nlohmann::json seq = nlohmann::json::array();
  for (const auto& [k, mk] : pp.ltc_sequence) seq.push_back({{"k", k}, {"m_k", mk}});
  jp["ltc_sequence"] = std::move(seq);
  jp["ltc_sigma_hat"] = pp.ltc_sigma_hat;
  jp["flatness"] = {pp.flatness.first, pp.flatness.second};
  if (std::isfinite(pp.empirical_c))
    jp["empirical_c"] = pp.empirical_c;
  else
    jp["empirical_c"] = nullptr;
  return jp;
}

int dispatch(CLI::App& app) {
  // ---- profile ----
  auto* cmd_profile = app.add_subcommand("profile", "construct a variance profile and print its parameters");
  auto prof_opts = std::make_shared<ProfileOpts>();
  prof_opts->add_flags(cmd_profile);
  auto profile_depth = std::make_shared<int>(8);
  auto profile_full = std::make_shared<bool>(false);
  auto profile_out = std::make_shared<std::string>();
  cmd_profile->add_option("--K", *profile_depth, "long-time-control truncation depth");
  cmd_profile->add_flag("--full", *profile_full, "include the dense variance grid");
  cmd_profile->add_option("--out", *profile_out, "output file (default stdout)");
  cmd_profile->callback([=] {
    const VarianceProfile prof = prof_opts->build();
    nlohmann::json j;
    j["label"] = prof.label;
    j["n"] = prof.n;
    j["doubly_stochastic"] = is_doubly_stochastic(prof, 1e-9);
    j["params"] = params_json(prof, *profile_depth);
    if (*profile_full) j["profile"] = nlohmann::json::parse(prof.to_json());
    emit(j.dump(), *profile_out);
  });

  // ---- sample ----
  auto* cmd_sample = app.add_subcommand("sample", "emit one matrix realization as a binary dump");
  auto sample_opts = std::make_shared<ProfileOpts>();
  sample_opts->add_flags(cmd_sample);
  auto sample_law = std::make_shared<std::string>("complex-gaussian");
  auto sample_seed = std::make_shared<std::uint64_t>(0);
  auto sample_trial = std::make_shared<std::uint64_t>(0);
  auto sample_id = std::make_shared<std::string>("cli");
  auto sample_out = std::make_shared<std::string>();
  cmd_sample->add_option("--law", *sample_law, "entry law spec");
  cmd_sample->add_option("--seed", *sample_seed, "master seed");
  cmd_sample->add_option("--trial", *sample_trial, "trial index");
  cmd_sample->add_option("--experiment-id", *sample_id, "seed-path experiment id");
  cmd_sample->add_option("--out", *sample_out, "output file")->required();
  cmd_sample->callback([=] {
    const EntryLaw law = EntryLaw::parse(*sample_law);
    const MatrixSample ms =
        sample(sample_opts->build(), law, {*sample_seed, *sample_id, *sample_trial});
    std::ofstream out(*sample_out, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output path '" + *sample_out + "'");
    write_matrix_dump(out, ms, law.is_complex());
  });

  // ---- rho ----
  auto* cmd_rho = app.add_subcommand("rho", "spectral report of one realization as JSON");
  auto rho_opts = std::make_shared<ProfileOpts>();
  rho_opts->add_flags(cmd_rho);
  auto rho_law = std::make_shared<std::string>("complex-gaussian");
  auto rho_seed = std::make_shared<std::uint64_t>(0);
  auto rho_trial = std::make_shared<std::uint64_t>(0);
  auto rho_id = std::make_shared<std::string>("cli");
  auto rho_out = std::make_shared<std::string>();
  cmd_rho->add_option("--law", *rho_law, "entry law spec");
  cmd_rho->add_option("--seed", *rho_seed, "master seed");
  cmd_rho->add_option("--trial", *rho_trial, "trial index");
  cmd_rho->add_option("--experiment-id", *rho_id, "seed-path experiment id");
  cmd_rho->add_option("--out", *rho_out, "output file (default stdout)");
  cmd_rho->callback([=] {
    const EntryLaw law = EntryLaw::parse(*rho_law);
    const MatrixSample ms = sample(rho_opts->build(), law, {*rho_seed, *rho_id, *rho_trial});
    const SpectralReport rep = spectral_report(ms.a);
    if (!rep.converged) throw NonConvergence("eigen iteration budget exhausted");
    nlohmann::json j;
    j["n"] = ms.n;
    j["rho"] = rep.rho;
    j["op_norm"] = rep.op_norm;
    j["iterations"] = rep.iterations;
    j["converged"] = rep.converged;
    nlohmann::json ev = nlohmann::json::array();
    for (const cplx& v : rep.eigenvalues) ev.push_back({v.real(), v.imag()});
    j["eigenvalues"] = std::move(ev);
    emit(j.dump(), *rho_out);
  });

  // ---- moments ----
  auto* cmd_moments = app.add_subcommand("moments", "exact or Monte Carlo trace moment");
  auto mom_opts = std::make_shared<ProfileOpts>();
  mom_opts->add_flags(cmd_moments);
  auto mom_law = std::make_shared<std::string>("complex-gaussian");
  auto mom_p = std::make_shared<int>(1);
  auto mom_mc = std::make_shared<bool>(false);
  auto mom_trials = std::make_shared<long>(1000);
  auto mom_seed = std::make_shared<std::uint64_t>(0);
  auto mom_out = std::make_shared<std::string>();
  cmd_moments->add_option("--law", *mom_law, "entry law spec");
  cmd_moments->add_option("--p", *mom_p, "trace power");
  cmd_moments->add_flag("--mc", *mom_mc, "Monte Carlo instead of exact enumeration");
  cmd_moments->add_option("--trials", *mom_trials, "Monte Carlo trials");
  cmd_moments->add_option("--seed", *mom_seed, "master seed");
  cmd_moments->add_option("--out", *mom_out, "output file (default stdout)");
  cmd_moments->callback([=] {
    const VarianceProfile prof = mom_opts->build();
    const EntryLaw law = EntryLaw::parse(*mom_law);
    const MomentEstimate est =
        *mom_mc ? trace_moment_mc(prof, law, *mom_p, *mom_trials, {*mom_seed, "cli-moments", 0})
                : trace_moment_exact(prof, law, *mom_p);
    nlohmann::json j;
    j["mode"] = est.mode == MomentEstimate::Mode::Exact ? "exact" : "monte_carlo";
    j["p"] = est.p;
    if (std::isinf(est.value))
      j["value"] = "inf";
    else
      j["value"] = est.value;
    j["std_error"] = est.std_error;
    j["trials"] = est.trials;
    emit(j.dump(), *mom_out);
  });

  // ---- mde ----
  auto* cmd_mde = app.add_subcommand("mde", "solve the Dyson cubic at a point or scan a grid");
  auto mde_scan = std::make_shared<bool>(false);
  auto mde_zre = std::make_shared<double>(1.5);
  auto mde_zim = std::make_shared<double>(0.0);
  auto mde_vre = std::make_shared<double>(0.0);
  auto mde_vim = std::make_shared<double>(0.0);
  auto mde_vmin = std::make_shared<double>(-0.33);
  auto mde_vmax = std::make_shared<double>(0.33);
  auto mde_steps = std::make_shared<int>(67);
  auto mde_out = std::make_shared<std::string>();
  cmd_mde->add_flag("--scan", *mde_scan, "emit CSV over a real-v grid at fixed |z|");
  cmd_mde->add_option("--z-re", *mde_zre, "Re z (scan mode uses |z| = this)");
  cmd_mde->add_option("--z-im", *mde_zim, "Im z");
  cmd_mde->add_option("--v-re", *mde_vre, "Re v");
  cmd_mde->add_option("--v-im", *mde_vim, "Im v");
  cmd_mde->add_option("--v-min", *mde_vmin, "scan: lowest v");
  cmd_mde->add_option("--v-max", *mde_vmax, "scan: highest v");
  cmd_mde->add_option("--steps", *mde_steps, "scan: grid points");
  cmd_mde->add_option("--out", *mde_out, "output file (default stdout)");
  cmd_mde->callback([=] {
    if (*mde_scan) {
      std::string csv = "z_mod,v,a1_re,a1_im,a2_re,a2_im,a3_re,a3_im,indicator\n";
      for (int i = 0; i < *mde_steps; ++i) {
        const double v = *mde_vmin + (*mde_vmax - *mde_vmin) * i / std::max(1, *mde_steps - 1);
        const cplx z(*mde_zre, 0.0);
        const auto sols = solve_cubic(z, cplx(v, 0.0));
        const bool ind = std::abs(v) < kSupportWindow && support_indicator(z, v);
        csv += format_double(*mde_zre) + "," + format_double(v);
        for (const MDESolution& s : sols)
          csv += "," + format_double(s.a.real()) + "," + format_double(s.a.imag());
        csv += std::string(",") + (ind ? "1" : "0") + "\n";
      }
      emit(csv, *mde_out);
      return;
    }
    const cplx z(*mde_zre, *mde_zim), v(*mde_vre, *mde_vim);
    nlohmann::json j;
    nlohmann::json roots = nlohmann::json::array();
    for (const MDESolution& s : solve_cubic(z, v)) {
      roots.push_back({{"a", {s.a.real(), s.a.imag()}},
                       {"b", {s.b.real(), s.b.imag()}},
                       {"residual", s.residual},
                       {"branch", s.branch}});
    }
    j["roots"] = std::move(roots);
    if (v.imag() > 0.0) {
      const MDESolution h = herglotz_root(z, v);
      j["herglotz"] = {{"a", {h.a.real(), h.a.imag()}},
                       {"b", {h.b.real(), h.b.imag()}},
                       {"residual", h.residual}};
    }
    emit(j.dump(), *mde_out);
  });

  // ---- curve ----
  auto* cmd_curve = app.add_subcommand("curve", "tabulate a theory bound curve");
  auto curve_name = std::make_shared<std::string>();
  auto curve_t = std::make_shared<double>(std::nan(""));
  auto curve_tmin = std::make_shared<double>(0.1);
  auto curve_tmax = std::make_shared<double>(10.0);
  auto curve_steps = std::make_shared<int>(100);
  auto curve_q = std::make_shared<double>(1.0);
  auto curve_n = std::make_shared<double>(16.0);
  auto curve_sigma = std::make_shared<double>(1.0);
  auto curve_sigma_star = std::make_shared<double>(0.1);
  auto curve_c0 = std::make_shared<double>(1.0);
  auto curve_c1 = std::make_shared<double>(1.0);
  auto curve_c = std::make_shared<double>(1.0);
  auto curve_out = std::make_shared<std::string>();
  cmd_curve->add_option("--name", *curve_name, "thm11|thm14|thm15|thm16|thm18|eq15|ginibre-cdf|cramer")
      ->required();
  cmd_curve->add_option("--t", *curve_t, "evaluate at one point and print the value");
  cmd_curve->add_option("--t-min", *curve_tmin, "tabulation start");
  cmd_curve->add_option("--t-max", *curve_tmax, "tabulation end");
  cmd_curve->add_option("--steps", *curve_steps, "tabulation points");
  cmd_curve->add_option("--q", *curve_q, "thm18 block count");
  cmd_curve->add_option("--n", *curve_n, "dimension parameter");
  cmd_curve->add_option("--sigma", *curve_sigma, "sigma parameter");
  cmd_curve->add_option("--sigma-star", *curve_sigma_star, "sigma_star parameter");
  cmd_curve->add_option("--c0", *curve_c0, "constant C0");
  cmd_curve->add_option("--c1", *curve_c1, "constant C1");
  cmd_curve->add_option("--c", *curve_c, "constant C");
  cmd_curve->add_option("--out", *curve_out, "output file (default stdout)");
  cmd_curve->callback([=] {
    const std::map<std::string, double> params = {
        {"q", *curve_q},         {"n", *curve_n},   {"sigma", *curve_sigma},
        {"sigma_star", *curve_sigma_star}, {"C0", *curve_c0}, {"C1", *curve_c1},
        {"C", *curve_c}};
    const BoundCurve curve = make_curve(*curve_name, params);
    if (!std::isnan(*curve_t)) {
      emit(format_double(curve.evaluate(*curve_t)), *curve_out);
      return;
    }
    std::string csv = "t,bound\n";
    for (int i = 0; i < *curve_steps; ++i) {
      const double t =
          *curve_tmin + (*curve_tmax - *curve_tmin) * i / std::max(1, *curve_steps - 1);
      csv += format_double(t) + "," + format_double(curve.evaluate(t)) + "\n";
    }
    emit(csv, *curve_out);
  });

  // ---- run ----
  auto* cmd_run = app.add_subcommand("run", "execute an experiment config");
  auto run_config = std::make_shared<std::string>();
  auto run_outdir = std::make_shared<std::string>(".");
  auto run_threads = std::make_shared<int>(-1);
  cmd_run->add_option("--config", *run_config, "experiment config JSON")->required();
  cmd_run->add_option("--out", *run_outdir, "output directory for results.csv and summary.json");
  cmd_run->add_option("--threads", *run_threads, "worker threads (overrides config)");
  cmd_run->callback([=] {
    ExperimentConfig cfg = ExperimentConfig::from_json_file(*run_config);
    if (*run_threads >= 0)
      cfg.worker_count = *run_threads;
    else if (cfg.worker_count == 0)
      cfg.worker_count = default_threads();
    // Output paths must be writable before the campaign starts.
    const std::string csv_path = *run_outdir + "/results.csv";
    const std::string sum_path = *run_outdir + "/summary.json";
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) throw std::invalid_argument("cannot open output path '" + csv_path + "'");
    std::ofstream sum(sum_path, std::ios::binary);
    if (!sum) throw std::invalid_argument("cannot open output path '" + sum_path + "'");
    const ExperimentResult res = run(cfg);
    csv << res.results_csv();
    sum << res.summary_json();
    std::cout << res.summary_json();
    if (res.summary["flagged_fraction"].get<double>() > 0.01)
      throw NumericError("campaign flagged more than 1% of trials");
  });

  // ---- verify ----
  auto* cmd_verify = app.add_subcommand("verify", "run the acceptance suite");
  auto verify_threads = std::make_shared<int>(0);
  auto verify_criterion = std::make_shared<int>(0);
  cmd_verify->add_option("--threads", *verify_threads, "worker threads");
  cmd_verify->add_option("--criterion", *verify_criterion, "run a single criterion (1..10)");
  cmd_verify->callback([=] {
    const int threads = *verify_threads > 0 ? *verify_threads : default_threads();
    const auto results = run_acceptance(std::cout, threads, *verify_criterion);
    if (!all_passed(results)) throw std::runtime_error("acceptance-suite-failure");
  });

  app.require_subcommand(1);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral radius laboratory for inhomogeneous non-Hermitian random matrices"};
  dispatch(app);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kExitUsage;
  } catch (const std::runtime_error& e) {
    if (std::string(e.what()) == "acceptance-suite-failure") {
      std::cerr << "acceptance suite failed" << std::endl;
      return kExitAcceptance;
    }
    std::cerr << "numeric failure: " << e.what() << std::endl;
    return kExitNumeric;
  }
  return 0;
}
