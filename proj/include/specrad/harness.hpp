#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "specrad/entry_laws.hpp"
#include "specrad/profiles.hpp"

namespace specrad {

enum class ExperimentKind {
  ConvergenceSweep,
  TailCurve,
  GumbelFit,
  MomentCheck,
  HeavyTailCompare,
  ProductLinearization,
  DiagBlockExact,
  MdeSanity,
};

std::string kind_name(ExperimentKind kind);
ExperimentKind kind_from_name(const std::string& name);

// Profile constructor choice plus its n-independent knobs; the dimension
// comes from the experiment's n_list.
struct ProfileSpec {
  std::string kind = "homogeneous";
  int bandwidth = 3;    // periodic-band
  int blocks = 4;       // block-band: number of block rows
  int d = 2;            // diag-block: block size
  int q = 2;            // product-linearization: block size
  double v = -1.0;      // band variance; negative means the row-stochastic default
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double c_exp = 0.5;   // perturbed-regular
  double d_exp = 0.5;
  double big_d = 1.0;

  VarianceProfile build(int n) const;
  nlohmann::json to_json() const;
  static ProfileSpec from_json(const nlohmann::json& j);
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::ConvergenceSweep;
  ProfileSpec profile;
  std::string law = "complex-gaussian";
  std::vector<int> n_list;
  long trials = 1;
  std::vector<double> t_grid;  // doubles as the power grid for moment_check
  std::vector<double> a_grid;
  std::uint64_t master_seed = 0;
  std::string experiment_id;
  int worker_count = 0;  // 0 = logical cores

  void validate() const;
  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig from_json_file(const std::string& path);
};

// One line of results.csv.  extra1/extra2 are kind-specific (see README);
// nan marks "not computed here".
struct TrialRow {
  int n = 0;
  long trial = 0;
  std::uint32_t seed_hi = 0;
  std::uint32_t seed_lo = 0;
  double rho = 0.0;
  double op_norm = 0.0;
  double extra1 = 0.0;
  double extra2 = 0.0;
  int flag = 0;  // 1 = per-trial numeric failure, excluded from aggregates
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<TrialRow> rows;       // sorted by task index
  nlohmann::json summary;           // aggregates, overlays, verdicts, wall clock
  bool pass = true;

  std::string results_csv() const;  // byte-reproducible given the config
  std::string summary_json() const;
};

// Deterministic given the config: trial t of the campaign draws through the
// seed path (master_seed, experiment_id, t) regardless of worker count, and
// aggregation runs over rows in task order.  Per-trial numeric failures
// become flagged rows; a campaign with more than 1% flagged rows fails.
ExperimentResult run(const ExperimentConfig& config);

// Shortest round-trip decimal formatting used for all CSV numbers.
std::string format_double(double v);

}  // namespace specrad
