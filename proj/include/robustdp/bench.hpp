#pragma once

#include "robustdp/approx.hpp"
#include "robustdp/rssd.hpp"
#include "robustdp/solvers.hpp"

#include <optional>
#include <string>
#include <vector>

namespace robustdp {

// ---------------------------------------------------------------------------
// Result files
// ---------------------------------------------------------------------------

/// Everything needed to replay a solver run, recorded next to its result.
struct RunConfig {
  std::string game;  // file path or generator description
  Algorithm algorithm = Algorithm::ratpi;
  SolverParams params;
};

/// Result JSON with stable key order. Contains no timing information, so
/// identical runs produce identical bytes.
std::string result_to_json(const TeamMarkovGame& game, const RunConfig& config, const SolverResult& result);

/// Per-iteration trace: header "t,algo,state,value", one row per (t, state).
std::string trace_to_csv(const TeamMarkovGame& game, const SolverResult& result);

// ---------------------------------------------------------------------------
// Iteration-count benchmark on the social dilemma instance
// ---------------------------------------------------------------------------

struct BenchConfig {
  std::vector<double> lambdas = {0.95, 0.96, 0.97, 0.98, 0.99};
  std::vector<Algorithm> algorithms = {Algorithm::rvi, Algorithm::ratvi, Algorithm::rmpi, Algorithm::ratpi};
  double epsilon = 1e-5;
  /// delta = delta_fraction * max_delta(lambda, epsilon).
  double delta_fraction = 0.99;
  /// Inner sweeps for the headline rmpi / ratpi comparison.
  int matched_sweeps = 50;
  /// Additional inner-sweep counts reported for rmpi / ratpi.
  std::vector<int> sweep_grid = {1, 3, 5, 10};
  InitialValue init;
  PerturbationMode approx_mode = PerturbationMode::identity;
  std::uint64_t approx_seed = 0;
  rssd::RssdParams game;
  bool with_oracle = true;
  std::uint64_t budget = kDefaultEnumerationBudget;
  int jobs = 1;
};

struct BenchCell {
  Algorithm algorithm = Algorithm::ratpi;
  double lambda = 0.0;
  int inner_sweeps = 0;
  bool matched = false;  // part of the headline comparison
  double delta = 0.0;
  int iterations = 0;
  bool terminated = false;
  double final_residual = 0.0;
  std::optional<double> oracle_gap;
  std::optional<bool> epsilon_optimal;
  double wall_seconds = 0.0;
};

struct BenchReport {
  BenchConfig config;
  std::vector<BenchCell> cells;

  /// Headline cell for (algorithm, lambda), if present.
  const BenchCell* matched(Algorithm algo, double lambda) const;
};

BenchReport run_table1(const BenchConfig& config);

/// Machine-readable grid, one row per cell with the full configuration.
/// Deterministic: timings are excluded.
std::string bench_to_csv(const BenchReport& report);
/// Human-readable iteration table (algorithms x lambda) for the matched cells.
std::string bench_to_text(const BenchReport& report);

// ---------------------------------------------------------------------------
// Value-trajectory export
// ---------------------------------------------------------------------------

struct TrajectoryExport {
  /// Header "t,algo,state,value".
  std::string trace_csv;
  /// Header "state,joint_action,rho_final": exact robust backups at the
  /// terminal iterate of the ratpi run.
  std::string lattice_csv;
  SolverResult ratvi;
  SolverResult ratpi;
};

TrajectoryExport export_trajectories(const TeamMarkovGame& game, const SolverParams& params);

}  // namespace robustdp
