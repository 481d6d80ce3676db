#pragma once

#include "robustdp/approx.hpp"
#include "robustdp/bellman.hpp"
#include "robustdp/game.hpp"

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace robustdp {

enum class Algorithm { ratpi, ratvi, rvi, rmpi };

std::string_view to_string(Algorithm algo);
std::optional<Algorithm> parse_algorithm(std::string_view name);

/// Number of partial-evaluation sweeps M_t run after the improvement sweep of
/// outer iteration t.
class InnerSweepSchedule {
 public:
  InnerSweepSchedule() = default;
  static InnerSweepSchedule constant(int sweeps);
  /// Entry t for t < size, the last entry afterwards.
  static InnerSweepSchedule list(std::vector<int> sweeps);
  static InnerSweepSchedule formula(std::function<int(int)> fn, std::string description);

  int operator()(int t) const;
  bool is_zero() const;
  /// Compact description, e.g. "5" or "1,3,5".
  const std::string& describe() const { return description_; }

 private:
  std::vector<int> list_{0};
  std::function<int(int)> fn_;
  std::string description_ = "0";
};

enum class InitMode {
  /// v0(s) = min r / (1 - lambda) for every s; guarantees a nonnegative
  /// improvement residual at the start.
  payoff_lower_bound,
  zeros,
  explicit_values,
};

struct InitialValue {
  InitMode mode = InitMode::payoff_lower_bound;
  ValueFunction values;

  static InitialValue payoff_lower_bound() { return {}; }
  static InitialValue zeros() { return {InitMode::zeros, {}}; }
  static InitialValue from(ValueFunction v) { return {InitMode::explicit_values, std::move(v)}; }
  ValueFunction resolve(const TeamMarkovGame& game, double lambda) const;
  std::string describe() const;
};

struct SolverParams {
  double lambda = 0.97;
  double epsilon = 1e-5;
  /// Approximation tolerance; must satisfy delta < (1-lambda)^2 eps / (2 lambda (1+lambda)).
  double delta = 0.0;
  InnerSweepSchedule inner_sweeps = InnerSweepSchedule::constant(5);
  InitialValue init;
  int max_iterations = 1'000'000;
  /// Perturbation applied to every backup; its bound must not exceed lambda * delta.
  PerturbationOracle approx;
  /// Tolerance handed to the robust evaluation of the returned policy.
  double evaluation_tolerance = 1e-12;
};

class InvalidParams : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Strict upper bound on delta for the given lambda and epsilon.
double max_delta(double lambda, double epsilon);
/// Stopping threshold (1-lambda) eps / (2 lambda) - delta; +inf when lambda = 0.
double termination_threshold(double lambda, double epsilon, double delta);
void validate_params(const SolverParams& params);

struct TraceEntry {
  int t = 0;
  /// sup-norm of (improved values - v^t).
  double residual = 0.0;
  ValueFunction value;     // v^t
  ValueFunction improved;  // u0^t
  TeamDecisionRule rule;   // d_{t+1}
  int inner_sweeps = 0;    // evaluation sweeps actually run after this improvement
  double wall_seconds = 0.0;
};

struct SolverTrace {
  std::vector<TraceEntry> entries;
};

struct SolverResult {
  Algorithm algorithm = Algorithm::ratpi;
  TeamDecisionRule policy;
  /// Worst-case rows from the robust evaluation of policy.
  ModelSelection worst_model;
  /// Robust (worst-case) value of policy.
  ValueFunction value;
  int iterations = 0;
  bool terminated = false;
  double final_residual = 0.0;
  SolverTrace trace;
};

/// Gauss-Seidel robust approximate team policy iteration.
SolverResult solve_ratpi(const TeamMarkovGame& game, const SolverParams& params);
/// solve_ratpi with no partial-evaluation sweeps.
SolverResult solve_ratvi(const TeamMarkovGame& game, const SolverParams& params);
/// Jacobi robust value iteration baseline.
SolverResult solve_rvi(const TeamMarkovGame& game, const SolverParams& params);
/// Jacobi robust modified policy iteration baseline.
SolverResult solve_rmpi(const TeamMarkovGame& game, const SolverParams& params);

SolverResult solve(Algorithm algo, const TeamMarkovGame& game, const SolverParams& params);

struct RobustEvaluation {
  ValueFunction value;
  ModelSelection worst_model;
};

/// Worst-case value of a fixed rule: fixed point of
/// v(s) <- min_p sum_l p(l) [r(s, d(s), l) + lambda v(l)], iterated until the
/// sup-norm change drops below tol (1-lambda) / (2 lambda), then refined by
/// exact linear solves over the minimizing rows.
RobustEvaluation evaluate_policy_robust(const TeamMarkovGame& game, const TeamDecisionRule& rule, double lambda,
                                        double tol = 1e-12);

/// v = (I - lambda P_d)^{-1} r_(d,P_d) by a dense LU solve.
ValueFunction evaluate_policy_exact(const TeamMarkovGame& game, const TeamDecisionRule& rule,
                                    const ModelSelection& model, double lambda);

}  // namespace robustdp
