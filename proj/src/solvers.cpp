#include "robustdp/solvers.hpp"

#include "robustdp/enumerate.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <spdlog/spdlog.h>

#include <chrono>
#include <cmath>
#include <limits>

namespace robustdp {

std::string_view to_string(Algorithm algo) {
  switch (algo) {
    case Algorithm::ratpi:
      return "ratpi";
    case Algorithm::ratvi:
      return "ratvi";
    case Algorithm::rvi:
      return "rvi";
    case Algorithm::rmpi:
      return "rmpi";
  }
  return "ratpi";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  if (name == "ratpi") return Algorithm::ratpi;
  if (name == "ratvi") return Algorithm::ratvi;
  if (name == "rvi") return Algorithm::rvi;
  if (name == "rmpi") return Algorithm::rmpi;
  return std::nullopt;
}

InnerSweepSchedule InnerSweepSchedule::constant(int sweeps) { return list({sweeps}); }

InnerSweepSchedule InnerSweepSchedule::list(std::vector<int> sweeps) {
  if (sweeps.empty()) throw InvalidParams("inner sweep schedule: empty list");
  for (int s : sweeps) {
    if (s < 0) throw InvalidParams("inner sweep schedule: negative sweep count");
  }
  InnerSweepSchedule out;
  out.description_ = fmt::format("{}", fmt::join(sweeps, ","));
  out.list_ = std::move(sweeps);
  return out;
}

InnerSweepSchedule InnerSweepSchedule::formula(std::function<int(int)> fn, std::string description) {
  InnerSweepSchedule out;
  out.fn_ = std::move(fn);
  out.list_.clear();
  out.description_ = std::move(description);
  return out;
}

int InnerSweepSchedule::operator()(int t) const {
  if (fn_) {
    const int m = fn_(t);
    if (m < 0) throw InvalidParams(fmt::format("inner sweep schedule returned {} at t={}", m, t));
    return m;
  }
  const auto idx = std::min<std::size_t>(static_cast<std::size_t>(t), list_.size() - 1);
  return list_[idx];
}

bool InnerSweepSchedule::is_zero() const {
  if (fn_) return false;
  for (int s : list_) {
    if (s != 0) return false;
  }
  return true;
}

ValueFunction InitialValue::resolve(const TeamMarkovGame& game, double lambda) const {
  const int m = game.num_states();
  switch (mode) {
    case InitMode::payoff_lower_bound:
      return ValueFunction::Constant(m, game.min_payoff() / (1.0 - lambda));
    case InitMode::zeros:
      return ValueFunction::Zero(m);
    case InitMode::explicit_values:
      if (values.size() != m) {
        throw InvalidParams(fmt::format("initial value has {} entries, game has {} states", values.size(), m));
      }
      if (!values.allFinite()) throw InvalidParams("initial value has non-finite entries");
      return values;
  }
  return ValueFunction::Zero(m);
}

std::string InitialValue::describe() const {
  switch (mode) {
    case InitMode::payoff_lower_bound:
      return "remark1";
    case InitMode::zeros:
      return "zeros";
    case InitMode::explicit_values:
      return "explicit";
  }
  return "remark1";
}

double max_delta(double lambda, double epsilon) {
  if (lambda == 0.0) return std::numeric_limits<double>::infinity();
  return (1.0 - lambda) * (1.0 - lambda) * epsilon / (2.0 * lambda * (1.0 + lambda));
}

double termination_threshold(double lambda, double epsilon, double delta) {
  if (lambda == 0.0) return std::numeric_limits<double>::infinity();
  return (1.0 - lambda) * epsilon / (2.0 * lambda) - delta;
}

void validate_params(const SolverParams& p) {
  if (!(p.lambda >= 0.0 && p.lambda < 1.0)) throw InvalidParams(fmt::format("lambda = {} not in [0, 1)", p.lambda));
  if (!(p.epsilon > 0.0)) throw InvalidParams(fmt::format("epsilon = {} must be positive", p.epsilon));
  if (!(p.delta >= 0.0)) throw InvalidParams(fmt::format("delta = {} must be nonnegative", p.delta));
  if (!(p.delta < max_delta(p.lambda, p.epsilon))) {
    throw InvalidParams(fmt::format("delta = {} violates delta < (1-lambda)^2 eps / (2 lambda (1+lambda)) = {}",
                                    p.delta, max_delta(p.lambda, p.epsilon)));
  }
  if (p.approx.bound() > p.lambda * p.delta * (1.0 + 1e-12)) {
    throw InvalidParams(
        fmt::format("perturbation bound {} exceeds lambda * delta = {}", p.approx.bound(), p.lambda * p.delta));
  }
  if (p.max_iterations < 1) throw InvalidParams("max_iterations must be positive");
  if (!(p.evaluation_tolerance > 0.0)) throw InvalidParams("evaluation tolerance must be positive");
}

namespace {

struct LoopConfig {
  Algorithm algorithm;
  SweepOrder order;
  bool no_inner_sweeps;
  bool exact;  // baselines ignore the perturbation oracle and delta
};

SolverResult run_loop(const TeamMarkovGame& game, const SolverParams& params, const LoopConfig& cfg) {
  validate_params(params);
  const auto start = std::chrono::steady_clock::now();
  const double lambda = params.lambda;
  const PerturbationOracle approx = cfg.exact ? PerturbationOracle::identity() : params.approx;
  const double threshold = termination_threshold(lambda, params.epsilon, cfg.exact ? 0.0 : params.delta);

  SolverResult result;
  result.algorithm = cfg.algorithm;
  ValueFunction v = params.init.resolve(game, lambda);
  TeamDecisionRule policy;

  for (int t = 0;; ++t) {
    SweepResult sweep = policy_improvement_sweep(game, v, lambda, approx, t, cfg.order);
    const double residual = sup_norm(sweep.u0 - v);

    TraceEntry entry;
    entry.t = t;
    entry.residual = residual;
    entry.value = v;
    entry.improved = sweep.u0;
    entry.rule = sweep.rule;
    policy = sweep.rule;
    result.iterations = t;
    result.final_residual = residual;

    const bool done = residual < threshold;
    if (done || t >= params.max_iterations) {
      result.terminated = done;
      entry.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      result.trace.entries.push_back(std::move(entry));
      break;
    }

    const int inner = cfg.no_inner_sweeps ? 0 : params.inner_sweeps(t);
    ValueFunction u = std::move(sweep.u0);
    for (int s = 1; s <= inner; ++s) {
      u = partial_policy_eval_sweep(game, u, sweep.rule, sweep.worst_model, lambda, approx, t, s, cfg.order);
    }
    entry.inner_sweeps = inner;
    entry.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.trace.entries.push_back(std::move(entry));
    v = std::move(u);
  }

  if (!result.terminated) {
    spdlog::warn("{}: no termination after {} iterations (residual {})", to_string(cfg.algorithm), result.iterations,
                 result.final_residual);
  }
  spdlog::debug("{}: {} iterations, residual {}", to_string(cfg.algorithm), result.iterations, result.final_residual);

  result.policy = std::move(policy);
  RobustEvaluation eval = evaluate_policy_robust(game, result.policy, lambda, params.evaluation_tolerance);
  result.value = std::move(eval.value);
  result.worst_model = std::move(eval.worst_model);
  return result;
}

}  // namespace

SolverResult solve_ratpi(const TeamMarkovGame& game, const SolverParams& params) {
  return run_loop(game, params, {Algorithm::ratpi, SweepOrder::gauss_seidel, false, false});
}

SolverResult solve_ratvi(const TeamMarkovGame& game, const SolverParams& params) {
  return run_loop(game, params, {Algorithm::ratvi, SweepOrder::gauss_seidel, true, false});
}

SolverResult solve_rvi(const TeamMarkovGame& game, const SolverParams& params) {
  return run_loop(game, params, {Algorithm::rvi, SweepOrder::jacobi, true, true});
}

SolverResult solve_rmpi(const TeamMarkovGame& game, const SolverParams& params) {
  return run_loop(game, params, {Algorithm::rmpi, SweepOrder::jacobi, false, true});
}

SolverResult solve(Algorithm algo, const TeamMarkovGame& game, const SolverParams& params) {
  switch (algo) {
    case Algorithm::ratpi:
      return solve_ratpi(game, params);
    case Algorithm::ratvi:
      return solve_ratvi(game, params);
    case Algorithm::rvi:
      return solve_rvi(game, params);
    case Algorithm::rmpi:
      return solve_rmpi(game, params);
  }
  return solve_ratpi(game, params);
}

RobustEvaluation evaluate_policy_robust(const TeamMarkovGame& game, const TeamDecisionRule& rule, double lambda,
                                        double tol) {
  const int m = game.num_states();
  RobustEvaluation out{ValueFunction::Zero(m), ModelSelection{std::vector<int>(static_cast<std::size_t>(m), 0)}};

  // Row-wise minimization against look-ahead w; valid by rectangularity.
  auto minimize = [&](const ValueFunction& w, ValueFunction& next, ModelSelection& rows) {
    for (int s = 0; s < m; ++s) {
      const int a = rule(s);
      const Eigen::VectorXd target = game.payoff(s).row(a).transpose() + lambda * w;
      const auto& set = game.uncertainty(s, a);
      double best = std::numeric_limits<double>::infinity();
      for (int j = 0; j < set.size(); ++j) {
        const double val = set.row(j).dot(target);
        if (val < best) {
          best = val;
          rows.row[static_cast<std::size_t>(s)] = j;
        }
      }
      next(s) = best;
    }
  };

  ValueFunction next(m);
  if (lambda == 0.0) {
    minimize(out.value, next, out.worst_model);
    out.value = next;
    return out;
  }

  const double threshold = tol * (1.0 - lambda) / (2.0 * lambda);
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  for (long iter = 0; iter < 100'000'000L; ++iter) {
    minimize(out.value, next, out.worst_model);
    const double change = sup_norm(next - out.value);
    out.value.swap(next);
    // Below ~16 ulp of the iterate the change is rounding noise.
    if (change < std::max(threshold, 16.0 * kEps * (1.0 + sup_norm(out.value)))) break;
  }

  // Exact refinement: solve for the current minimizing rows, re-minimize, and
  // repeat until no row improves by more than rounding.
  for (int round = 0; round < 64; ++round) {
    const ValueFunction exact = evaluate_policy_exact(game, rule, out.worst_model, lambda);
    bool changed = false;
    for (int s = 0; s < m; ++s) {
      const int a = rule(s);
      const Eigen::VectorXd target = game.payoff(s).row(a).transpose() + lambda * exact;
      const auto& set = game.uncertainty(s, a);
      const int current = out.worst_model(s);
      const double current_val = set.row(current).dot(target);
      int best_j = current;
      double best_val = current_val;
      for (int j = 0; j < set.size(); ++j) {
        const double val = set.row(j).dot(target);
        if (val < best_val) {
          best_val = val;
          best_j = j;
        }
      }
      if (best_j != current && best_val < current_val - 64.0 * kEps * (1.0 + std::abs(current_val))) {
        out.worst_model.row[static_cast<std::size_t>(s)] = best_j;
        changed = true;
      }
    }
    out.value = exact;
    if (!changed) break;
  }
  return out;
}

ValueFunction evaluate_policy_exact(const TeamMarkovGame& game, const TeamDecisionRule& rule,
                                    const ModelSelection& model, double lambda) {
  const int m = game.num_states();
  const Eigen::MatrixXd P = policy_matrix(game, rule, model);
  const Eigen::VectorXd r = policy_reward(game, rule, model);
  const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(m, m) - lambda * P;
  return A.partialPivLu().solve(r);
}

}  // namespace robustdp
