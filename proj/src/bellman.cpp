#include "robustdp/bellman.hpp"

#include "robustdp/enumerate.hpp"

#include <limits>

namespace robustdp {

namespace {

// Value of candidate row j against look-ahead w.
double candidate_value(const TeamMarkovGame& game, const ValueFunction& w, int k, int a, int j, double lambda) {
  const auto& set = game.uncertainty(k, a);
  return set.row(j).dot(game.payoff(k).row(a).transpose() + lambda * w);
}

}  // namespace

BackupResult robust_backup(const TeamMarkovGame& game, const ValueFunction& w, int k, int a, double lambda) {
  const auto& set = game.uncertainty(k, a);
  const Eigen::VectorXd target = game.payoff(k).row(a).transpose() + lambda * w;
  BackupResult best{std::numeric_limits<double>::infinity(), 0};
  for (int j = 0; j < set.size(); ++j) {
    const double value = set.row(j).dot(target);
    if (value < best.value) best = {value, j};
  }
  return best;
}

BackupResult robust_gs_backup(const TeamMarkovGame& game, const ValueFunction& v, const ValueFunction& u_partial,
                              int k, int a, double lambda) {
  ValueFunction w = v;
  w.head(k) = u_partial.head(k);
  return robust_backup(game, w, k, a, lambda);
}

SweepResult policy_improvement_sweep(const TeamMarkovGame& game, const ValueFunction& v, double lambda,
                                     const PerturbationOracle& approx, int iteration, SweepOrder order) {
  const int m = game.num_states();
  const int num_actions = game.num_joint_actions();
  const bool select_exact = approx.is_exact() || approx.argmax_lock();

  SweepResult out;
  out.rule.choice.assign(static_cast<std::size_t>(m), 0);
  out.worst_model.row.assign(static_cast<std::size_t>(m), 0);
  out.backups.resize(m, num_actions);

  // Gauss-Seidel: w holds u0 for states already swept and v for the rest.
  ValueFunction w = v;
  ValueFunction u0(m);
  std::vector<int> argmin(static_cast<std::size_t>(num_actions));
  for (int k = 0; k < m; ++k) {
    int best_action = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < num_actions; ++a) {
      const BackupResult b = robust_backup(game, w, k, a, lambda);
      out.backups(k, a) = b.value;
      argmin[static_cast<std::size_t>(a)] = b.argmin_row;
      const double score = select_exact ? b.value : approx.perturb(b.value, {iteration, 0, k, a});
      if (score > best_value) {
        best_value = score;
        best_action = a;
      }
    }
    if (select_exact) best_value = approx.perturb(best_value, {iteration, 0, k, best_action});
    u0(k) = best_value;
    out.rule.choice[static_cast<std::size_t>(k)] = best_action;
    out.worst_model.row[static_cast<std::size_t>(k)] = argmin[static_cast<std::size_t>(best_action)];
    if (order == SweepOrder::gauss_seidel) w(k) = best_value;
  }
  out.u0 = std::move(u0);
  return out;
}

ValueFunction partial_policy_eval_sweep(const TeamMarkovGame& game, const ValueFunction& u,
                                        const TeamDecisionRule& rule, const ModelSelection& worst_model,
                                        double lambda, const PerturbationOracle& approx, int iteration, int sweep,
                                        SweepOrder order) {
  const int m = game.num_states();
  if (order == SweepOrder::gauss_seidel) {
    // In place: entries below k are already this sweep's values.
    ValueFunction x = u;
    for (int k = 0; k < m; ++k) {
      const double exact = candidate_value(game, x, k, rule(k), worst_model(k), lambda);
      x(k) = approx.perturb(exact, {iteration, sweep, k, rule(k)});
    }
    return x;
  }
  ValueFunction x(m);
  for (int k = 0; k < m; ++k) {
    const double exact = candidate_value(game, u, k, rule(k), worst_model(k), lambda);
    x(k) = approx.perturb(exact, {iteration, sweep, k, rule(k)});
  }
  return x;
}

Improvement gs_improvement_operator(const TeamMarkovGame& game, const ValueFunction& v, double lambda) {
  SweepResult sweep = policy_improvement_sweep(game, v, lambda);
  return {std::move(sweep.u0), std::move(sweep.rule)};
}

ValueFunction improvement_residual(const TeamMarkovGame& game, const ValueFunction& v, double lambda) {
  return gs_improvement_operator(game, v, lambda).value - v;
}

ValueFunction apply_gs_policy_operator(const TeamMarkovGame& game, const TeamDecisionRule& rule,
                                       const ModelSelection& model, const ValueFunction& v, double lambda) {
  return partial_policy_eval_sweep(game, v, rule, model, lambda);
}

ValueFunction modified_policy_operator(const TeamMarkovGame& game, const ValueFunction& v, int inner_sweeps,
                                       double lambda) {
  const SweepResult sweep = policy_improvement_sweep(game, v, lambda);
  ValueFunction x = sweep.u0;
  for (int i = 0; i < inner_sweeps; ++i) {
    x = apply_gs_policy_operator(game, sweep.rule, sweep.worst_model, x, lambda);
  }
  return x;
}

ValueFunction optimistic_policy_operator(const TeamMarkovGame& game, const ValueFunction& v, int inner_sweeps,
                                         double lambda, std::uint64_t budget) {
  const int m = game.num_states();
  // Bound the total work: |D| * max_d |P_d|.
  std::uint64_t max_models = 1;
  for (int s = 0; s < m; ++s) {
    int widest = 0;
    for (int a = 0; a < game.num_joint_actions(); ++a) widest = std::max(widest, game.uncertainty(s, a).size());
    max_models *= static_cast<std::uint64_t>(widest);
  }
  const std::uint64_t rules = count_decision_rules(game);
  if (rules > budget || max_models > budget / std::max<std::uint64_t>(rules, 1)) {
    throw BudgetExceeded("optimistic operator enumeration", rules * max_models);
  }

  ValueFunction best = ValueFunction::Constant(m, -std::numeric_limits<double>::infinity());
  for_each_decision_rule(
      game,
      [&](const TeamDecisionRule& rule) {
        for_each_policy_model(
            game, rule,
            [&](const ModelSelection& model) {
              ValueFunction x = v;
              for (int i = 0; i <= inner_sweeps; ++i) x = apply_gs_policy_operator(game, rule, model, x, lambda);
              best = best.cwiseMax(x);
            },
            budget);
      },
      budget);
  return best;
}

GsSplitting gs_splitting(const Eigen::MatrixXd& P, double lambda) {
  const Eigen::Index m = P.rows();
  GsSplitting out;
  out.Q = Eigen::MatrixXd::Identity(m, m) - lambda * Eigen::MatrixXd(P.triangularView<Eigen::StrictlyLower>());
  out.R = lambda * Eigen::MatrixXd(P.triangularView<Eigen::Upper>());
  return out;
}

}  // namespace robustdp
