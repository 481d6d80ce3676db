#pragma once

#include "robustdp/approx.hpp"
#include "robustdp/game.hpp"

#include <cstdint>

namespace robustdp {

/// Gauss-Seidel sweeps read values already updated earlier in the same sweep;
/// Jacobi sweeps read only the previous iterate.
enum class SweepOrder { gauss_seidel, jacobi };

struct BackupResult {
  double value = 0.0;
  /// First minimizing candidate in the row set for (s^k, a).
  int argmin_row = 0;
};

struct SweepResult {
  /// Improved values, one per state.
  ValueFunction u0;
  /// Maximizing joint action per state (first in index order on ties).
  TeamDecisionRule rule;
  /// Worst-case row of the exact backup at the chosen action.
  ModelSelection worst_model;
  /// Exact backups for every (state, joint action), m x |A|.
  Eigen::MatrixXd backups;
};

/// Worst-case one-step backup at state k under joint action a,
///   min_p sum_l p(l) [ r(s^k, a, s^l) + lambda * w(l) ],
/// where w(l) = u_partial(l) for l < k and v(l) for l >= k.
BackupResult robust_gs_backup(const TeamMarkovGame& game, const ValueFunction& v, const ValueFunction& u_partial,
                              int k, int a, double lambda);

/// Same backup against an already assembled look-ahead vector w.
BackupResult robust_backup(const TeamMarkovGame& game, const ValueFunction& w, int k, int a, double lambda);

/// One improvement sweep over the states in order. Each backup passes
/// through `approx`; with approx.argmax_lock() the action is chosen from the
/// exact backups and only the stored value is perturbed.
SweepResult policy_improvement_sweep(const TeamMarkovGame& game, const ValueFunction& v, double lambda,
                                     const PerturbationOracle& approx = {}, int iteration = 0,
                                     SweepOrder order = SweepOrder::gauss_seidel);

/// One evaluation sweep with the action and worst-case row of every state held
/// fixed (rows are reused, never re-minimized).
ValueFunction partial_policy_eval_sweep(const TeamMarkovGame& game, const ValueFunction& u,
                                        const TeamDecisionRule& rule, const ModelSelection& worst_model,
                                        double lambda, const PerturbationOracle& approx = {}, int iteration = 0,
                                        int sweep = 1, SweepOrder order = SweepOrder::gauss_seidel);

struct Improvement {
  ValueFunction value;
  TeamDecisionRule rule;
};

/// Exact robust Gauss-Seidel improvement operator: v -> (max_d min_P of the
/// GS splitting update, the v-improving rule). Realized sweep-wise.
Improvement gs_improvement_operator(const TeamMarkovGame& game, const ValueFunction& v, double lambda);

/// Improvement residual: gs_improvement_operator(v) - v. Nonnegative exactly
/// on the region from which the GS solvers climb monotonically.
ValueFunction improvement_residual(const TeamMarkovGame& game, const ValueFunction& v, double lambda);

/// Splitting update for a fixed (rule, model): solves
/// (I - lambda P^L) x = r_(d,P) + lambda P^U v by forward substitution, with
/// P^L strictly lower and P^U upper triangular including the diagonal.
ValueFunction apply_gs_policy_operator(const TeamMarkovGame& game, const TeamDecisionRule& rule,
                                       const ModelSelection& model, const ValueFunction& v, double lambda);

/// One exact improvement sweep fixing (d_v, P*), then `inner_sweeps` more
/// applications of the fixed-policy splitting update.
ValueFunction modified_policy_operator(const TeamMarkovGame& game, const ValueFunction& v, int inner_sweeps,
                                       double lambda);

/// Componentwise max over every rule and every admissible model of the
/// (inner_sweeps + 1)-fold splitting update. Enumeration only; intended for
/// small instances and tests.
ValueFunction optimistic_policy_operator(const TeamMarkovGame& game, const ValueFunction& v, int inner_sweeps,
                                         double lambda, std::uint64_t budget = kDefaultEnumerationBudget);

/// Dense Gauss-Seidel regular splitting of I - lambda P: Q = I - lambda P^L,
/// R = lambda P^U.
struct GsSplitting {
  Eigen::MatrixXd Q;
  Eigen::MatrixXd R;
};
GsSplitting gs_splitting(const Eigen::MatrixXd& P, double lambda);

}  // namespace robustdp
