#pragma once

// Test-only game generators and brute-force reference computations. The
// references deliberately avoid the library's enumeration, backup and solver
// code so that they can serve as independent oracles.

#include "robustdp/game.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace testing_support {

using robustdp::RawGame;
using robustdp::TeamMarkovGame;

struct GameShape {
  int max_states = 4;
  int max_players = 2;
  int max_actions = 2;
  int max_rows = 3;
  // When set every dimension takes its maximum instead of a random value.
  bool exact = false;
};

inline RawGame random_raw_game(std::uint64_t seed, const GameShape& shape = {}) {
  std::mt19937_64 rng(seed);
  auto pick = [&](int hi) { return shape.exact ? hi : std::uniform_int_distribution<int>(1, hi)(rng); };
  std::uniform_real_distribution<double> payoff(-1.0, 1.0);
  std::exponential_distribution<double> gamma1(1.0);

  RawGame raw;
  const int m = pick(shape.max_states);
  raw.n_players = pick(shape.max_players);
  for (int s = 0; s < m; ++s) raw.states.push_back("s" + std::to_string(s));
  for (int i = 0; i < raw.n_players; ++i) {
    const int k = pick(shape.max_actions);
    std::vector<std::string> names;
    for (int j = 0; j < k; ++j) names.push_back("a" + std::to_string(j));
    raw.player_actions.push_back(names);
  }

  // Joint actions in mixed radix, player 0 most significant.
  std::vector<std::vector<int>> joint = {{}};
  for (const auto& acts : raw.player_actions) {
    std::vector<std::vector<int>> next;
    for (const auto& prefix : joint) {
      for (int j = 0; j < static_cast<int>(acts.size()); ++j) {
        auto v = prefix;
        v.push_back(j);
        next.push_back(v);
      }
    }
    joint = next;
  }

  for (int s = 0; s < m; ++s) {
    for (const auto& a : joint) {
      for (int l = 0; l < m; ++l) raw.payoffs.push_back({s, a, l, {payoff(rng)}});
      robustdp::RawUncertainty u{s, a, {}};
      const int rows = pick(shape.max_rows);
      for (int j = 0; j < rows; ++j) {
        // Flat Dirichlet sample.
        std::vector<double> row(static_cast<std::size_t>(m));
        double sum = 0.0;
        for (auto& x : row) sum += (x = gamma1(rng));
        for (auto& x : row) x /= sum;
        u.rows.push_back(row);
      }
      raw.uncertainty.push_back(u);
    }
  }
  return raw;
}

inline TeamMarkovGame random_game(std::uint64_t seed, const GameShape& shape = {}) {
  return robustdp::validate_game(random_raw_game(seed, shape));
}

/// Single joint action, one candidate row per state: a plain Markov chain.
inline TeamMarkovGame chain_game(const Eigen::MatrixXd& P, const Eigen::MatrixXd& r) {
  RawGame raw;
  raw.n_players = 1;
  raw.player_actions = {{"a"}};
  const int m = static_cast<int>(P.rows());
  for (int s = 0; s < m; ++s) raw.states.push_back("s" + std::to_string(s));
  for (int s = 0; s < m; ++s) {
    for (int l = 0; l < m; ++l) raw.payoffs.push_back({s, {0}, l, {r(s, l)}});
    std::vector<double> row(P.row(s).begin(), P.row(s).end());
    raw.uncertainty.push_back({s, {0}, {row}});
  }
  return robustdp::validate_game(raw);
}

/// Odometer over index vectors with per-position radix.
inline bool next_index(std::vector<int>& idx, const std::vector<int>& radix) {
  for (int i = static_cast<int>(idx.size()) - 1; i >= 0; --i) {
    const auto k = static_cast<std::size_t>(i);
    if (++idx[k] < radix[k]) return true;
    idx[k] = 0;
  }
  return false;
}

/// Reference one-step robust backup min_p p . (r(k, a, .) + lambda w).
inline double reference_backup(const TeamMarkovGame& g, const Eigen::VectorXd& w, int k, int a, double lambda) {
  double best = std::numeric_limits<double>::infinity();
  const auto& rows = g.uncertainty(k, a).candidates();
  for (Eigen::Index j = 0; j < rows.rows(); ++j) {
    double acc = 0.0;
    for (int l = 0; l < g.num_states(); ++l) acc += rows(j, l) * (g.payoff(k, a, l) + lambda * w(l));
    best = std::min(best, acc);
  }
  return best;
}

/// Dense value (I - lambda P)^{-1} r of one rule and one row choice, solved
/// with a full-pivot LU.
inline Eigen::VectorXd reference_policy_value(const TeamMarkovGame& g, const std::vector<int>& rule,
                                              const std::vector<int>& rows, double lambda) {
  const int m = g.num_states();
  Eigen::MatrixXd P(m, m);
  Eigen::VectorXd r(m);
  for (int s = 0; s < m; ++s) {
    const auto& cand = g.uncertainty(s, rule[static_cast<std::size_t>(s)]).candidates();
    P.row(s) = cand.row(rows[static_cast<std::size_t>(s)]);
    r(s) = P.row(s).dot(g.payoff(s).row(rule[static_cast<std::size_t>(s)]));
  }
  const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(m, m) - lambda * P;
  return A.fullPivLu().solve(r);
}

/// Worst-case value of a rule: componentwise min over every row choice.
inline Eigen::VectorXd reference_robust_value(const TeamMarkovGame& g, const std::vector<int>& rule, double lambda) {
  const int m = g.num_states();
  std::vector<int> radix(static_cast<std::size_t>(m));
  for (int s = 0; s < m; ++s) radix[static_cast<std::size_t>(s)] = g.uncertainty(s, rule[static_cast<std::size_t>(s)]).size();
  std::vector<int> rows(static_cast<std::size_t>(m), 0);
  Eigen::VectorXd best = Eigen::VectorXd::Constant(m, std::numeric_limits<double>::infinity());
  do {
    best = best.cwiseMin(reference_policy_value(g, rule, rows, lambda));
  } while (next_index(rows, radix));
  return best;
}

struct ReferenceOptimum {
  Eigen::VectorXd v_star;
  std::vector<std::vector<int>> rules;
  std::vector<Eigen::VectorXd> values;  // robust value per rule
};

/// Robust maximin value by exhaustive enumeration of rules and row choices.
inline ReferenceOptimum reference_optimum(const TeamMarkovGame& g, double lambda) {
  const int m = g.num_states();
  ReferenceOptimum out;
  out.v_star = Eigen::VectorXd::Constant(m, -std::numeric_limits<double>::infinity());
  std::vector<int> radix(static_cast<std::size_t>(m), g.num_joint_actions());
  std::vector<int> rule(static_cast<std::size_t>(m), 0);
  do {
    Eigen::VectorXd v = reference_robust_value(g, rule, lambda);
    out.v_star = out.v_star.cwiseMax(v);
    out.rules.push_back(rule);
    out.values.push_back(v);
  } while (next_index(rule, radix));
  return out;
}

inline Eigen::VectorXd random_vector(std::mt19937_64& rng, int m, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Eigen::VectorXd v(m);
  for (int i = 0; i < m; ++i) v(i) = u(rng);
  return v;
}

}  // namespace testing_support
