#include "robustdp/bench.hpp"

#include "robustdp/oracle.hpp"

#include <json.hpp>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <atomic>
#include <chrono>
#include <thread>

namespace robustdp {

using json = nlohmann::ordered_json;

namespace {

json vector_json(const ValueFunction& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

// Runs fn(i) for i in [0, count) on up to `jobs` threads.
template <typename Fn>
void parallel_for(std::size_t count, int jobs, Fn&& fn) {
  const auto workers = static_cast<std::size_t>(std::max(1, jobs));
  if (workers == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < std::min(workers, count); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
}

}  // namespace

std::string result_to_json(const TeamMarkovGame& game, const RunConfig& config, const SolverResult& result) {
  const SolverParams& p = config.params;
  json cfg;
  cfg["game"] = config.game;
  cfg["algorithm"] = std::string(to_string(config.algorithm));
  cfg["lambda"] = p.lambda;
  cfg["epsilon"] = p.epsilon;
  cfg["delta"] = p.delta;
  cfg["inner_sweeps"] = p.inner_sweeps.describe();
  cfg["v0"] = p.init.describe();
  if (p.init.mode == InitMode::explicit_values) cfg["v0_values"] = vector_json(p.init.values);
  cfg["approx_mode"] = std::string(to_string(p.approx.mode()));
  cfg["approx_bound"] = p.approx.bound();
  cfg["approx_seed"] = p.approx.seed();
  cfg["argmax_lock"] = p.approx.argmax_lock();
  cfg["max_iterations"] = p.max_iterations;

  json doc;
  doc["algorithm"] = std::string(to_string(result.algorithm));
  doc["config"] = std::move(cfg);
  doc["terminated"] = result.terminated;
  doc["iterations"] = result.iterations;
  doc["final_residual"] = result.final_residual;
  json policy = json::array();
  for (int s = 0; s < game.num_states(); ++s) {
    json e;
    e["state"] = game.states()[static_cast<std::size_t>(s)];
    e["joint_action"] = result.policy(s);
    json names = json::array();
    const auto parts = game.decode_joint_action(result.policy(s));
    for (std::size_t i = 0; i < parts.size(); ++i) {
      names.push_back(game.player_actions()[i][static_cast<std::size_t>(parts[i])]);
    }
    e["actions"] = std::move(names);
    e["worst_row"] = result.worst_model(s);
    e["value"] = result.value(s);
    policy.push_back(std::move(e));
  }
  doc["policy"] = std::move(policy);
  doc["value"] = vector_json(result.value);
  json residuals = json::array();
  for (const auto& e : result.trace.entries) residuals.push_back(e.residual);
  doc["residuals"] = std::move(residuals);
  return doc.dump(2) + "\n";
}

std::string trace_to_csv(const TeamMarkovGame& game, const SolverResult& result) {
  std::string out = "t,algo,state,value\n";
  const auto algo = to_string(result.algorithm);
  for (const auto& e : result.trace.entries) {
    for (int s = 0; s < game.num_states(); ++s) {
      out += fmt::format("{},{},{},{}\n", e.t, algo, game.states()[static_cast<std::size_t>(s)], e.value(s));
    }
  }
  return out;
}

const BenchCell* BenchReport::matched(Algorithm algo, double lambda) const {
  for (const auto& c : cells) {
    if (c.matched && c.algorithm == algo && c.lambda == lambda) return &c;
  }
  return nullptr;
}

BenchReport run_table1(const BenchConfig& config) {
  BenchReport report;
  report.config = config;
  const TeamMarkovGame game = rssd::build_rssd(config.game);

  auto add_cell = [&](Algorithm algo, double lambda, int sweeps, bool matched) {
    BenchCell cell;
    cell.algorithm = algo;
    cell.lambda = lambda;
    cell.inner_sweeps = sweeps;
    cell.matched = matched;
    report.cells.push_back(cell);
  };
  for (double lambda : config.lambdas) {
    for (Algorithm algo : config.algorithms) {
      const bool evaluates = algo == Algorithm::ratpi || algo == Algorithm::rmpi;
      if (!evaluates) {
        add_cell(algo, lambda, 0, true);
        continue;
      }
      add_cell(algo, lambda, config.matched_sweeps, true);
      for (int m : config.sweep_grid) {
        if (m != config.matched_sweeps) add_cell(algo, lambda, m, false);
      }
    }
  }

  std::vector<std::optional<OracleResult>> oracles(config.lambdas.size());
  if (config.with_oracle) {
    parallel_for(config.lambdas.size(), config.jobs, [&](std::size_t i) {
      OracleOptions opts;
      opts.budget = config.budget;
      try {
        oracles[i] = brute_force_maximin(game, config.lambdas[i], opts);
      } catch (const BudgetExceeded& e) {
        spdlog::warn("bench: oracle skipped at lambda={}: {}", config.lambdas[i], e.what());
      }
    });
  }

  parallel_for(report.cells.size(), config.jobs, [&](std::size_t i) {
    BenchCell& cell = report.cells[i];
    SolverParams params;
    params.lambda = cell.lambda;
    params.epsilon = config.epsilon;
    params.delta = config.delta_fraction * max_delta(cell.lambda, config.epsilon);
    params.inner_sweeps = InnerSweepSchedule::constant(cell.inner_sweeps);
    params.init = config.init;
    params.approx = PerturbationOracle(config.approx_mode, cell.lambda * params.delta, config.approx_seed);
    cell.delta = params.delta;

    const auto start = std::chrono::steady_clock::now();
    try {
      const SolverResult result = solve(cell.algorithm, game, params);
      cell.iterations = result.iterations;
      cell.terminated = result.terminated;
      cell.final_residual = result.final_residual;
      for (std::size_t k = 0; k < config.lambdas.size(); ++k) {
        if (config.lambdas[k] == cell.lambda && oracles[k]) {
          const EpsilonReport eps =
              verify_epsilon_optimal(game, result.policy, cell.lambda, config.epsilon, *oracles[k]);
          cell.oracle_gap = eps.gap;
          cell.epsilon_optimal = eps.ok;
        }
      }
    } catch (const std::exception& e) {
      spdlog::error("bench: cell {} lambda={} M={} failed: {}", to_string(cell.algorithm), cell.lambda,
                    cell.inner_sweeps, e.what());
    }
    cell.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  });
  return report;
}

std::string bench_to_csv(const BenchReport& report) {
  const BenchConfig& c = report.config;
  std::string out =
      "algorithm,lambda,inner_sweeps,matched,epsilon,delta,v0,Z,approx_mode,approx_seed,iterations,terminated,"
      "final_residual,oracle_gap,epsilon_optimal\n";
  for (const auto& cell : report.cells) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", to_string(cell.algorithm), cell.lambda,
                       cell.inner_sweeps, cell.matched ? 1 : 0, c.epsilon, cell.delta, c.init.describe(),
                       c.game.threshold, to_string(c.approx_mode), c.approx_seed, cell.iterations,
                       cell.terminated ? 1 : 0, cell.final_residual,
                       cell.oracle_gap ? fmt::format("{}", *cell.oracle_gap) : std::string(),
                       cell.epsilon_optimal ? (*cell.epsilon_optimal ? "1" : "0") : "");
  }
  return out;
}

std::string bench_to_text(const BenchReport& report) {
  const BenchConfig& c = report.config;
  std::string out = fmt::format("Iterations to termination (epsilon={}, delta={} x bound, v0={}, Z={}, M={})\n",
                                c.epsilon, c.delta_fraction, c.init.describe(), c.game.threshold, c.matched_sweeps);
  out += fmt::format("{:<8}", "algo");
  for (double l : c.lambdas) out += fmt::format("{:>8}", l);
  out += '\n';
  for (Algorithm algo : c.algorithms) {
    out += fmt::format("{:<8}", to_string(algo));
    for (double l : c.lambdas) {
      const BenchCell* cell = report.matched(algo, l);
      out += cell ? fmt::format("{:>8}", cell->terminated ? fmt::format("{}", cell->iterations) : std::string("n/t"))
                  : fmt::format("{:>8}", "-");
    }
    out += '\n';
  }
  if (!c.sweep_grid.empty()) {
    out += "\nInner-sweep grid (rmpi / ratpi):\n";
    for (double l : c.lambdas) {
      out += fmt::format("  lambda={}:", l);
      for (const auto& cell : report.cells) {
        if (cell.lambda != l || cell.algorithm != Algorithm::rmpi) continue;
        for (const auto& other : report.cells) {
          if (other.lambda == l && other.algorithm == Algorithm::ratpi && other.inner_sweeps == cell.inner_sweeps) {
            out += fmt::format("  M={}: {}/{}", cell.inner_sweeps, cell.iterations, other.iterations);
          }
        }
      }
      out += '\n';
    }
  }
  bool any_oracle = false;
  for (const auto& cell : report.cells) any_oracle |= cell.oracle_gap.has_value();
  if (any_oracle) {
    double worst = 0.0;
    bool all_ok = true;
    for (const auto& cell : report.cells) {
      if (cell.oracle_gap) worst = std::max(worst, *cell.oracle_gap);
      if (cell.epsilon_optimal) all_ok = all_ok && *cell.epsilon_optimal;
    }
    out += fmt::format("\nOracle check: {} (max gap {})\n", all_ok ? "all policies epsilon-optimal" : "FAILED", worst);
  }
  return out;
}

TrajectoryExport export_trajectories(const TeamMarkovGame& game, const SolverParams& params) {
  TrajectoryExport out;
  out.ratvi = solve_ratvi(game, params);
  out.ratpi = solve_ratpi(game, params);

  out.trace_csv = trace_to_csv(game, out.ratvi);
  const std::string ratpi_rows = trace_to_csv(game, out.ratpi);
  out.trace_csv += ratpi_rows.substr(ratpi_rows.find('\n') + 1);

  const ValueFunction& terminal = out.ratpi.trace.entries.back().value;
  const SweepResult sweep = policy_improvement_sweep(game, terminal, params.lambda);
  out.lattice_csv = "state,joint_action,rho_final\n";
  for (int s = 0; s < game.num_states(); ++s) {
    for (int a = 0; a < game.num_joint_actions(); ++a) {
      out.lattice_csv += fmt::format("{},{},{}\n", game.states()[static_cast<std::size_t>(s)],
                                     game.joint_action_label(a), sweep.backups(s, a));
    }
  }
  return out;
}

}  // namespace robustdp
