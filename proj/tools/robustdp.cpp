#include "robustdp/bench.hpp"
#include "robustdp/game_io.hpp"
#include "robustdp/oracle.hpp"
#include "robustdp/rssd.hpp"
#include "robustdp/solvers.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace rd = robustdp;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitNotTerminated = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("robustdp");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("ROBUSTDP_LOG")) spdlog::set_level(spdlog::level::from_str(env));
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(fmt::format("cannot open {} for writing", path));
  out << content;
  if (!out) throw InputError(fmt::format("failed writing {}", path));
}

// Writes to path, or to stdout when path is empty.
void emit(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
  } else {
    write_file(path, content);
  }
}

std::vector<int> parse_int_list(const std::string& text, const char* flag) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError(fmt::format("{}: '{}' is not an integer", flag, item));
    }
  }
  if (out.empty()) throw InputError(fmt::format("{}: empty list", flag));
  return out;
}

rd::ValueFunction read_value_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("--v0: cannot read {}", path));
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  std::vector<double> values;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') {
    try {
      values = json::parse(text).get<std::vector<double>>();
    } catch (const json::exception& e) {
      throw InputError(fmt::format("--v0: {}: {}", path, e.what()));
    }
  } else {
    for (char& ch : text) {
      if (ch == ',') ch = ' ';
    }
    std::stringstream ss(text);
    std::string tok;
    while (ss >> tok) {
      try {
        values.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw InputError(fmt::format("--v0: {}: '{}' is not a number", path, tok));
      }
    }
  }
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

rd::InitialValue parse_v0(const std::string& spec) {
  if (spec == "remark1") return rd::InitialValue::payoff_lower_bound();
  if (spec == "zeros") return rd::InitialValue::zeros();
  if (spec.rfind("file:", 0) == 0) return rd::InitialValue::from(read_value_file(spec.substr(5)));
  throw InputError(fmt::format("--v0: expected remark1, zeros or file:PATH, got '{}'", spec));
}

rd::PerturbationMode parse_mode(const std::string& name) {
  if (auto m = rd::parse_perturbation_mode(name)) return *m;
  throw InputError(fmt::format("--approx-mode: unknown mode '{}'", name));
}

// Options shared by the solver-running subcommands.
struct SolveOptions {
  std::string game;
  std::string algo = "ratpi";
  double lambda = 0.97;
  double epsilon = 1e-5;
  std::optional<double> delta;
  std::string mt = "5";
  std::string v0 = "remark1";
  std::string approx_mode = "identity";
  std::uint64_t approx_seed = 0;
  bool argmax_lock = false;
  int max_iterations = 1'000'000;
  int threshold = 2;
  std::string trace;
  std::string out;
};

void add_solver_flags(CLI::App* cmd, SolveOptions& o) {
  cmd->add_option("--lambda", o.lambda, "Discount factor in [0, 1)")->capture_default_str();
  cmd->add_option("--epsilon", o.epsilon, "Target accuracy")->capture_default_str();
  cmd->add_option("--delta", o.delta, "Approximation tolerance (default: 0.99 of its upper bound)");
  cmd->add_option("--mt", o.mt, "Inner sweeps: integer or comma list per iteration")->capture_default_str();
  cmd->add_option("--v0", o.v0, "Initial value: remark1, zeros or file:PATH")->capture_default_str();
  cmd->add_option("--approx-mode", o.approx_mode, "identity, uniform_noise or adversarial_extremes")
      ->capture_default_str();
  cmd->add_option("--approx-seed,--seed", o.approx_seed, "Seed of the perturbation stream")->capture_default_str();
  cmd->add_flag("--argmax-lock", o.argmax_lock, "Select actions from exact backups, perturb values only");
  cmd->add_option("--max-iterations", o.max_iterations, "Outer iteration cap")->capture_default_str();
  cmd->add_option("--Z", o.threshold, "Stag-hunt threshold of the built-in instance")->capture_default_str();
}

rd::TeamMarkovGame load_or_build(const std::string& path, int threshold) {
  if (path.empty()) {
    rd::rssd::RssdParams p;
    p.threshold = threshold;
    return rd::rssd::build_rssd(p);
  }
  return rd::load_game(path);
}

rd::SolverParams make_params(const SolveOptions& o, const rd::TeamMarkovGame& game) {
  rd::SolverParams p;
  p.lambda = o.lambda;
  p.epsilon = o.epsilon;
  p.delta = o.delta.value_or(0.99 * rd::max_delta(o.lambda, o.epsilon));
  const auto sweeps = parse_int_list(o.mt, "--mt");
  p.inner_sweeps = sweeps.size() == 1 ? rd::InnerSweepSchedule::constant(sweeps[0]) : rd::InnerSweepSchedule::list(sweeps);
  p.init = parse_v0(o.v0);
  p.max_iterations = o.max_iterations;
  p.approx = rd::PerturbationOracle(parse_mode(o.approx_mode), o.lambda * p.delta, o.approx_seed, o.argmax_lock);
  rd::validate_params(p);
  p.init.resolve(game, p.lambda);  // reject a mismatched v0 before solving
  return p;
}

int cmd_solve(const SolveOptions& o) {
  const auto algo = rd::parse_algorithm(o.algo);
  if (!algo) throw InputError(fmt::format("--algo: unknown algorithm '{}'", o.algo));
  const rd::TeamMarkovGame game = load_or_build(o.game, o.threshold);
  const rd::SolverParams params = make_params(o, game);

  const rd::SolverResult result = rd::solve(*algo, game, params);
  const rd::RunConfig config{o.game.empty() ? fmt::format("rssd:Z={}", o.threshold) : o.game, *algo, params};
  emit(o.out, rd::result_to_json(game, config, result));
  if (!o.trace.empty()) write_file(o.trace, rd::trace_to_csv(game, result));
  if (!result.terminated) {
    spdlog::warn("{} did not terminate within {} iterations (residual {})", o.algo, params.max_iterations,
                 result.final_residual);
    return kExitNotTerminated;
  }
  spdlog::info("{} terminated after {} iterations", o.algo, result.iterations);
  return kExitOk;
}

struct RssdGenOptions {
  int n = 3;
  double c = 1.0;
  int threshold = 2;
  std::vector<double> mu = {0.1, 0.2, 0.3};
  std::vector<double> synergy = {1.5, 1.8, 2.2};
  std::vector<double> benefit = {1.5, 1.8, 2.2};
  std::string out;
};

int cmd_rssd_gen(const RssdGenOptions& o) {
  rd::rssd::RssdParams p;
  p.n = o.n;
  p.c = o.c;
  p.threshold = o.threshold;
  p.mu = o.mu;
  p.synergy = o.synergy;
  p.benefit = o.benefit;
  if (auto errors = rd::rssd::validate(p); !errors.empty()) {
    std::string msg = "invalid RSSD parameters:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw InputError(msg);
  }
  const auto report = rd::rssd::check_dilemma_conditions(p);
  for (const auto& v : report.violations) {
    spdlog::warn("dilemma condition {} fails at s{} -> s{}: {}", v.condition, v.state + 1, v.next_state + 1, v.detail);
  }
  emit(o.out, rd::game_to_json(rd::rssd::build_rssd(p)));
  return kExitOk;
}

struct BenchOptions {
  std::vector<double> lambdas = {0.95, 0.96, 0.97, 0.98, 0.99};
  double epsilon = 1e-5;
  double delta_fraction = 0.99;
  int matched = 50;
  std::string grid = "1,3,5,10";
  std::string v0 = "remark1";
  int threshold = 2;
  std::string approx_mode = "identity";
  std::uint64_t approx_seed = 0;
  bool no_oracle = false;
  std::uint64_t budget = rd::kDefaultEnumerationBudget;
  int jobs = 1;
  std::string out;
  std::string table;
};

int cmd_bench(const BenchOptions& o) {
  rd::BenchConfig c;
  c.lambdas = o.lambdas;
  c.epsilon = o.epsilon;
  c.delta_fraction = o.delta_fraction;
  c.matched_sweeps = o.matched;
  c.sweep_grid = o.grid.empty() ? std::vector<int>{} : parse_int_list(o.grid, "--mt-grid");
  c.init = parse_v0(o.v0);
  c.game.threshold = o.threshold;
  c.approx_mode = parse_mode(o.approx_mode);
  c.approx_seed = o.approx_seed;
  c.with_oracle = !o.no_oracle;
  c.budget = o.budget;
  c.jobs = o.jobs;
  if (!(o.delta_fraction >= 0.0 && o.delta_fraction < 1.0)) throw InputError("--delta-fraction must lie in [0, 1)");
  if (auto errors = rd::rssd::validate(c.game); !errors.empty()) throw InputError(errors.front());

  const rd::BenchReport report = rd::run_table1(c);
  if (!o.out.empty()) write_file(o.out, rd::bench_to_csv(report));
  emit(o.table, rd::bench_to_text(report));
  for (const auto& cell : report.cells) {
    if (!cell.terminated) return kExitNotTerminated;
  }
  return kExitOk;
}

int cmd_trace(const SolveOptions& o, const std::string& rho_out) {
  const rd::TeamMarkovGame game = load_or_build(o.game, o.threshold);
  const rd::SolverParams params = make_params(o, game);
  const rd::TrajectoryExport ex = rd::export_trajectories(game, params);
  emit(o.out, ex.trace_csv);
  std::string rho_path = rho_out;
  if (rho_path.empty() && !o.out.empty()) rho_path = o.out + ".rho.csv";
  if (rho_path.empty()) {
    std::cout << '\n' << ex.lattice_csv;
  } else {
    write_file(rho_path, ex.lattice_csv);
  }
  return ex.ratvi.terminated && ex.ratpi.terminated ? kExitOk : kExitNotTerminated;
}

struct OracleCliOptions {
  std::string game;
  double lambda = 0.97;
  std::uint64_t budget = rd::kDefaultEnumerationBudget;
  bool enumerate_models = false;
  int threshold = 2;
  std::string out;
};

int cmd_oracle(const OracleCliOptions& o) {
  const rd::TeamMarkovGame game = load_or_build(o.game, o.threshold);
  if (!(o.lambda >= 0.0 && o.lambda < 1.0)) throw InputError(fmt::format("--lambda = {} not in [0, 1)", o.lambda));
  rd::OracleOptions opts;
  opts.budget = o.budget;
  opts.inner = o.enumerate_models ? rd::InnerMinimization::enumeration : rd::InnerMinimization::fixed_point;
  const rd::OracleResult r = rd::brute_force_maximin(game, o.lambda, opts);

  json doc;
  doc["game"] = o.game.empty() ? fmt::format("rssd:Z={}", o.threshold) : o.game;
  doc["lambda"] = o.lambda;
  doc["rules_evaluated"] = r.rules_evaluated;
  doc["dominance_ok"] = r.dominance_ok;
  doc["dominance_gap"] = r.dominance_gap;
  json policy = json::array();
  for (int s = 0; s < game.num_states(); ++s) {
    policy.push_back({{"state", game.states()[static_cast<std::size_t>(s)]},
                      {"joint_action", r.d_star(s)},
                      {"label", game.joint_action_label(r.d_star(s))},
                      {"value", r.v_star(s)}});
  }
  doc["policy"] = std::move(policy);
  emit(o.out, doc.dump(2) + "\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Robust team Markov game solvers"};
  app.require_subcommand(1);

  SolveOptions solve_opts;
  auto* solve = app.add_subcommand("solve", "Solve a game file and write the result JSON");
  solve->add_option("--game", solve_opts.game, "Game JSON (default: built-in social dilemma instance)");
  solve->add_option("--algo", solve_opts.algo, "ratpi, ratvi, rvi or rmpi")->capture_default_str();
  add_solver_flags(solve, solve_opts);
  solve->add_option("--trace", solve_opts.trace, "Write the per-iteration trace CSV here");
  solve->add_option("--out", solve_opts.out, "Result JSON path (default: stdout)");

  RssdGenOptions gen_opts;
  auto* gen = app.add_subcommand("rssd-gen", "Write a social dilemma game file");
  gen->add_option("--n", gen_opts.n, "Number of players")->capture_default_str();
  gen->add_option("--c", gen_opts.c, "Contribution cost")->capture_default_str();
  gen->add_option("--Z", gen_opts.threshold, "Stag-hunt threshold")->capture_default_str();
  gen->add_option("--mu", gen_opts.mu, "Uncertainty magnitudes, one candidate row each")->delimiter(',');
  gen->add_option("--synergy", gen_opts.synergy, "Synergy factor per state")->delimiter(',');
  gen->add_option("--benefit", gen_opts.benefit, "Snowdrift benefit per state")->delimiter(',');
  gen->add_option("--out", gen_opts.out, "Output path (default: stdout)");

  BenchOptions bench_opts;
  auto* bench = app.add_subcommand("bench-table1", "Iteration counts of all algorithms over the lambda grid");
  bench->add_option("--lambdas", bench_opts.lambdas, "Discount factors")->delimiter(',');
  bench->add_option("--epsilon", bench_opts.epsilon, "Target accuracy")->capture_default_str();
  bench->add_option("--delta-fraction", bench_opts.delta_fraction, "delta as a fraction of its upper bound")
      ->capture_default_str();
  bench->add_option("--mt", bench_opts.matched, "Inner sweeps of the headline rmpi/ratpi comparison")
      ->capture_default_str();
  bench->add_option("--mt-grid", bench_opts.grid, "Extra inner-sweep counts (comma list, empty for none)")
      ->capture_default_str();
  bench->add_option("--v0", bench_opts.v0, "Initial value: remark1, zeros or file:PATH")->capture_default_str();
  bench->add_option("--Z", bench_opts.threshold, "Stag-hunt threshold")->capture_default_str();
  bench->add_option("--approx-mode", bench_opts.approx_mode, "Perturbation mode")->capture_default_str();
  bench->add_option("--approx-seed,--seed", bench_opts.approx_seed, "Perturbation seed")->capture_default_str();
  bench->add_flag("--no-oracle", bench_opts.no_oracle, "Skip the exhaustive optimality check");
  bench->add_option("--budget", bench_opts.budget, "Enumeration budget of the oracle")->capture_default_str();
  bench->add_option("--jobs", bench_opts.jobs, "Cells run concurrently")->capture_default_str();
  bench->add_option("--out", bench_opts.out, "CSV with one row per cell");
  bench->add_option("--table", bench_opts.table, "Text table path (default: stdout)");

  SolveOptions trace_opts;
  trace_opts.mt = "50";
  std::string rho_out;
  auto* trace = app.add_subcommand("trace-fig1", "Value trajectories of ratvi and ratpi plus final backups");
  trace->add_option("--game", trace_opts.game, "Game JSON (default: built-in social dilemma instance)");
  add_solver_flags(trace, trace_opts);
  trace->add_option("--out", trace_opts.out, "Trajectory CSV path (default: stdout)");
  trace->add_option("--rho-out", rho_out, "Final backup table path (default: <out>.rho.csv)");

  OracleCliOptions oracle_opts;
  auto* oracle = app.add_subcommand("oracle", "Exhaustive maximin over all decision rules");
  oracle->add_option("--game", oracle_opts.game, "Game JSON (default: built-in social dilemma instance)");
  oracle->add_option("--lambda", oracle_opts.lambda, "Discount factor")->capture_default_str();
  oracle->add_option("--budget", oracle_opts.budget, "Enumeration budget")->capture_default_str();
  oracle->add_flag("--enumerate-models", oracle_opts.enumerate_models,
                   "Evaluate each rule over every admissible matrix instead of the row-wise fixed point");
  oracle->add_option("--Z", oracle_opts.threshold, "Stag-hunt threshold of the built-in instance")
      ->capture_default_str();
  oracle->add_option("--out", oracle_opts.out, "Output JSON path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInputError;
  }

  try {
    if (*solve) return cmd_solve(solve_opts);
    if (*gen) return cmd_rssd_gen(gen_opts);
    if (*bench) return cmd_bench(bench_opts);
    if (*trace) return cmd_trace(trace_opts, rho_out);
    if (*oracle) return cmd_oracle(oracle_opts);
  } catch (const rd::GameFormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
  } catch (const rd::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
  } catch (const rd::InvalidParams& e) {
    std::cerr << "error: " << e.what() << '\n';
  } catch (const rd::BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "; raise --budget\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return kExitInputError;
}
