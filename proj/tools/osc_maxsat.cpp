// osc_maxsat: command-line front end for the oscillator MaxSAT solver.
//
// Exit codes: 0 success, 10 every clause satisfied (solve/oracle), 1 error.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oscsat/bench.hpp"
#include "oscsat/cnf.hpp"
#include "oscsat/config.hpp"
#include "oscsat/solver.hpp"

namespace {

using namespace oscsat;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitAllSatisfied = 10;

struct SolverFlags {
  std::optional<std::string> config_path;
  std::optional<double> max_cycles;
  std::optional<double> dt;
  std::optional<double> coupling;
  std::optional<double> beta;
  std::optional<double> sigma;
  std::optional<int> restarts;
  std::optional<std::uint64_t> seed;
  std::optional<int> sign;
  std::optional<int> samples_per_cycle;
  bool no_postprocess = false;
  bool anneal = false;
};

void add_solver_flags(CLI::App* cmd, SolverFlags& f) {
  cmd->add_option("--config", f.config_path,
                  "key=value config file (falls back to $OSC_MAXSAT_CONFIG)");
  cmd->add_option("--max-cycles", f.max_cycles, "budget per trajectory, in oscillation periods");
  cmd->add_option("--dt", f.dt, "integration step, in periods (<= 0.1)");
  cmd->add_option("--coupling", f.coupling, "feedback coupling (PPV amplitude x gain)");
  cmd->add_option("--beta", f.beta, "tanh steepness of the buffered outputs");
  cmd->add_option("--sigma", f.sigma, "white-noise amplitude, rad per sqrt(period)");
  cmd->add_option("--restarts", f.restarts, "independent trajectories");
  cmd->add_option("--seed", f.seed, "random seed");
  cmd->add_option("--sign", f.sign, "drift sign, +1 or -1");
  cmd->add_option("--samples-per-cycle", f.samples_per_cycle, "readouts per period");
  cmd->add_flag("--no-postprocess", f.no_postprocess, "skip the reduce-and-resolve loop");
  cmd->add_flag("--anneal", f.anneal, "ramp the noise linearly to zero over the budget");
}

// Precedence: flags > --config > $OSC_MAXSAT_CONFIG > built-in defaults.
SolverConfig resolve_config(const SolverFlags& f) {
  SolverConfig config;
  if (f.config_path) {
    apply_config_file(config, *f.config_path);
  } else if (const char* env = std::getenv("OSC_MAXSAT_CONFIG"); env && *env) {
    apply_config_file(config, env);
  }
  if (f.max_cycles) config.max_cycles = *f.max_cycles;
  if (f.dt) config.dynamics.dt = *f.dt;
  if (f.coupling) config.dynamics.coupling_g = *f.coupling;
  if (f.beta) config.dynamics.steepness_beta = *f.beta;
  if (f.sigma) config.dynamics.noise_sigma = *f.sigma;
  if (f.restarts) config.restarts = *f.restarts;
  if (f.seed) config.seed = *f.seed;
  if (f.sign) config.dynamics.sign_convention = *f.sign;
  if (f.samples_per_cycle) config.readout_samples_per_cycle = *f.samples_per_cycle;
  if (f.no_postprocess) config.postprocess = false;
  if (f.anneal) config.anneal = true;
  config.validate();
  return config;
}

CnfFormula load_formula(const std::string& path, int verbosity) {
  std::vector<DimacsWarning> warnings;
  CnfFormula formula = read_dimacs_file(path, &warnings);
  if (verbosity >= 0) {
    for (const DimacsWarning& w : warnings) {
      std::cerr << "warning: " << path << ":" << w.line << ": " << w.message << "\n";
    }
  }
  return formula;
}

void print_solution(std::size_t best, std::size_t m, const Assignment& assignment) {
  std::cout << "s " << best << "/" << m << "\n";
  std::cout << "v";
  for (std::size_t j = 0; j < assignment.size(); ++j) {
    std::cout << ' ' << (assignment[j] ? "" : "-") << (j + 1);
  }
  std::cout << " 0\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Oscillator-network MaxSAT solver"};
  app.require_subcommand(1);
  int verbose = 0;
  bool quiet = false;
  app.add_flag("-v,--verbose", verbose, "more diagnostics on stderr");
  app.add_flag("-q,--quiet", quiet, "no diagnostics on stderr");

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "solve a DIMACS CNF file");
  std::string solve_path;
  SolverFlags solve_flags;
  solve_cmd->add_option("cnf", solve_path, "input file")->required();
  add_solver_flags(solve_cmd, solve_flags);

  // oracle
  auto* oracle_cmd = app.add_subcommand("oracle", "exact optimum by exhaustive enumeration");
  std::string oracle_path;
  std::uint32_t oracle_cap = kDefaultOracleCap;
  oracle_cmd->add_option("cnf", oracle_path, "input file")->required();
  oracle_cmd->add_option("--cap", oracle_cap, "largest N to enumerate");

  // gen
  auto* gen_cmd = app.add_subcommand("gen", "write a uniform random k-SAT instance");
  std::uint32_t gen_n = 0;
  std::size_t gen_m = 0;
  std::uint32_t gen_k = 3;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen_cmd->add_option("-n,--vars", gen_n, "variables")->required();
  gen_cmd->add_option("-m,--clauses", gen_m, "clauses")->required();
  gen_cmd->add_option("-k,--width", gen_k, "literals per clause");
  gen_cmd->add_option("--seed", gen_seed, "generator seed");
  gen_cmd->add_option("-o,--out", gen_out, "output file (stdout when omitted)");

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "solve every .cnf in a directory and report");
  std::string bench_dir;
  std::optional<std::string> bench_sidecar;
  std::vector<double> frequencies;
  std::string format = "csv";
  std::optional<std::string> bench_out;
  std::optional<std::string> traces_dir;
  unsigned jobs = 1;
  std::uint32_t bench_cap = kDefaultOracleCap;
  SolverFlags bench_flags;
  bench_cmd->add_option("dataset", bench_dir, "directory of .cnf files")->required();
  bench_cmd->add_option("--sidecar", bench_sidecar, "best-known file: '<filename> <count>' lines");
  bench_cmd->add_option("--frequency", frequencies, "oscillator frequency in Hz (repeatable)");
  bench_cmd->add_option("--format", format, "report format")->check(CLI::IsMember({"csv", "json"}));
  bench_cmd->add_option("--out", bench_out, "report destination (stdout when omitted)");
  bench_cmd->add_option("--traces", traces_dir, "directory for per-instance trace files");
  bench_cmd->add_option("--jobs", jobs, "instances solved concurrently");
  bench_cmd->add_option("--oracle-cap", bench_cap, "largest N for oracle best-known values");
  add_solver_flags(bench_cmd, bench_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }
  const int verbosity = quiet ? -1 : verbose;

  try {
    if (*solve_cmd) {
      const SolverConfig config = resolve_config(solve_flags);
      const CnfFormula formula = load_formula(solve_path, verbosity);
      if (verbosity > 0) std::cerr << config_to_text(config);
      const SolveResult result = solve(formula, config);
      print_solution(result.best_count, formula.num_clauses(), result.best_assignment);
      std::cout << "cycles_to_best " << result.best_found_at_cycles << "\n";
      std::cout << "seed " << config.seed << "\n";
      return result.best_count == formula.num_clauses() ? kExitAllSatisfied : kExitOk;
    }
    if (*oracle_cmd) {
      const CnfFormula formula = load_formula(oracle_path, verbosity);
      const OracleResult result = brute_force_maxsat(formula, oracle_cap);
      print_solution(result.best_count, formula.num_clauses(), result.witness);
      return result.best_count == formula.num_clauses() ? kExitAllSatisfied : kExitOk;
    }
    if (*gen_cmd) {
      const CnfFormula formula = generate_random_ksat(gen_n, gen_m, gen_k, gen_seed);
      if (gen_out.empty()) {
        std::cout << serialize_dimacs(formula);
      } else {
        write_dimacs_file(formula, gen_out);
      }
      return kExitOk;
    }
    if (*bench_cmd) {
      const SolverConfig config = resolve_config(bench_flags);
      if (frequencies.empty()) frequencies = {1e6, 5e4};
      const auto records = load_dataset(bench_dir, bench_sidecar, bench_cap);
      const BenchReport report = run_benchmark(records, config, frequencies, jobs);
      const ReportFormat fmt = format == "json" ? ReportFormat::json : ReportFormat::csv;
      if (bench_out) {
        emit_report(report, fmt, *bench_out);
      } else {
        emit_report(report, fmt, std::cout);
      }
      if (traces_dir) write_trace_files(report, *traces_dir);
      // Keep stdout a clean report when it carries one.
      (bench_out ? std::cout : std::cerr) << summary_line(report) << "\n";
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
