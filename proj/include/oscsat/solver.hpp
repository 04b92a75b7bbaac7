#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "oscsat/cnf.hpp"
#include "oscsat/dynamics.hpp"

namespace oscsat {

/// Calibrated on uf20 with seeds outside the acceptance set. Keep
/// coupling * M below about 2*pi: past that every oscillator locks to the
/// common feedback and all readouts agree.
inline constexpr DynamicsParams kDefaultDynamics{
    .coupling_g = 0.003, .steepness_beta = 10.0, .noise_sigma = 1.0, .dt = 0.01, .sign_convention = 1};

struct SolverConfig {
  DynamicsParams dynamics = kDefaultDynamics;
  /// Budget per trajectory, in oscillation periods.
  double max_cycles = 2000.0;
  int readout_samples_per_cycle = 8;
  int restarts = 10;
  std::uint64_t seed = 0;
  bool postprocess = true;
  int postprocess_max_iters = 20;
  double postprocess_subbudget_fraction = 0.5;
  /// Linear ramp of the noise amplitude down to zero over the budget.
  bool anneal = false;

  /// Throws std::invalid_argument on out-of-range fields.
  void validate() const;
};

struct TracePoint {
  double cycle = 0.0;
  std::size_t best_so_far = 0;

  friend bool operator==(const TracePoint&, const TracePoint&) = default;
};

struct SolveResult {
  Assignment best_assignment;
  std::size_t best_count = 0;
  /// Time at which best_count was first reached. When post-processing
  /// improved the result this includes the main trajectory and every
  /// sub-solve up to the improving one.
  double best_found_at_cycles = 0.0;
  std::vector<TracePoint> trace;
  int restarts_used = 0;
  int postprocess_iterations = 0;
  std::uint64_t rng_seed = 0;
  /// Cycles integrated by the winning trajectory.
  double cycles_simulated = 0.0;
  /// Cycles spent in post-processing sub-solves.
  double postprocess_cycles = 0.0;

  friend bool operator==(const SolveResult&, const SolveResult&) = default;
};

/// x_j = sin(2*pi*t + alpha_j) > 0.
[[nodiscard]] Assignment readout(const PhaseState& phases, double t_cycles);

/// One trajectory from uniformly random initial phases. Readouts are taken at
/// `readout_samples_per_cycle` evenly spaced instants per cycle and scored
/// exactly. Stops early once every clause is satisfied.
[[nodiscard]] SolveResult run_trajectory(const CnfFormula& formula, const SolverConfig& config,
                                         std::mt19937_64& rng);

/// Subproblem over the variables of the unsatisfied clauses.
struct ReductionState {
  /// Original 1-based indices of the active variables, ascending. Reduced
  /// variable r corresponds to active_variables[r - 1].
  std::vector<std::uint32_t> active_variables;
  /// Indexed by original variable - 1; meaningful only where is_fixed is set.
  Assignment fixed_values;
  std::vector<bool> is_fixed;
  std::size_t eliminated_satisfied_count = 0;
  CnfFormula reduced_formula;

  [[nodiscard]] std::uint32_t original_index(std::uint32_t reduced_index) const {
    return active_variables.at(reduced_index - 1);
  }
  /// Fixed values plus the reduced assignment mapped back.
  [[nodiscard]] Assignment expand(const Assignment& reduced_assignment) const;
};

[[nodiscard]] ReductionState reduce_problem(const CnfFormula& formula,
                                            const Assignment& assignment);

/// Iterated reduce-and-resolve. Never returns a worse result than `result`.
[[nodiscard]] SolveResult post_process(const CnfFormula& formula, const SolveResult& result,
                                       const SolverConfig& config);

/// Best of `restarts` trajectories, then optional post-processing.
/// Deterministic in (formula, config).
[[nodiscard]] SolveResult solve(const CnfFormula& formula, const SolverConfig& config);

/// Seed of the given restart's generator.
[[nodiscard]] std::uint64_t restart_seed(std::uint64_t seed, int restart);

}  // namespace oscsat
