#include "oscsat/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "oscsat/random.hpp"

namespace oscsat {

void SolverConfig::validate() const {
  dynamics.validate();
  if (!(max_cycles >= 1.0)) throw std::invalid_argument("max_cycles must be at least 1");
  if (readout_samples_per_cycle < 1) {
    throw std::invalid_argument("readout_samples_per_cycle must be at least 1");
  }
  if (restarts < 1) throw std::invalid_argument("restarts must be at least 1");
  if (postprocess_max_iters < 1) {
    throw std::invalid_argument("postprocess_max_iters must be at least 1");
  }
  if (!(postprocess_subbudget_fraction > 0.0) || postprocess_subbudget_fraction > 1.0) {
    throw std::invalid_argument("postprocess_subbudget_fraction must lie in (0, 1]");
  }
}

Assignment readout(const PhaseState& phases, double t_cycles) {
  Assignment out(phases.alphas.size());
  const double carrier = kTwoPi * t_cycles;
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = std::sin(carrier + phases.alphas[j]) > 0.0;
  }
  return out;
}

std::uint64_t restart_seed(std::uint64_t seed, int restart) {
  return mix_seed(seed ^ mix_seed(static_cast<std::uint64_t>(restart) + 1));
}

SolveResult run_trajectory(const CnfFormula& formula, const SolverConfig& config,
                           std::mt19937_64& rng) {
  config.validate();
  const std::size_t n = formula.num_variables();
  const std::size_t m = formula.num_clauses();
  OscillatorNetwork network(formula);

  PhaseState phases;
  phases.alphas.resize(n);
  for (double& alpha : phases.alphas) alpha = kTwoPi * uniform_unit(rng);

  SolveResult result;
  result.restarts_used = 1;
  result.best_assignment = Assignment(n, false);
  result.best_count = count_satisfied(formula, result.best_assignment);
  bool scored = false;

  const double dt = config.dynamics.dt;
  const auto total_steps = static_cast<std::int64_t>(std::llround(config.max_cycles / dt));
  const double samples_per_cycle = config.readout_samples_per_cycle;
  std::int64_t next_sample = 0;
  double next_trace_cycle = 1.0;

  auto take_sample = [&](double t) {
    Assignment candidate = readout(phases, t);
    const std::size_t count = count_satisfied(formula, candidate);
    if (!scored || count > result.best_count) {
      result.best_count = count;
      result.best_assignment = std::move(candidate);
      result.best_found_at_cycles = t;
      scored = true;
    }
  };

  DynamicsParams params = config.dynamics;
  NormalSource normal;
  std::vector<double> noise(n);

  take_sample(0.0);
  next_sample = 1;
  result.trace.push_back(TracePoint{0.0, result.best_count});

  std::int64_t step = 0;
  while (result.best_count < m && step < total_steps) {
    if (config.anneal) {
      params.noise_sigma =
          config.dynamics.noise_sigma * (1.0 - static_cast<double>(step) / total_steps);
    }
    for (double& z : noise) z = normal(rng);
    network.step(phases, params, noise);
    ++step;
    phases.cycles_elapsed = static_cast<double>(step) * dt;

    const double now = phases.cycles_elapsed + 1e-12;
    while (static_cast<double>(next_sample) / samples_per_cycle <= now) {
      take_sample(static_cast<double>(next_sample) / samples_per_cycle);
      ++next_sample;
      if (result.best_count == m) break;
    }
    if (phases.cycles_elapsed + 1e-12 >= next_trace_cycle) {
      result.trace.push_back(TracePoint{next_trace_cycle, result.best_count});
      next_trace_cycle += 1.0;
    }
  }
  result.cycles_simulated = static_cast<double>(step) * dt;
  if (result.trace.back().cycle < result.cycles_simulated) {
    // Early exit inside a cycle: close the trace at the end of that cycle.
    result.trace.push_back(TracePoint{std::ceil(result.cycles_simulated - 1e-12),
                                      result.best_count});
  } else if (result.trace.back().best_so_far != result.best_count) {
    result.trace.back().best_so_far = result.best_count;
  }
  return result;
}

Assignment ReductionState::expand(const Assignment& reduced_assignment) const {
  if (reduced_assignment.size() != active_variables.size()) {
    throw CnfError("reduced assignment has wrong length");
  }
  Assignment out = fixed_values;
  for (std::size_t r = 0; r < active_variables.size(); ++r) {
    out[active_variables[r] - 1] = reduced_assignment[r];
  }
  return out;
}

ReductionState reduce_problem(const CnfFormula& formula, const Assignment& assignment) {
  const std::uint32_t n = formula.num_variables();
  if (assignment.size() != n) throw CnfError("assignment length does not match formula");

  std::vector<bool> active(n, false);
  for (const Clause& clause : formula.clauses()) {
    if (!clause_satisfied(clause, assignment)) {
      for (const Literal& lit : clause) active[lit.variable - 1] = true;
    }
  }

  ReductionState state;
  state.fixed_values = assignment;
  state.is_fixed.assign(n, true);
  std::vector<std::uint32_t> reduced_index(n, 0);
  for (std::uint32_t v = 0; v < n; ++v) {
    if (active[v]) {
      state.active_variables.push_back(v + 1);
      reduced_index[v] = static_cast<std::uint32_t>(state.active_variables.size());
      state.is_fixed[v] = false;
      state.fixed_values[v] = false;
    }
  }

  std::vector<Clause> kept;
  for (const Clause& clause : formula.clauses()) {
    const bool fixed_true = std::any_of(clause.begin(), clause.end(), [&](const Literal& lit) {
      return !active[lit.variable - 1] && literal_true(lit, assignment);
    });
    if (fixed_true) {
      ++state.eliminated_satisfied_count;
      continue;
    }
    // Remaining literals over fixed variables are false and drop out. A clause
    // left with nothing stays as an always-false marker.
    Clause reduced;
    for (const Literal& lit : clause) {
      if (active[lit.variable - 1]) {
        reduced.push_back(Literal{reduced_index[lit.variable - 1], lit.negated});
      }
    }
    kept.push_back(std::move(reduced));
  }
  state.reduced_formula =
      CnfFormula(static_cast<std::uint32_t>(state.active_variables.size()), std::move(kept));
  return state;
}

SolveResult post_process(const CnfFormula& formula, const SolveResult& result,
                         const SolverConfig& config) {
  SolveResult incumbent = result;
  SolverConfig sub_config = config;
  sub_config.max_cycles = std::max(1.0, config.max_cycles * config.postprocess_subbudget_fraction);
  sub_config.restarts = 1;

  const double main_cycles = result.cycles_simulated;
  std::size_t previous_active = formula.num_variables();
  for (int iter = 0; iter < config.postprocess_max_iters; ++iter) {
    const ReductionState reduction = reduce_problem(formula, incumbent.best_assignment);
    const std::size_t active = reduction.active_variables.size();
    if (active == 0 || active >= previous_active) break;
    previous_active = active;

    std::mt19937_64 rng(mix_seed(result.rng_seed ^ mix_seed(0x5eedULL + iter)));
    SolveResult sub;
    try {
      sub = run_trajectory(reduction.reduced_formula, sub_config, rng);
    } catch (const NonFiniteError&) {
      break;
    }
    ++incumbent.postprocess_iterations;
    const double offset = main_cycles + incumbent.postprocess_cycles;
    incumbent.postprocess_cycles += sub.cycles_simulated;

    Assignment merged = reduction.expand(sub.best_assignment);
    const std::size_t count = count_satisfied(formula, merged);
    if (count < incumbent.best_count) continue;
    if (count > incumbent.best_count) {
      incumbent.best_found_at_cycles = offset + sub.best_found_at_cycles;
      incumbent.trace.push_back(TracePoint{incumbent.best_found_at_cycles, count});
    }
    incumbent.best_count = count;
    incumbent.best_assignment = std::move(merged);
  }
  return incumbent;
}

SolveResult solve(const CnfFormula& formula, const SolverConfig& config) {
  config.validate();
  SolveResult best;
  bool have_best = false;
  int attempted = 0;
  for (int r = 0; r < config.restarts; ++r) {
    const std::uint64_t seed = restart_seed(config.seed, r);
    std::mt19937_64 rng(seed);
    ++attempted;
    SolveResult candidate;
    try {
      candidate = run_trajectory(formula, config, rng);
    } catch (const NonFiniteError&) {
      continue;
    }
    candidate.rng_seed = seed;
    const bool better = !have_best || candidate.best_count > best.best_count ||
                        (candidate.best_count == best.best_count &&
                         candidate.best_found_at_cycles < best.best_found_at_cycles);
    if (better) {
      best = std::move(candidate);
      have_best = true;
    }
    if (best.best_count == formula.num_clauses()) break;
  }
  if (!have_best) {
    throw NonFiniteError("all " + std::to_string(attempted) +
                         " restarts diverged; reduce coupling or dt");
  }
  best.restarts_used = attempted;
  if (config.postprocess && best.best_count < formula.num_clauses()) {
    best = post_process(formula, best, config);
  }
  return best;
}

}  // namespace oscsat
