#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "oscsat/random.hpp"
#include "oscsat/solver.hpp"
#include "test_support.hpp"

using namespace oscsat;
using std::numbers::pi;

namespace {

Literal pos(std::uint32_t v) { return Literal{v, false}; }
Literal neg(std::uint32_t v) { return Literal{v, true}; }

// (x1 v x2)(x3)(-x3 v x1)
CnfFormula small_example() { return CnfFormula(3, {{pos(1), pos(2)}, {pos(3)}, {neg(3), pos(1)}}); }

SolverConfig quick_config() {
  SolverConfig c;
  c.max_cycles = 40;
  c.restarts = 2;
  c.dynamics.noise_sigma = 1.0;
  c.dynamics.coupling_g = 0.001;
  return c;
}

// Set-based restatement of the reduction rules.
struct RefReduction {
  std::set<std::uint32_t> active;
  std::size_t eliminated = 0;
  std::vector<std::vector<std::int64_t>> kept;  // original DIMACS literals
};

RefReduction reference_reduce(const CnfFormula& f, const Assignment& a) {
  RefReduction r;
  for (const Clause& c : f.clauses()) {
    if (!clause_satisfied(c, a)) {
      for (const Literal& l : c) r.active.insert(l.variable);
    }
  }
  for (const Clause& c : f.clauses()) {
    bool eliminated = false;
    std::vector<std::int64_t> rest;
    for (const Literal& l : c) {
      if (r.active.count(l.variable)) {
        rest.push_back(l.to_dimacs());
      } else if (literal_true(l, a)) {
        eliminated = true;
      }
    }
    if (eliminated) {
      ++r.eliminated;
    } else {
      r.kept.push_back(rest);
    }
  }
  return r;
}

}  // namespace

TEST_CASE("readout") {
  CHECK(readout(PhaseState{{0.0, pi}, 0.0}, 0.25) == Assignment{true, false});
  CHECK(readout(PhaseState{{0.0, pi}, 0.0}, 0.75) == Assignment{false, true});
  const PhaseState same{{1.0, 1.0, 1.0}, 0.0};
  for (double t : {0.0, 0.1, 0.35, 0.6, 0.9}) {
    const Assignment a = readout(same, t);
    CHECK(std::all_of(a.begin(), a.end(), [&](bool v) { return v == a[0]; }));
  }
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    PhaseState s{std::vector<double>(7), 0.0};
    for (double& a : s.alphas) a = 20.0 * uniform_unit(rng) - 10.0;
    const double t = uniform_unit(rng);
    const Assignment a = readout(s, t);
    const Assignment b = readout(s, t + 0.5);
    for (std::size_t j = 0; j < a.size(); ++j) CHECK(a[j] != b[j]);
  }
  // sin exactly zero reads as false.
  CHECK(readout(PhaseState{{0.0}, 0.0}, 0.0) == Assignment{false});
}

TEST_CASE("run_trajectory basics") {
  SUBCASE("single positive unit clause") {
    const CnfFormula f(1, {{pos(1)}});
    SolverConfig c;
    c.max_cycles = 1;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      std::mt19937_64 rng(seed);
      const SolveResult r = run_trajectory(f, c, rng);
      CHECK(r.best_count == 1);
      CHECK(r.best_assignment == Assignment{true});
      CHECK(r.best_found_at_cycles <= 1.0);
    }
  }
  SUBCASE("no clauses") {
    const CnfFormula f(3, {});
    std::mt19937_64 rng(1);
    const SolveResult r = run_trajectory(f, quick_config(), rng);
    CHECK(r.best_count == 0);
    CHECK(r.cycles_simulated == 0.0);
    for (const TracePoint& p : r.trace) CHECK(p.best_so_far == 0);
  }
  SUBCASE("sound, monotone, and closed traces") {
    SolverConfig c = quick_config();
    for (int i = 0; i < 10; ++i) {
      const CnfFormula f = generate_random_ksat(15, 70, 3, 300 + i);
      std::mt19937_64 rng(i);
      const SolveResult r = run_trajectory(f, c, rng);
      CHECK(testing::reference_count(f, r.best_assignment) == r.best_count);
      REQUIRE_FALSE(r.trace.empty());
      CHECK(r.trace.front().cycle == 0.0);
      CHECK(r.trace.back().best_so_far == r.best_count);
      for (std::size_t k = 1; k < r.trace.size(); ++k) {
        CHECK(r.trace[k].cycle > r.trace[k - 1].cycle);
        CHECK(r.trace[k].best_so_far >= r.trace[k - 1].best_so_far);
      }
      CHECK(r.best_found_at_cycles <= r.cycles_simulated + 1e-9);
      const bool early = r.best_count == f.num_clauses();
      if (!early) CHECK(r.cycles_simulated == doctest::Approx(c.max_cycles));
    }
  }
  SUBCASE("annealing keeps the result sound") {
    SolverConfig c = quick_config();
    c.anneal = true;
    const CnfFormula f = generate_random_ksat(15, 70, 3, 8);
    std::mt19937_64 rng(3);
    const SolveResult r = run_trajectory(f, c, rng);
    CHECK(count_satisfied(f, r.best_assignment) == r.best_count);
  }
}

TEST_CASE("reduce_problem worked example") {
  const CnfFormula f = small_example();
  const Assignment a{true, false, false};
  const RefReduction ref = reference_reduce(f, a);
  CHECK(ref.active == std::set<std::uint32_t>{3});
  CHECK(ref.eliminated == 2);

  const ReductionState r = reduce_problem(f, a);
  CHECK(r.active_variables == std::vector<std::uint32_t>{3});
  CHECK(r.eliminated_satisfied_count == 2);
  CHECK(r.reduced_formula == CnfFormula(1, {{pos(1)}}));
  CHECK(r.original_index(1) == 3);
  CHECK(r.is_fixed == std::vector<bool>{true, true, false});
  CHECK(r.fixed_values[0]);
  CHECK_FALSE(r.fixed_values[1]);
  for (bool x3 : {false, true}) {
    const Assignment full = r.expand({x3});
    CHECK(full == Assignment{true, false, x3});
    CHECK(r.eliminated_satisfied_count + count_satisfied(r.reduced_formula, {x3}) ==
          count_satisfied(f, full));
  }
}

TEST_CASE("reduce_problem edge cases") {
  SUBCASE("satisfying assignment") {
    const CnfFormula f = small_example();
    const ReductionState r = reduce_problem(f, {true, false, true});
    CHECK(r.active_variables.empty());
    CHECK(r.reduced_formula.num_clauses() == 0);
    CHECK(r.eliminated_satisfied_count == 3);
  }
  SUBCASE("every clause unsatisfied") {
    const CnfFormula f(4, {{pos(2), neg(4)}, {pos(4)}, {neg(4), pos(2)}});
    const ReductionState r = reduce_problem(f, {false, false, false, true});
    CHECK(r.active_variables == std::vector<std::uint32_t>{2, 4});
    CHECK(r.eliminated_satisfied_count == 0);
    CHECK(r.reduced_formula == CnfFormula(2, {{pos(1), neg(2)}, {pos(2)}, {neg(2), pos(1)}}));
  }
  SUBCASE("every variable in play") {
    const CnfFormula f(3, {{pos(1)}, {neg(2)}, {pos(1), pos(3)}, {pos(3), neg(1)}});
    const ReductionState r = reduce_problem(f, {false, true, false});
    CHECK(r.active_variables == std::vector<std::uint32_t>{1, 2, 3});
    // Clause 4 is satisfied, but only through an active variable.
    CHECK(r.eliminated_satisfied_count == 0);
    CHECK(r.reduced_formula == f);
  }
  SUBCASE("fixed false literals drop out") {
    // x2 stays fixed true: -x2 vanishes from clause 2, clause 3 is eliminated.
    const CnfFormula f(2, {{neg(1)}, {pos(1), neg(2)}, {pos(2)}});
    const ReductionState r = reduce_problem(f, {true, true});
    CHECK(r.active_variables == std::vector<std::uint32_t>{1});
    CHECK(r.eliminated_satisfied_count == 1);
    CHECK(r.reduced_formula == CnfFormula(1, {{neg(1)}, {pos(1)}}));
  }
  SUBCASE("unsatisfiable unit pair") {
    const CnfFormula f(2, {{pos(1)}, {neg(1)}, {pos(2)}});
    const ReductionState r = reduce_problem(f, {true, true});
    CHECK(r.active_variables == std::vector<std::uint32_t>{1});
    CHECK(r.eliminated_satisfied_count == 1);
    CHECK(r.reduced_formula == CnfFormula(1, {{pos(1)}, {neg(1)}}));
  }
  SUBCASE("empty clause marker") {
    const CnfFormula f(2, {{}, {pos(1)}, {neg(2)}});
    const ReductionState r = reduce_problem(f, {true, true});
    CHECK(r.active_variables == std::vector<std::uint32_t>{2});
    CHECK(r.reduced_formula.num_clauses() == 2);
    CHECK(r.reduced_formula.clause(0).empty());
  }
  SUBCASE("length mismatch") {
    CHECK_THROWS_AS((void)reduce_problem(small_example(), {true}), CnfError);
    const ReductionState r = reduce_problem(small_example(), {true, false, false});
    CHECK_THROWS_AS((void)r.expand({true, true}), CnfError);
  }
}

TEST_CASE("post_process worked example") {
  const CnfFormula f = small_example();
  SolveResult incumbent;
  incumbent.best_assignment = {true, false, false};
  incumbent.best_count = 2;
  incumbent.rng_seed = 11;
  incumbent.cycles_simulated = 40;
  incumbent.trace = {{0.0, 2}, {40.0, 2}};

  // The subproblem is the single clause (x3); enumerate it.
  const ReductionState r = reduce_problem(f, incumbent.best_assignment);
  const OracleResult sub = brute_force_maxsat(r.reduced_formula);
  CHECK(sub.witness == Assignment{true});
  CHECK(count_satisfied(f, r.expand(sub.witness)) == 3);

  const SolveResult out = post_process(f, incumbent, quick_config());
  CHECK(out.best_assignment == Assignment{true, false, true});
  CHECK(out.best_count == 3);
  CHECK(out.postprocess_iterations == 1);
  CHECK(out.best_found_at_cycles >= 40.0);
  CHECK(out.trace.back().best_so_far == 3);
}

TEST_CASE("post_process leaves a satisfying incumbent alone") {
  const CnfFormula f = small_example();
  SolveResult incumbent;
  incumbent.best_assignment = {true, false, true};
  incumbent.best_count = 3;
  const SolveResult out = post_process(f, incumbent, quick_config());
  CHECK(out == incumbent);
}

TEST_CASE("post_process stalls on an irreducible core") {
  // x1 and -x1 can never both hold, and x1 is the only variable in play.
  const CnfFormula f(2, {{pos(1)}, {neg(1)}, {pos(2)}});
  SolveResult incumbent;
  incumbent.best_assignment = {true, true};
  incumbent.best_count = 2;
  const SolveResult out = post_process(f, incumbent, quick_config());
  CHECK(out.best_count == 2);
  CHECK(out.postprocess_iterations == 1);
}

TEST_CASE("solve") {
  SUBCASE("one restart is one trajectory") {
    const CnfFormula f = generate_random_ksat(12, 60, 3, 4);
    SolverConfig c = quick_config();
    c.restarts = 1;
    c.postprocess = false;
    c.seed = 77;
    std::mt19937_64 rng(restart_seed(77, 0));
    SolveResult direct = run_trajectory(f, c, rng);
    direct.rng_seed = restart_seed(77, 0);
    CHECK(solve(f, c) == direct);
  }
  SUBCASE("deterministic") {
    const CnfFormula f = generate_random_ksat(14, 70, 3, 9);
    const SolverConfig c = quick_config();
    CHECK(solve(f, c) == solve(f, c));
  }
  SUBCASE("unsatisfiable instances are never over-reported") {
    for (int i = 1; i <= 3; ++i) {
      const CnfFormula f = testing::known_optimum(i);
      for (std::uint64_t seed = 0; seed < 10; ++seed) {
        SolverConfig c = quick_config();
        c.seed = seed;
        const SolveResult r = solve(f, c);
        CHECK(r.best_count < f.num_clauses());
        CHECK(testing::reference_count(f, r.best_assignment) == r.best_count);
      }
    }
  }
  SUBCASE("restart seeds differ") {
    std::set<std::uint64_t> seeds;
    for (int r = 0; r < 100; ++r) seeds.insert(restart_seed(5, r));
    CHECK(seeds.size() == 100);
  }
  SUBCASE("divergence is reported") {
    SolverConfig c = quick_config();
    c.dynamics.coupling_g = 1e308;
    CHECK_THROWS_AS((void)solve(testing::known_optimum(2), c), NonFiniteError);
  }
  SUBCASE("config validation") {
    const CnfFormula f = testing::known_optimum(1);
    SolverConfig c;
    c.max_cycles = 0.5;
    CHECK_THROWS_AS((void)solve(f, c), std::invalid_argument);
    c = SolverConfig{};
    c.restarts = 0;
    CHECK_THROWS_AS((void)solve(f, c), std::invalid_argument);
    c = SolverConfig{};
    c.readout_samples_per_cycle = 0;
    CHECK_THROWS_AS((void)solve(f, c), std::invalid_argument);
    c = SolverConfig{};
    c.postprocess_subbudget_fraction = 1.5;
    CHECK_THROWS_AS((void)solve(f, c), std::invalid_argument);
  }
}

TEST_CASE("oracle dominance on small random instances") {
  for (int i = 0; i < 15; ++i) {
    const CnfFormula f = generate_random_ksat(10 + i % 8, 60, 3, 500 + i);
    SolverConfig c = quick_config();
    c.seed = i;
    CHECK(brute_force_maxsat(f).best_count >= solve(f, c).best_count);
  }
}

TEST_CASE("P4 with defaults") {
  const CnfFormula f = testing::known_optimum(4);
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SolverConfig c;
    c.seed = seed;
    hits += solve(f, c).best_count == 8;
  }
  CHECK(hits >= 16);
}
