#include "oscsat/cnf.hpp"

#include <algorithm>
#include <random>

#include "oscsat/random.hpp"

namespace oscsat {

Literal Literal::from_dimacs(std::int64_t value) {
  if (value == 0) throw CnfError("literal 0 is the clause terminator, not a variable");
  const bool neg = value < 0;
  const auto var = static_cast<std::uint64_t>(neg ? -value : value);
  if (var > UINT32_MAX) throw CnfError("variable index out of range");
  return Literal{static_cast<std::uint32_t>(var), neg};
}

CnfFormula::CnfFormula(std::uint32_t num_variables, std::vector<Clause> clauses)
    : num_variables_(num_variables), clauses_(std::move(clauses)) {
  for (std::size_t i = 0; i < clauses_.size(); ++i) {
    for (const Literal& lit : clauses_[i]) {
      if (lit.variable < 1 || lit.variable > num_variables_) {
        throw CnfError("clause " + std::to_string(i + 1) + " references variable " +
                       std::to_string(lit.variable) + " outside [1, " +
                       std::to_string(num_variables_) + "]");
      }
    }
  }
}

bool literal_true(const Literal& lit, const Assignment& assignment) {
  return assignment[lit.variable - 1] != lit.negated;
}

bool clause_satisfied(const Clause& clause, const Assignment& assignment) {
  return std::any_of(clause.begin(), clause.end(),
                     [&](const Literal& lit) { return literal_true(lit, assignment); });
}

std::size_t count_satisfied(const CnfFormula& formula, const Assignment& assignment) {
  if (assignment.size() != formula.num_variables()) {
    throw CnfError("assignment has " + std::to_string(assignment.size()) +
                   " values, formula has " + std::to_string(formula.num_variables()) +
                   " variables");
  }
  std::size_t count = 0;
  for (const Clause& clause : formula.clauses()) {
    if (clause_satisfied(clause, assignment)) ++count;
  }
  return count;
}

OracleResult brute_force_maxsat(const CnfFormula& formula, std::uint32_t max_variables) {
  const std::uint32_t n = formula.num_variables();
  if (n > max_variables) {
    throw CnfError("oracle cap exceeded: N = " + std::to_string(n) + " > " +
                   std::to_string(max_variables));
  }
  if (n > 31) throw CnfError("oracle supports at most 31 variables");

  // Bit (n - 1 - j) of the code holds x_{j+1}, so counting upward walks
  // assignments in lexicographic order.
  struct Masks {
    std::uint32_t pos = 0;
    std::uint32_t neg = 0;
  };
  std::vector<Masks> masks;
  masks.reserve(formula.num_clauses());
  for (const Clause& clause : formula.clauses()) {
    Masks mk;
    for (const Literal& lit : clause) {
      const std::uint32_t bit = 1u << (n - lit.variable);
      (lit.negated ? mk.neg : mk.pos) |= bit;
    }
    masks.push_back(mk);
  }

  const std::size_t m = masks.size();
  const std::uint64_t total = std::uint64_t{1} << n;
  std::size_t best = 0;
  std::uint64_t best_code = 0;
  bool have_best = false;
  for (std::uint64_t code = 0; code < total; ++code) {
    const auto a = static_cast<std::uint32_t>(code);
    std::size_t sat = 0;
    for (const Masks& mk : masks) {
      sat += ((a & mk.pos) | (~a & mk.neg)) != 0;
    }
    if (!have_best || sat > best) {
      best = sat;
      best_code = code;
      have_best = true;
      if (best == m) break;
    }
  }

  OracleResult result;
  result.best_count = best;
  result.witness.resize(n);
  for (std::uint32_t j = 0; j < n; ++j) {
    result.witness[j] = ((best_code >> (n - 1 - j)) & 1u) != 0;
  }
  return result;
}

CnfFormula generate_random_ksat(std::uint32_t n, std::size_t m, std::uint32_t k,
                                std::uint64_t seed) {
  if (k < 1 || k > n) {
    throw CnfError("random k-SAT needs 1 <= k <= n (k = " + std::to_string(k) +
                   ", n = " + std::to_string(n) + ")");
  }
  std::mt19937_64 rng(seed);
  std::vector<std::uint32_t> pool(n);
  std::vector<Clause> clauses;
  clauses.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::uint32_t v = 0; v < n; ++v) pool[v] = v + 1;
    Clause clause;
    clause.reserve(k);
    // Partial Fisher-Yates: the first k slots end up a uniform k-subset.
    for (std::uint32_t s = 0; s < k; ++s) {
      const auto pick = s + static_cast<std::uint32_t>(uniform_below(rng, n - s));
      std::swap(pool[s], pool[pick]);
      const bool neg = (rng() >> 63) != 0;
      clause.push_back(Literal{pool[s], neg});
    }
    clauses.push_back(std::move(clause));
  }
  return CnfFormula(n, std::move(clauses));
}

}  // namespace oscsat
