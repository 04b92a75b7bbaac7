#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace oscsat {

/// A variable reference inside a clause. Variables are 1-based.
struct Literal {
  std::uint32_t variable = 1;
  bool negated = false;

  /// DIMACS signed form: +v or -v.
  [[nodiscard]] std::int64_t to_dimacs() const {
    return negated ? -static_cast<std::int64_t>(variable) : static_cast<std::int64_t>(variable);
  }
  static Literal from_dimacs(std::int64_t value);

  friend bool operator==(const Literal&, const Literal&) = default;
};

using Clause = std::vector<Literal>;

/// One truth value per variable; index 0 holds x_1.
using Assignment = std::vector<bool>;

class CnfError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Immutable unweighted CNF instance.
///
/// Duplicate and tautological clauses are kept verbatim; each one counts
/// toward M. An empty clause is allowed and is never satisfied. Every literal
/// is validated against the variable count on construction.
class CnfFormula {
 public:
  CnfFormula() = default;
  CnfFormula(std::uint32_t num_variables, std::vector<Clause> clauses);

  [[nodiscard]] std::uint32_t num_variables() const { return num_variables_; }
  [[nodiscard]] std::size_t num_clauses() const { return clauses_.size(); }
  [[nodiscard]] const std::vector<Clause>& clauses() const { return clauses_; }
  [[nodiscard]] const Clause& clause(std::size_t i) const { return clauses_.at(i); }

  friend bool operator==(const CnfFormula&, const CnfFormula&) = default;

 private:
  std::uint32_t num_variables_ = 0;
  std::vector<Clause> clauses_;
};

[[nodiscard]] bool literal_true(const Literal& lit, const Assignment& assignment);
[[nodiscard]] bool clause_satisfied(const Clause& clause, const Assignment& assignment);

/// Exact number of clauses with at least one true literal.
/// Throws CnfError if the assignment length differs from N.
[[nodiscard]] std::size_t count_satisfied(const CnfFormula& formula, const Assignment& assignment);

// ---------------------------------------------------------------------------
// DIMACS

struct DimacsWarning {
  std::size_t line = 0;
  std::string message;
};

class DimacsError : public CnfError {
 public:
  DimacsError(std::size_t line, const std::string& message);
  [[nodiscard]] std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Parses DIMACS CNF. Comment lines start with `c`; a line starting with `%`
/// ends the clause section (SATLIB convention). A header/body clause count
/// mismatch is tolerated and reported through `warnings` when given.
[[nodiscard]] CnfFormula parse_dimacs(std::string_view text,
                                      std::vector<DimacsWarning>* warnings = nullptr);
[[nodiscard]] CnfFormula parse_dimacs(std::istream& in,
                                      std::vector<DimacsWarning>* warnings = nullptr);
[[nodiscard]] CnfFormula read_dimacs_file(const std::string& path,
                                          std::vector<DimacsWarning>* warnings = nullptr);

/// Canonical text: header line, then one `0`-terminated clause per line.
[[nodiscard]] std::string serialize_dimacs(const CnfFormula& formula);
void write_dimacs_file(const CnfFormula& formula, const std::string& path);

// ---------------------------------------------------------------------------
// Exhaustive oracle

inline constexpr std::uint32_t kDefaultOracleCap = 25;

struct OracleResult {
  std::size_t best_count = 0;
  Assignment witness;
};

/// Enumerates all 2^N assignments. The witness is the first optimum in binary
/// order where x_1 is the most significant bit, i.e. the lexicographically
/// least optimal assignment with false < true.
[[nodiscard]] OracleResult brute_force_maxsat(const CnfFormula& formula,
                                              std::uint32_t max_variables = kDefaultOracleCap);

// ---------------------------------------------------------------------------
// Random instances

/// Uniform random k-SAT: each clause draws k distinct variables without
/// replacement and an independent fair polarity for each. Pure in its inputs.
[[nodiscard]] CnfFormula generate_random_ksat(std::uint32_t n, std::size_t m, std::uint32_t k,
                                              std::uint64_t seed);

}  // namespace oscsat
