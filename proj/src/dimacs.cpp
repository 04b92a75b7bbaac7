#include <charconv>
#include <fstream>
#include <sstream>

#include "oscsat/cnf.hpp"

namespace oscsat {

DimacsError::DimacsError(std::size_t line, const std::string& message)
    : CnfError("line " + std::to_string(line) + ": " + message), line_(line) {}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f'; }

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

bool parse_int(std::string_view token, std::int64_t& out) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size();
}

}  // namespace

CnfFormula parse_dimacs(std::string_view text, std::vector<DimacsWarning>* warnings) {
  bool have_header = false;
  std::int64_t header_vars = 0;
  std::int64_t header_clauses = 0;
  std::size_t header_line = 0;
  std::vector<Clause> clauses;
  Clause pending;
  bool pending_open = false;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    const auto tokens = split_tokens(line);
    if (tokens.empty()) continue;
    const std::string_view first = tokens.front();
    if (first.front() == 'c') continue;
    if (first.front() == '%') break;

    if (first == "p") {
      if (have_header) throw DimacsError(line_no, "duplicate header");
      if (tokens.size() != 4 || tokens[1] != "cnf" || !parse_int(tokens[2], header_vars) ||
          !parse_int(tokens[3], header_clauses) || header_vars < 0 || header_clauses < 0 ||
          header_vars > UINT32_MAX) {
        throw DimacsError(line_no, "malformed header, expected 'p cnf <variables> <clauses>'");
      }
      have_header = true;
      header_line = line_no;
      continue;
    }

    if (!have_header) throw DimacsError(line_no, "clause data before 'p cnf' header");
    for (const std::string_view token : tokens) {
      std::int64_t value = 0;
      if (!parse_int(token, value)) {
        throw DimacsError(line_no, "non-integer token '" + std::string(token) + "'");
      }
      if (value == 0) {
        clauses.push_back(std::move(pending));
        pending = Clause{};
        pending_open = false;
        continue;
      }
      const std::int64_t magnitude = value < 0 ? -value : value;
      if (magnitude > header_vars) {
        throw DimacsError(line_no, "literal " + std::to_string(value) +
                                       " exceeds declared variable count " +
                                       std::to_string(header_vars));
      }
      pending.push_back(Literal::from_dimacs(value));
      pending_open = true;
    }
  }

  if (!have_header) throw DimacsError(line_no, "missing 'p cnf' header");
  if (pending_open) throw DimacsError(line_no, "last clause is not terminated by 0");
  if (static_cast<std::int64_t>(clauses.size()) != header_clauses && warnings != nullptr) {
    warnings->push_back(DimacsWarning{
        header_line, "header declares " + std::to_string(header_clauses) + " clauses, found " +
                         std::to_string(clauses.size())});
  }
  return CnfFormula(static_cast<std::uint32_t>(header_vars), std::move(clauses));
}

CnfFormula parse_dimacs(std::istream& in, std::vector<DimacsWarning>* warnings) {
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_dimacs(std::string_view(buffer.str()), warnings);
}

CnfFormula read_dimacs_file(const std::string& path, std::vector<DimacsWarning>* warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CnfError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_dimacs(std::string_view(buffer.str()), warnings);
}

std::string serialize_dimacs(const CnfFormula& formula) {
  std::string out = "p cnf " + std::to_string(formula.num_variables()) + " " +
                    std::to_string(formula.num_clauses()) + "\n";
  for (const Clause& clause : formula.clauses()) {
    for (const Literal& lit : clause) {
      out += std::to_string(lit.to_dimacs());
      out += ' ';
    }
    out += "0\n";
  }
  return out;
}

void write_dimacs_file(const CnfFormula& formula, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CnfError("cannot write '" + path + "'");
  out << serialize_dimacs(formula);
  if (!out) throw CnfError("write failed for '" + path + "'");
}

}  // namespace oscsat
