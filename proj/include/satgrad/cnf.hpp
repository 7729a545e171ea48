#pragma once

// DIMACS CNF reading/writing and clause evaluation. Variables are 1-based
// everywhere in the public interface.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace satgrad {

struct Literal {
  int var = 0;  // >= 1
  bool negated = false;

  friend bool operator==(const Literal& a, const Literal& b) {
    return a.var == b.var && a.negated == b.negated;
  }
};

// Signed-integer form used by DIMACS and the solutions file format.
inline int to_dimacs(Literal l) { return l.negated ? -l.var : l.var; }
inline Literal from_dimacs(int x) { return Literal{x < 0 ? -x : x, x < 0}; }

// Nonempty. Duplicate literals are dropped at parse time; a clause may still
// contain both polarities of a variable (tautology), which is kept as-is.
using Clause = std::vector<Literal>;

struct CnfFormula {
  int num_vars = 0;
  std::vector<Clause> clauses;
  std::vector<std::string> comments;  // 'c' lines without the prefix
};

// Total assignment, indexed by variable (slot 0 unused). Values are 0 or 1;
// anything else marks the variable as unassigned.
using Assignment = std::vector<uint8_t>;

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Accepts the usual liberties: clauses spanning lines, several clauses per
// line, a final clause terminated by end of input. A clause count that
// disagrees with the header is reported through `warnings` (when given) and
// the actual clause list wins.
CnfFormula parse_dimacs(const std::string& text,
                        std::vector<std::string>* warnings = nullptr);

std::string write_dimacs(const CnfFormula& cnf);

// True iff every clause holds under `a`. Throws std::invalid_argument if any
// variable of the formula is unassigned.
bool eval_cnf(const CnfFormula& cnf, const Assignment& a);

}  // namespace satgrad
