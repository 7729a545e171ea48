#pragma once

// Recovers multi-level circuit structure from a CNF formula. Clauses are
// consumed in order into a sub-clause buffer; whenever the buffered clauses
// pin some variable to an expression over the others (the derived
// on-set/off-set conditions are exact complements), that variable gets a
// definition and the participating clauses are consumed. Whatever structure
// remains is folded into fresh auxiliary output variables.

#include <string>
#include <vector>

#include "satgrad/boolexpr.hpp"
#include "satgrad/cnf.hpp"

namespace satgrad {

struct ExtractorConfig {
  int complement_cap = 16;  // max union support for the complement check
  int minimize_cap = 12;    // max support for exact two-level minimization
};

struct BeEntry {
  int var = 0;
  BoolExpr expr;
};

struct PoEntry {
  int var = 0;
  bool target = false;
};

struct ExtractionResult {
  int num_vars = 0;          // original CNF variables; aux ids follow
  std::vector<int> pi;       // primary inputs, discovery order
  std::vector<int> iv;       // defined intermediate variables, commit order
  std::vector<PoEntry> po;   // constrained outputs, discovery order
  std::vector<BeEntry> be;   // definitions, commit order (aux included)
  std::vector<int> aux;      // auxiliary vars, numbered num_vars+1, ...
  bool unsat = false;        // two clause groups forced conflicting constants
  std::string unsat_note;
};

using SubClauseBuffer = std::vector<Clause>;

ExtractionResult extract(const CnfFormula& cnf, const ExtractorConfig& cfg = {});

// Variables of sc in order of first appearance, deduplicated.
std::vector<int> candidate_scan_order(const SubClauseBuffer& sc);

// Residue fallback: the whole buffer as one definition, AND over clause
// disjunctions, simplified. The caller constrains the returned entry to 1.
BeEntry handle_underspecified(const SubClauseBuffer& sc, int aux_var,
                              int minimize_cap = 12);

// Splits the primary inputs by whether a definition chain connects them to
// some constrained output. Both lists preserve ExtractionResult::pi order.
struct PathClassification {
  std::vector<int> constrained_pi;
  std::vector<int> unconstrained_pi;
};

PathClassification classify_paths(const ExtractionResult& res);

}  // namespace satgrad
