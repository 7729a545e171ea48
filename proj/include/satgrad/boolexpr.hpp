#pragma once

// Immutable Boolean expression trees plus the operations the extractor needs:
// deriving a candidate definition from a clause group, semantic complement
// checking, two-level minimization, and decomposition into 2-input gates.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "satgrad/cnf.hpp"
#include "satgrad/truth_table.hpp"

namespace satgrad {

enum class ExprKind : uint8_t { Const0, Const1, Var, Not, And, Or, Xor, Xnor };

// Value type over a shared immutable node. Construction canonicalizes:
// children of And/Or/Xor/Xnor are sorted, nested And/And and Or/Or are
// flattened, double negation collapses, and constants fold where the result
// is forced. Structural equality on canonical trees is semantic-order free.
class BoolExpr {
 public:
  BoolExpr();  // Const0

  ExprKind kind() const { return node_->kind; }
  int var_index() const { return node_->var; }  // Var nodes only
  const std::vector<BoolExpr>& children() const { return node_->children; }

  bool is_const() const {
    return kind() == ExprKind::Const0 || kind() == ExprKind::Const1;
  }
  bool const_value() const { return kind() == ExprKind::Const1; }

  friend bool operator==(const BoolExpr& a, const BoolExpr& b) {
    return compare(a, b) == 0;
  }
  friend bool operator!=(const BoolExpr& a, const BoolExpr& b) {
    return compare(a, b) != 0;
  }
  // Total structural order: kind, then var index / children lexicographically.
  static int compare(const BoolExpr& a, const BoolExpr& b);

 private:
  struct Node {
    ExprKind kind;
    int var = 0;
    std::vector<BoolExpr> children;
  };
  std::shared_ptr<const Node> node_;

  explicit BoolExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static BoolExpr make(Node n);

  friend BoolExpr expr_const(bool v);
  friend BoolExpr expr_var(int var);
  friend BoolExpr expr_not(BoolExpr e);
  friend BoolExpr expr_nary(ExprKind k, std::vector<BoolExpr> es);
};

BoolExpr expr_const(bool v);
BoolExpr expr_var(int var);
BoolExpr expr_not(BoolExpr e);
// k in {And, Or, Xor, Xnor}. Empty child lists give the neutral element
// (And->1, Or->0, Xor->0, Xnor->1); single children collapse to the child
// (negated for Xnor).
BoolExpr expr_nary(ExprKind k, std::vector<BoolExpr> es);
BoolExpr expr_and(std::vector<BoolExpr> es);
BoolExpr expr_or(std::vector<BoolExpr> es);
BoolExpr expr_xor(std::vector<BoolExpr> es);
BoolExpr expr_xnor(std::vector<BoolExpr> es);
BoolExpr expr_literal(Literal l);

// Sorted, deduplicated variable indices occurring in e.
std::vector<int> support(const BoolExpr& e);

// Throws std::invalid_argument if a support variable is unassigned in `a`.
bool eval_expr(const BoolExpr& e, const Assignment& a);

// Truth table of e over an explicit variable order (must cover support(e)).
TruthTable truth_table_of(const BoolExpr& e, const std::vector<int>& var_order);

// Candidate definition for `target` from a clause group: the conjunction,
// over every clause containing ~target, of the disjunction of that clause's
// other literals. Clauses without ~target contribute nothing; clauses
// containing both polarities of target are tautologies and are skipped, so
// the result never mentions target itself. Empty conjunction = Const1; a
// clause whose only literal is ~target contributes Const0.
BoolExpr find_boolean_expression(Literal target, const std::vector<Clause>& sc);

enum class Ternary : uint8_t { False, True, Undecided };

// Semantic check f == ~g by exhaustive truth tables over the union support.
// Undecided when the union support exceeds `complement_cap`; a definite
// answer is always correct.
Ternary is_complement(const BoolExpr& f, const BoolExpr& g,
                      int complement_cap = 16);

// Algebraic cleanup (constant folding, identity/annihilator, double
// negation, idempotence, complementary children) always applies. When the
// support is at most `minimize_cap` the function is additionally minimized:
// constants are detected exactly, parity functions come back as Xor/Xnor
// chains, everything else goes through prime-implicant two-level
// minimization, and the cheapest candidate by 2-input gate count wins.
BoolExpr simplify(const BoolExpr& e, int minimize_cap = 12);

// 2-input gate count of the decomposed expression (inverters are free).
int gate_equivalents(const BoolExpr& e);

// Decomposition into a dependency-ordered list of 1/2-input gates. N-ary
// nodes become left-to-right chains of n-1 binary gates; a Xnor chain is
// Xor gates with a final Xnor. Repeated subtrees within one call share gates.
struct GateRef {
  enum class Src : uint8_t { Const, Var, Gate };
  Src src = Src::Const;
  int index = 0;  // const value, variable index, or gate position
};

struct ExprGate {
  enum class Op : uint8_t { Not, And2, Or2, Xor2, Xnor2 };
  Op op;
  GateRef a, b;  // b unused for Not
};

struct Decomposition {
  std::vector<ExprGate> gates;
  GateRef output;
};

Decomposition decompose_two_input(const BoolExpr& e);

// Infix form with ~ & | ^ and explicit parentheses; Xnor prints as ~(.. ^ ..).
std::string to_string(const BoolExpr& e);

}  // namespace satgrad
