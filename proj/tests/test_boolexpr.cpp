#include <cmath>

#include "doctest.h"
#include "gen.hpp"
#include "satgrad/boolexpr.hpp"
#include "satgrad/truth_table.hpp"

using namespace satgrad;

namespace {

BoolExpr v(int i) { return expr_var(i); }

// All assignments over vars 1..n, comparing two evaluation routes.
void check_same_function(const BoolExpr& a, const BoolExpr& b, int n) {
  for (uint32_t m = 0; m < (1u << n); ++m) {
    Assignment asg(n + 1, 0xFF);
    for (int i = 1; i <= n; ++i) asg[i] = (m >> (i - 1)) & 1;
    CHECK(eval_expr(a, asg) == eval_expr(b, asg));
  }
}

}  // namespace

TEST_CASE("truth table primitives") {
  TruthTable x1 = TruthTable::var(3, 0);
  TruthTable x3 = TruthTable::var(3, 2);
  CHECK(x1.bit(0b001));
  CHECK_FALSE(x1.bit(0b110));
  CHECK(x3.bit(0b100));
  CHECK((x1 & x3).popcount() == 2);
  CHECK((x1 | x3).popcount() == 6);
  CHECK((x1 ^ x1).all_zero());
  CHECK((~(x1 ^ x1)).all_one());
  CHECK(x1.is_complement_of(~x1));
  CHECK(TruthTable::parity(3) == (x1 ^ TruthTable::var(3, 1) ^ x3));

  TruthTable wide = TruthTable::var(7, 6);
  CHECK(wide.popcount() == 64);
  CHECK(wide.bit(127));
  CHECK_FALSE(wide.bit(63));
  CHECK_THROWS(TruthTable::var(17, 0));
}

TEST_CASE("constructors canonicalize") {
  CHECK(expr_and({v(2), v(1)}) == expr_and({v(1), v(2)}));
  CHECK(expr_and({v(1), expr_and({v(2), v(3)})}) ==
        expr_and({v(1), v(2), v(3)}));
  CHECK(expr_and({v(1), expr_const(false)}) == expr_const(false));
  CHECK(expr_and({v(1), expr_const(true)}) == v(1));
  CHECK(expr_or({v(1), expr_const(true)}) == expr_const(true));
  CHECK(expr_or({}) == expr_const(false));
  CHECK(expr_and({}) == expr_const(true));
  CHECK(expr_not(expr_not(v(4))) == v(4));
  CHECK(expr_not(expr_const(false)) == expr_const(true));
  CHECK(expr_xor({v(1), expr_const(true)}) == expr_not(v(1)));
  CHECK(expr_xor({v(1)}) == v(1));
  CHECK(expr_xnor({v(1)}) == expr_not(v(1)));
  CHECK(expr_xnor({}) == expr_const(true));
  CHECK(expr_literal(Literal{5, true}) == expr_not(v(5)));
}

TEST_CASE("xnor nests into xor with polarity tracking") {
  BoolExpr e = expr_xnor({v(1), expr_xnor({v(2), v(3)})});
  // two complement flips cancel: xnor(a, xnor(b, c)) = a ^ b ^ c
  CHECK(e == expr_xor({v(1), v(2), v(3)}));
  check_same_function(e, expr_xor({v(1), v(2), v(3)}), 3);
}

TEST_CASE("structural order is total") {
  std::vector<BoolExpr> es = {expr_const(false), expr_const(true), v(1), v(2),
                              expr_not(v(1)),    expr_and({v(1), v(2)}),
                              expr_or({v(1), v(2)})};
  for (const BoolExpr& a : es)
    for (const BoolExpr& b : es) {
      int ab = BoolExpr::compare(a, b);
      int ba = BoolExpr::compare(b, a);
      CHECK(((ab == 0) == (ba == 0)));
      if (ab != 0) CHECK(((ab < 0) != (ba < 0)));
    }
}

TEST_CASE("support and evaluation") {
  BoolExpr e = expr_or({expr_and({v(3), expr_not(v(7))}), v(3), v(1)});
  CHECK(support(e) == std::vector<int>{1, 3, 7});
  Assignment a(8, 0xFF);
  a[1] = 0, a[3] = 1, a[7] = 1;
  CHECK(eval_expr(e, a));  // bare x3 carries it
  a[3] = 0;
  CHECK_FALSE(eval_expr(e, a));
  a[7] = 0xFF;
  // With x3 = 0 the conjunction short-circuits before touching x7, so the
  // unassigned slot is tolerated. Demanding x7 directly is an error.
  CHECK_FALSE(eval_expr(e, a));
  CHECK_THROWS_AS(eval_expr(expr_not(v(7)), a), std::invalid_argument);
}

TEST_CASE("truth_table_of respects the variable order") {
  BoolExpr e = expr_and({v(5), expr_not(v(2))});
  TruthTable t = truth_table_of(e, {2, 5});
  // row index bit 0 = x2, bit 1 = x5
  CHECK_FALSE(t.bit(0b00));
  CHECK_FALSE(t.bit(0b01));
  CHECK(t.bit(0b10));
  CHECK_FALSE(t.bit(0b11));
  CHECK_THROWS(truth_table_of(e, {2}));
}

TEST_CASE("candidate definition from a mux clause group") {
  std::vector<Clause> sc = {
      {Literal{4, true}, Literal{11, true}, Literal{5, false}},
      {Literal{4, true}, Literal{11, false}, Literal{5, true}},
      {Literal{4, false}, Literal{12, true}, Literal{5, false}},
      {Literal{4, false}, Literal{12, false}, Literal{5, true}}};
  BoolExpr f = find_boolean_expression(Literal{5, false}, sc);
  BoolExpr g = find_boolean_expression(Literal{5, true}, sc);
  CHECK(f == expr_and({expr_or({expr_not(v(4)), v(11)}),
                       expr_or({v(4), v(12)})}));
  CHECK(is_complement(f, g) == Ternary::True);

  BoolExpr def = simplify(f);
  CHECK(gate_equivalents(def) == 3);
  BoolExpr mux = expr_or({expr_and({v(4), v(11)}),
                          expr_and({expr_not(v(4)), v(12)})});
  CHECK(truth_table_of(def, {4, 11, 12}) == truth_table_of(mux, {4, 11, 12}));
}

TEST_CASE("candidate definition edge shapes") {
  // clause holding only ~target pins the candidate to false
  std::vector<Clause> sc = {{Literal{3, true}}};
  CHECK(find_boolean_expression(Literal{3, false}, sc) == expr_const(false));
  // no occurrences of ~target leave it unconstrained
  CHECK(find_boolean_expression(Literal{3, true}, sc) == expr_const(true));
  // tautologies are ignored
  std::vector<Clause> taut = {{Literal{3, false}, Literal{3, true},
                               Literal{1, false}}};
  CHECK(find_boolean_expression(Literal{3, false}, taut) == expr_const(true));
}

TEST_CASE("parity clause groups come back as xor chains") {
  testgen::TCircuit tc;
  tc.num_inputs = 3;
  tc.num_vars = 4;
  tc.gates.push_back({testgen::TKind::Xor, 4, {1, 2, 3}});
  CnfFormula cnf = testgen::encode(tc);
  CHECK(cnf.clauses.size() == 8);
  BoolExpr f = find_boolean_expression(Literal{4, false}, cnf.clauses);
  BoolExpr g = find_boolean_expression(Literal{4, true}, cnf.clauses);
  CHECK(is_complement(f, g) == Ternary::True);
  BoolExpr def = simplify(f);
  CHECK(def == expr_xor({v(1), v(2), v(3)}));
  CHECK(gate_equivalents(def) == 2);
}

TEST_CASE("complement check is semantic, not structural") {
  BoolExpr maj = expr_or({expr_and({v(1), v(2)}), expr_and({v(1), v(3)}),
                          expr_and({v(2), v(3)})});
  BoolExpr not_maj_sop = expr_or(
      {expr_and({expr_not(v(1)), expr_not(v(2))}),
       expr_and({expr_not(v(1)), expr_not(v(3))}),
       expr_and({expr_not(v(2)), expr_not(v(3))})});
  CHECK(is_complement(maj, not_maj_sop) == Ternary::True);
  CHECK(is_complement(maj, maj) == Ternary::False);

  // A tighter cap turns a decidable pair into Undecided.
  std::vector<BoolExpr> nine;
  for (int i = 1; i <= 9; ++i) nine.push_back(v(i));
  BoolExpr w9 = expr_or(nine);
  CHECK(is_complement(w9, expr_not(w9)) == Ternary::True);
  CHECK(is_complement(w9, expr_not(w9), 8) == Ternary::Undecided);

  // 17 support variables exceed the truth table backend no matter how
  // generous the cap, so the check degrades instead of throwing.
  std::vector<BoolExpr> wide;
  for (int i = 1; i <= 17; ++i) wide.push_back(v(i));
  BoolExpr big = expr_or(wide);
  CHECK(is_complement(big, expr_not(big)) == Ternary::Undecided);
  CHECK(is_complement(big, expr_not(big), 17) == Ternary::Undecided);
}

TEST_CASE("simplify finds small forms") {
  CHECK(simplify(expr_or({v(1), expr_and({v(1), v(2)})})) == v(1));
  CHECK(simplify(expr_and({v(1), expr_not(v(1))})) == expr_const(false));
  CHECK(simplify(expr_or({v(1), expr_not(v(1))})) == expr_const(true));
  CHECK(simplify(expr_xor({v(2), v(2)})) == expr_const(false));

  // consensus term is redundant
  BoolExpr mux_plus = expr_or({expr_and({v(4), v(11)}),
                               expr_and({expr_not(v(4)), v(12)}),
                               expr_and({v(11), v(12)})});
  BoolExpr slim = simplify(mux_plus);
  CHECK(gate_equivalents(slim) == 3);
  CHECK(truth_table_of(slim, {4, 11, 12}) ==
        truth_table_of(mux_plus, {4, 11, 12}));

  // beyond the cap only algebraic cleanup applies
  std::vector<BoolExpr> wide;
  for (int i = 1; i <= 13; ++i) wide.push_back(v(i));
  wide.push_back(v(1));
  BoolExpr big = expr_or(wide);
  CHECK(simplify(big) == expr_or(std::vector<BoolExpr>(wide.begin(),
                                                       wide.end() - 1)));
}

TEST_CASE("simplify preserves the function on random netlist slices") {
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    testgen::TCircuit tc = testgen::random_circuit(seed, 4, 3, 2);
    satgrad::ExtractionResult res = testgen::to_extraction(tc);
    for (const BeEntry& e : res.be) {
      BoolExpr slim = simplify(e.expr);
      std::vector<int> vars = support(e.expr);
      if (vars.empty()) vars.push_back(1);
      CHECK(truth_table_of(slim, vars) == truth_table_of(e.expr, vars));
      CHECK(gate_equivalents(slim) <= gate_equivalents(e.expr));
    }
  }
}

TEST_CASE("decomposition matches the expression") {
  for (uint64_t seed = 30; seed <= 40; ++seed) {
    testgen::TCircuit tc = testgen::random_circuit(seed, 5, 3, 3);
    satgrad::ExtractionResult res = testgen::to_extraction(tc);
    satgrad::Circuit c = build(res);
    for (uint32_t m = 0; m < 32; ++m) {
      Assignment in(6, 0xFF);
      for (int i = 1; i <= 5; ++i) in[i] = (m >> (i - 1)) & 1;
      Assignment got = eval_discrete(c, in);
      for (const BeEntry& e : res.be)
        CHECK(got[e.var] == (eval_expr(e.expr, got) ? 1 : 0));
    }
  }
}

TEST_CASE("xnor chains fold the complement into the last gate") {
  Decomposition d = decompose_two_input(expr_xnor({v(1), v(2), v(3)}));
  REQUIRE(d.gates.size() == 2);
  CHECK(d.gates[0].op == ExprGate::Op::Xor2);
  CHECK(d.gates[1].op == ExprGate::Op::Xnor2);
  CHECK(gate_equivalents(expr_xnor({v(1), v(2), v(3)})) == 2);
}

TEST_CASE("gate cost ignores inverters") {
  CHECK(gate_equivalents(v(1)) == 0);
  CHECK(gate_equivalents(expr_not(v(1))) == 0);
  CHECK(gate_equivalents(expr_const(true)) == 0);
  CHECK(gate_equivalents(expr_and({v(1), v(2), v(3)})) == 2);
  CHECK(gate_equivalents(expr_or({expr_not(v(1)), v(2)})) == 1);
}

TEST_CASE("printer is stable") {
  CHECK(to_string(expr_and({v(1), expr_not(v(2))})) == "(x1 & ~x2)");
  CHECK(to_string(expr_xnor({v(1), v(2)})) == "~(x1 ^ x2)");
  CHECK(to_string(expr_const(true)) == "1");
  // children sort vars before compound terms
  CHECK(to_string(expr_or({expr_and({v(1), v(2)}), v(3)})) ==
        "(x3 | (x1 & x2))");
}
