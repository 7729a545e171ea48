#include "satgrad/boolexpr.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <stdexcept>

namespace satgrad {

namespace {

const std::vector<BoolExpr> kNoChildren;

}  // namespace

BoolExpr::BoolExpr() { *this = expr_const(false); }

BoolExpr BoolExpr::make(Node n) {
  return BoolExpr(std::make_shared<const Node>(std::move(n)));
}

int BoolExpr::compare(const BoolExpr& a, const BoolExpr& b) {
  if (a.node_ == b.node_) return 0;
  if (a.kind() != b.kind())
    return static_cast<int>(a.kind()) < static_cast<int>(b.kind()) ? -1 : 1;
  switch (a.kind()) {
    case ExprKind::Const0:
    case ExprKind::Const1:
      return 0;
    case ExprKind::Var:
      if (a.var_index() != b.var_index())
        return a.var_index() < b.var_index() ? -1 : 1;
      return 0;
    default: {
      const auto& ca = a.children();
      const auto& cb = b.children();
      size_t n = std::min(ca.size(), cb.size());
      for (size_t i = 0; i < n; ++i) {
        int c = compare(ca[i], cb[i]);
        if (c != 0) return c;
      }
      if (ca.size() != cb.size()) return ca.size() < cb.size() ? -1 : 1;
      return 0;
    }
  }
}

BoolExpr expr_const(bool v) {
  // Shared singletons; every constant in every tree is one of these nodes.
  static const BoolExpr zero =
      BoolExpr::make({ExprKind::Const0, 0, {}});
  static const BoolExpr one = BoolExpr::make({ExprKind::Const1, 0, {}});
  return v ? one : zero;
}

BoolExpr expr_var(int var) {
  if (var <= 0) throw std::invalid_argument("variable index must be positive");
  return BoolExpr::make({ExprKind::Var, var, {}});
}

BoolExpr expr_not(BoolExpr e) {
  switch (e.kind()) {
    case ExprKind::Const0:
      return expr_const(true);
    case ExprKind::Const1:
      return expr_const(false);
    case ExprKind::Not:
      return e.children()[0];
    default:
      return BoolExpr::make({ExprKind::Not, 0, {std::move(e)}});
  }
}

BoolExpr expr_nary(ExprKind k, std::vector<BoolExpr> es) {
  if (k == ExprKind::And || k == ExprKind::Or) {
    const bool is_and = k == ExprKind::And;
    std::vector<BoolExpr> kids;
    kids.reserve(es.size());
    for (BoolExpr& e : es) {
      if (e.kind() == k) {  // flatten And/And, Or/Or
        for (const BoolExpr& c : e.children()) kids.push_back(c);
      } else if (e.kind() == ExprKind::Const0) {
        if (is_and) return expr_const(false);
      } else if (e.kind() == ExprKind::Const1) {
        if (!is_and) return expr_const(true);
      } else {
        kids.push_back(std::move(e));
      }
    }
    if (kids.empty()) return expr_const(is_and);
    if (kids.size() == 1) return kids[0];
    std::sort(kids.begin(), kids.end(),
              [](const BoolExpr& a, const BoolExpr& b) {
                return BoolExpr::compare(a, b) < 0;
              });
    return BoolExpr::make({k, 0, std::move(kids)});
  }

  if (k == ExprKind::Xor || k == ExprKind::Xnor) {
    bool flip = k == ExprKind::Xnor;
    std::vector<BoolExpr> kids;
    kids.reserve(es.size());
    for (BoolExpr& e : es) {
      switch (e.kind()) {
        case ExprKind::Xor:
          for (const BoolExpr& c : e.children()) kids.push_back(c);
          break;
        case ExprKind::Xnor:
          flip = !flip;
          for (const BoolExpr& c : e.children()) kids.push_back(c);
          break;
        case ExprKind::Const0:
          break;
        case ExprKind::Const1:
          flip = !flip;
          break;
        default:
          kids.push_back(std::move(e));
      }
    }
    if (kids.empty()) return expr_const(flip);
    if (kids.size() == 1) return flip ? expr_not(kids[0]) : kids[0];
    std::sort(kids.begin(), kids.end(),
              [](const BoolExpr& a, const BoolExpr& b) {
                return BoolExpr::compare(a, b) < 0;
              });
    return BoolExpr::make(
        {flip ? ExprKind::Xnor : ExprKind::Xor, 0, std::move(kids)});
  }

  throw std::invalid_argument("expr_nary expects And/Or/Xor/Xnor");
}

BoolExpr expr_and(std::vector<BoolExpr> es) {
  return expr_nary(ExprKind::And, std::move(es));
}
BoolExpr expr_or(std::vector<BoolExpr> es) {
  return expr_nary(ExprKind::Or, std::move(es));
}
BoolExpr expr_xor(std::vector<BoolExpr> es) {
  return expr_nary(ExprKind::Xor, std::move(es));
}
BoolExpr expr_xnor(std::vector<BoolExpr> es) {
  return expr_nary(ExprKind::Xnor, std::move(es));
}

BoolExpr expr_literal(Literal l) {
  BoolExpr v = expr_var(l.var);
  return l.negated ? expr_not(v) : v;
}

namespace {

void collect_support(const BoolExpr& e, std::vector<int>& out) {
  switch (e.kind()) {
    case ExprKind::Var:
      out.push_back(e.var_index());
      return;
    case ExprKind::Const0:
    case ExprKind::Const1:
      return;
    default:
      for (const BoolExpr& c : e.children()) collect_support(c, out);
  }
}

}  // namespace

std::vector<int> support(const BoolExpr& e) {
  std::vector<int> s;
  collect_support(e, s);
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

bool eval_expr(const BoolExpr& e, const Assignment& a) {
  switch (e.kind()) {
    case ExprKind::Const0:
      return false;
    case ExprKind::Const1:
      return true;
    case ExprKind::Var: {
      int v = e.var_index();
      if (static_cast<size_t>(v) >= a.size() || a[v] > 1)
        throw std::invalid_argument("variable " + std::to_string(v) +
                                    " is unassigned");
      return a[v] != 0;
    }
    case ExprKind::Not:
      return !eval_expr(e.children()[0], a);
    case ExprKind::And:
      for (const BoolExpr& c : e.children())
        if (!eval_expr(c, a)) return false;
      return true;
    case ExprKind::Or:
      for (const BoolExpr& c : e.children())
        if (eval_expr(c, a)) return true;
      return false;
    case ExprKind::Xor:
    case ExprKind::Xnor: {
      bool acc = e.kind() == ExprKind::Xnor;
      for (const BoolExpr& c : e.children()) acc ^= eval_expr(c, a);
      return acc;
    }
  }
  return false;  // unreachable
}

TruthTable truth_table_of(const BoolExpr& e, const std::vector<int>& vars) {
  const int n = static_cast<int>(vars.size());
  switch (e.kind()) {
    case ExprKind::Const0:
      return TruthTable(n);
    case ExprKind::Const1:
      return ~TruthTable(n);
    case ExprKind::Var: {
      auto it = std::find(vars.begin(), vars.end(), e.var_index());
      if (it == vars.end())
        throw std::invalid_argument("variable order misses x" +
                                    std::to_string(e.var_index()));
      return TruthTable::var(n, static_cast<int>(it - vars.begin()));
    }
    case ExprKind::Not:
      return ~truth_table_of(e.children()[0], vars);
    case ExprKind::And:
    case ExprKind::Or:
    case ExprKind::Xor:
    case ExprKind::Xnor: {
      TruthTable acc = truth_table_of(e.children()[0], vars);
      for (size_t i = 1; i < e.children().size(); ++i) {
        TruthTable t = truth_table_of(e.children()[i], vars);
        if (e.kind() == ExprKind::And)
          acc = acc & t;
        else if (e.kind() == ExprKind::Or)
          acc = acc | t;
        else
          acc = acc ^ t;
      }
      if (e.kind() == ExprKind::Xnor) acc = ~acc;
      return acc;
    }
  }
  return TruthTable(n);  // unreachable
}

BoolExpr find_boolean_expression(Literal target,
                                 const std::vector<Clause>& sc) {
  const Literal neg{target.var, !target.negated};
  std::vector<BoolExpr> conj;
  for (const Clause& cl : sc) {
    bool has_neg = false, has_pos = false;
    for (const Literal& l : cl) {
      if (l == neg) has_neg = true;
      if (l == target) has_pos = true;
    }
    if (!has_neg || has_pos) continue;  // not constraining / tautology
    std::vector<BoolExpr> disj;
    for (const Literal& l : cl)
      if (l.var != target.var) disj.push_back(expr_literal(l));
    conj.push_back(expr_or(std::move(disj)));
  }
  return expr_and(std::move(conj));
}

Ternary is_complement(const BoolExpr& f, const BoolExpr& g,
                      int complement_cap) {
  std::vector<int> s = support(f);
  std::vector<int> sg = support(g);
  s.insert(s.end(), sg.begin(), sg.end());
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  // The truth table backend cannot go past kMaxTruthTableVars, so a larger
  // caller cap silently degrades to Undecided rather than throwing.
  int cap = std::min(complement_cap, kMaxTruthTableVars);
  if (static_cast<int>(s.size()) > cap) return Ternary::Undecided;
  return truth_table_of(f, s).is_complement_of(truth_table_of(g, s))
             ? Ternary::True
             : Ternary::False;
}

namespace {

// ---- algebraic cleanup ----------------------------------------------------

// Drops repeated children (keep one) and detects complementary pairs; the
// children are canonical and sorted, so duplicates are adjacent.
BoolExpr rebuild_and_or(ExprKind k, const std::vector<BoolExpr>& sorted_kids) {
  std::vector<BoolExpr> kids;
  kids.reserve(sorted_kids.size());
  for (const BoolExpr& c : sorted_kids)
    if (kids.empty() || kids.back() != c) kids.push_back(c);
  for (const BoolExpr& c : kids) {
    if (c.kind() != ExprKind::Not) continue;
    const BoolExpr& inner = c.children()[0];
    for (const BoolExpr& other : kids)
      if (other == inner) return expr_const(k == ExprKind::Or);
  }
  return expr_nary(k, std::move(kids));
}

// Xor-family: ~a contributes a plus a parity flip, then equal pairs cancel.
BoolExpr rebuild_xor(ExprKind k, const std::vector<BoolExpr>& in_kids) {
  bool flip = k == ExprKind::Xnor;
  std::vector<BoolExpr> kids;
  kids.reserve(in_kids.size());
  for (const BoolExpr& c : in_kids) {
    if (c.kind() == ExprKind::Not) {
      flip = !flip;
      kids.push_back(c.children()[0]);
    } else {
      kids.push_back(c);
    }
  }
  std::sort(kids.begin(), kids.end(),
            [](const BoolExpr& a, const BoolExpr& b) {
              return BoolExpr::compare(a, b) < 0;
            });
  std::vector<BoolExpr> kept;
  for (size_t i = 0; i < kids.size();) {
    if (i + 1 < kids.size() && kids[i] == kids[i + 1]) {
      i += 2;  // a ^ a = 0
    } else {
      kept.push_back(kids[i]);
      ++i;
    }
  }
  return expr_nary(flip ? ExprKind::Xnor : ExprKind::Xor, std::move(kept));
}

BoolExpr local_pass(const BoolExpr& e) {
  switch (e.kind()) {
    case ExprKind::Const0:
    case ExprKind::Const1:
    case ExprKind::Var:
      return e;
    case ExprKind::Not:
      return expr_not(local_pass(e.children()[0]));
    case ExprKind::And:
    case ExprKind::Or:
    case ExprKind::Xor:
    case ExprKind::Xnor: {
      std::vector<BoolExpr> kids;
      kids.reserve(e.children().size());
      for (const BoolExpr& c : e.children()) kids.push_back(local_pass(c));
      BoolExpr flat = expr_nary(e.kind(), std::move(kids));
      if (flat.kind() == ExprKind::And || flat.kind() == ExprKind::Or)
        return rebuild_and_or(flat.kind(), flat.children());
      if (flat.kind() == ExprKind::Xor || flat.kind() == ExprKind::Xnor)
        return rebuild_xor(flat.kind(), flat.children());
      return flat;
    }
  }
  return e;  // unreachable
}

BoolExpr local_fixpoint(const BoolExpr& e) {
  BoolExpr cur = e;
  for (int round = 0; round < 8; ++round) {
    BoolExpr next = local_pass(cur);
    if (next == cur) break;
    cur = next;
  }
  return cur;
}

// ---- two-level minimization ----------------------------------------------

struct Implicant {
  uint32_t value = 0;  // dashed positions zeroed
  uint32_t mask = 0;   // 1 = variable eliminated

  friend bool operator<(const Implicant& a, const Implicant& b) {
    return a.value != b.value ? a.value < b.value : a.mask < b.mask;
  }
  friend bool operator==(const Implicant& a, const Implicant& b) {
    return a.value == b.value && a.mask == b.mask;
  }
  bool covers(uint32_t m) const { return (m & ~mask) == value; }
};

std::vector<Implicant> prime_implicants(const std::vector<uint32_t>& minterms) {
  std::vector<Implicant> current;
  current.reserve(minterms.size());
  for (uint32_t m : minterms) current.push_back({m, 0});
  std::vector<Implicant> primes;
  while (!current.empty()) {
    std::vector<bool> combined(current.size(), false);
    std::vector<Implicant> next;
    for (size_t i = 0; i < current.size(); ++i) {
      for (size_t j = i + 1; j < current.size(); ++j) {
        if (current[i].mask != current[j].mask) continue;
        uint32_t diff = current[i].value ^ current[j].value;
        if (std::popcount(diff) != 1) continue;
        combined[i] = combined[j] = true;
        next.push_back({current[i].value & ~diff, current[i].mask | diff});
      }
      if (!combined[i]) primes.push_back(current[i]);
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    current = std::move(next);
  }
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  return primes;
}

BoolExpr sop_from_table(const TruthTable& tt, const std::vector<int>& vars) {
  std::vector<uint32_t> minterms;
  for (uint32_t r = 0; r < tt.num_rows(); ++r)
    if (tt.bit(r)) minterms.push_back(r);
  if (minterms.empty()) return expr_const(false);
  if (minterms.size() == tt.num_rows()) return expr_const(true);

  std::vector<Implicant> primes = prime_implicants(minterms);

  // Essential primes first, then greedy set cover (most new minterms, ties to
  // the earlier prime). Minimality is best-effort beyond the essentials.
  std::vector<bool> covered(minterms.size(), false);
  std::vector<bool> chosen(primes.size(), false);
  size_t uncovered = minterms.size();
  for (size_t mi = 0; mi < minterms.size(); ++mi) {
    size_t hits = 0, last = 0;
    for (size_t pi = 0; pi < primes.size(); ++pi) {
      if (primes[pi].covers(minterms[mi])) {
        ++hits;
        last = pi;
        if (hits > 1) break;
      }
    }
    if (hits == 1 && !chosen[last]) {
      chosen[last] = true;
      for (size_t mj = 0; mj < minterms.size(); ++mj) {
        if (!covered[mj] && primes[last].covers(minterms[mj])) {
          covered[mj] = true;
          --uncovered;
        }
      }
    }
  }
  while (uncovered > 0) {
    size_t best = primes.size();
    size_t best_gain = 0;
    for (size_t pi = 0; pi < primes.size(); ++pi) {
      if (chosen[pi]) continue;
      size_t gain = 0;
      for (size_t mj = 0; mj < minterms.size(); ++mj)
        if (!covered[mj] && primes[pi].covers(minterms[mj])) ++gain;
      if (gain > best_gain) {
        best_gain = gain;
        best = pi;
      }
    }
    chosen[best] = true;
    for (size_t mj = 0; mj < minterms.size(); ++mj) {
      if (!covered[mj] && primes[best].covers(minterms[mj])) {
        covered[mj] = true;
        --uncovered;
      }
    }
  }

  std::vector<BoolExpr> terms;
  for (size_t pi = 0; pi < primes.size(); ++pi) {
    if (!chosen[pi]) continue;
    std::vector<BoolExpr> lits;
    for (size_t b = 0; b < vars.size(); ++b) {
      if (primes[pi].mask & (1u << b)) continue;
      BoolExpr v = expr_var(vars[b]);
      lits.push_back((primes[pi].value >> b) & 1 ? v : expr_not(v));
    }
    terms.push_back(expr_and(std::move(lits)));
  }
  return expr_or(std::move(terms));
}

}  // namespace

BoolExpr simplify(const BoolExpr& e, int minimize_cap) {
  BoolExpr base = local_fixpoint(e);
  if (base.is_const() || base.kind() == ExprKind::Var) return base;

  std::vector<int> vars = support(base);
  if (static_cast<int>(vars.size()) > minimize_cap) return base;

  TruthTable tt = truth_table_of(base, vars);
  if (tt.all_zero()) return expr_const(false);
  if (tt.all_one()) return expr_const(true);

  std::vector<BoolExpr> candidates;
  if (vars.size() >= 2) {
    TruthTable par = TruthTable::parity(static_cast<int>(vars.size()));
    if (tt == par || tt.is_complement_of(par)) {
      std::vector<BoolExpr> vs;
      for (int v : vars) vs.push_back(expr_var(v));
      candidates.push_back(
          expr_nary(tt == par ? ExprKind::Xor : ExprKind::Xnor, std::move(vs)));
    }
  }
  candidates.push_back(sop_from_table(tt, vars));
  candidates.push_back(base);

  size_t best = 0;
  int best_cost = gate_equivalents(candidates[0]);
  for (size_t i = 1; i < candidates.size(); ++i) {
    int cost = gate_equivalents(candidates[i]);
    if (cost < best_cost) {
      best_cost = cost;
      best = i;
    }
  }
  return candidates[best];
}

namespace {

struct ExprLess {
  bool operator()(const BoolExpr& a, const BoolExpr& b) const {
    return BoolExpr::compare(a, b) < 0;
  }
};

GateRef decompose_rec(const BoolExpr& e, Decomposition& out,
                      std::map<BoolExpr, GateRef, ExprLess>& memo) {
  if (auto it = memo.find(e); it != memo.end()) return it->second;
  GateRef ref;
  switch (e.kind()) {
    case ExprKind::Const0:
      ref = {GateRef::Src::Const, 0};
      break;
    case ExprKind::Const1:
      ref = {GateRef::Src::Const, 1};
      break;
    case ExprKind::Var:
      ref = {GateRef::Src::Var, e.var_index()};
      break;
    case ExprKind::Not: {
      GateRef a = decompose_rec(e.children()[0], out, memo);
      out.gates.push_back({ExprGate::Op::Not, a, {}});
      ref = {GateRef::Src::Gate, static_cast<int>(out.gates.size()) - 1};
      break;
    }
    case ExprKind::And:
    case ExprKind::Or:
    case ExprKind::Xor:
    case ExprKind::Xnor: {
      std::vector<GateRef> refs;
      refs.reserve(e.children().size());
      for (const BoolExpr& c : e.children())
        refs.push_back(decompose_rec(c, out, memo));
      ExprGate::Op chain_op;
      switch (e.kind()) {
        case ExprKind::And: chain_op = ExprGate::Op::And2; break;
        case ExprKind::Or: chain_op = ExprGate::Op::Or2; break;
        default: chain_op = ExprGate::Op::Xor2; break;  // Xnor chains too
      }
      GateRef acc = refs[0];
      for (size_t i = 1; i < refs.size(); ++i) {
        ExprGate::Op op = chain_op;
        if (e.kind() == ExprKind::Xnor && i + 1 == refs.size())
          op = ExprGate::Op::Xnor2;  // complement folded into the last gate
        out.gates.push_back({op, acc, refs[i]});
        acc = {GateRef::Src::Gate, static_cast<int>(out.gates.size()) - 1};
      }
      ref = acc;
      break;
    }
  }
  memo.emplace(e, ref);
  return ref;
}

}  // namespace

Decomposition decompose_two_input(const BoolExpr& e) {
  Decomposition out;
  std::map<BoolExpr, GateRef, ExprLess> memo;
  out.output = decompose_rec(e, out, memo);
  return out;
}

int gate_equivalents(const BoolExpr& e) {
  Decomposition d = decompose_two_input(e);
  int n = 0;
  for (const ExprGate& g : d.gates)
    if (g.op != ExprGate::Op::Not) ++n;
  return n;
}

std::string to_string(const BoolExpr& e) {
  switch (e.kind()) {
    case ExprKind::Const0:
      return "0";
    case ExprKind::Const1:
      return "1";
    case ExprKind::Var:
      return "x" + std::to_string(e.var_index());
    case ExprKind::Not:
      // Leaves print bare, compound nodes parenthesize themselves.
      return "~" + to_string(e.children()[0]);
    case ExprKind::And:
    case ExprKind::Or:
    case ExprKind::Xor:
    case ExprKind::Xnor: {
      const char* op = e.kind() == ExprKind::And  ? " & "
                       : e.kind() == ExprKind::Or ? " | "
                                                  : " ^ ";
      std::string s = "(";
      for (size_t i = 0; i < e.children().size(); ++i) {
        if (i) s += op;
        s += to_string(e.children()[i]);
      }
      s += ")";
      return e.kind() == ExprKind::Xnor ? "~" + s : s;
    }
  }
  return "";  // unreachable
}

}  // namespace satgrad
