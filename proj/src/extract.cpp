#include "satgrad/extract.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace satgrad {

std::vector<int> candidate_scan_order(const SubClauseBuffer& sc) {
  std::vector<int> order;
  std::unordered_set<int> seen;
  for (const Clause& cl : sc)
    for (const Literal& l : cl)
      if (seen.insert(l.var).second) order.push_back(l.var);
  return order;
}

BeEntry handle_underspecified(const SubClauseBuffer& sc, int aux_var,
                              int minimize_cap) {
  std::vector<BoolExpr> conj;
  conj.reserve(sc.size());
  for (const Clause& cl : sc) {
    std::vector<BoolExpr> disj;
    disj.reserve(cl.size());
    for (const Literal& l : cl) disj.push_back(expr_literal(l));
    conj.push_back(expr_or(std::move(disj)));
  }
  return {aux_var, simplify(expr_and(std::move(conj)), minimize_cap)};
}

namespace {

enum class Role : uint8_t { None, Pi, Defined };

bool mentions(const Clause& cl, int var) {
  for (const Literal& l : cl)
    if (l.var == var) return true;
  return false;
}

}  // namespace

ExtractionResult extract(const CnfFormula& cnf, const ExtractorConfig& cfg) {
  ExtractionResult res;
  res.num_vars = cnf.num_vars;

  std::vector<Role> role(cnf.num_vars + 1, Role::None);
  std::unordered_map<int, bool> po_target;
  std::unordered_map<int, bool> const_def;  // vars defined as a constant
  SubClauseBuffer sc;
  int next_aux = cnf.num_vars;

  auto mark_unsat = [&](const std::string& note) {
    if (!res.unsat) {
      res.unsat = true;
      res.unsat_note = note;
    }
  };

  auto add_po = [&](int var, bool target) {
    auto it = po_target.find(var);
    if (it != po_target.end()) {
      if (it->second != target)
        mark_unsat("x" + std::to_string(var) + " is forced to both 0 and 1");
      return;
    }
    if (auto cd = const_def.find(var);
        cd != const_def.end() && cd->second != target) {
      mark_unsat("x" + std::to_string(var) + " is defined as constant " +
                 (cd->second ? "1" : "0") + " but forced to " +
                 (target ? "1" : "0"));
      return;
    }
    po_target[var] = target;
    res.po.push_back({var, target});
    // A defined variable that turns out to be forced is an output, not an
    // intermediate; the definition stays either way.
    if (auto iv = std::find(res.iv.begin(), res.iv.end(), var);
        iv != res.iv.end())
      res.iv.erase(iv);
  };

  // New variables of the consumed clauses become primary inputs, in first
  // appearance order.
  auto classify_inputs = [&](const SubClauseBuffer& consumed, int except) {
    for (const Clause& cl : consumed) {
      for (const Literal& l : cl) {
        if (l.var == except) continue;
        if (role[l.var] == Role::None) {
          role[l.var] = Role::Pi;
          res.pi.push_back(l.var);
        }
      }
    }
  };

  auto fallback = [&]() {
    if (sc.empty()) return;
    int aux = ++next_aux;
    BeEntry entry = handle_underspecified(sc, aux, cfg.minimize_cap);
    if (entry.expr.is_const() && !entry.expr.const_value())
      mark_unsat("residual clause group is contradictory");
    res.be.push_back(entry);
    res.aux.push_back(aux);
    res.po.push_back({aux, true});
    classify_inputs(sc, 0);
    sc.clear();
  };

  // One definition per appended clause at most. Candidates are scanned in
  // descending index order: gate encodings introduce the output variable
  // after its inputs, so ties (a buffer or inverter pair pins either end)
  // resolve toward the conventional output.
  auto try_commit = [&]() {
    std::vector<int> cands = candidate_scan_order(sc);
    std::sort(cands.begin(), cands.end(), std::greater<int>());
    for (int v : cands) {
      BoolExpr f = find_boolean_expression({v, false}, sc);
      BoolExpr g = find_boolean_expression({v, true}, sc);
      if (is_complement(f, g, cfg.complement_cap) != Ternary::True) continue;
      BoolExpr def = simplify(f, cfg.minimize_cap);
      if (role[v] == Role::None) {
        res.be.push_back({v, def});
        role[v] = Role::Defined;
        if (def.is_const()) {
          const_def[v] = def.const_value();
          add_po(v, def.const_value());
        } else {
          res.iv.push_back(v);
        }
      } else {
        // Already classified: a re-derivation only adds information when it
        // pins the variable to a constant (e.g. a later unit clause).
        if (!def.is_const()) continue;
        add_po(v, def.const_value());
      }
      // Only the clauses touching v are explained by the new equivalence;
      // unrelated buffered clauses keep waiting for their own definition.
      SubClauseBuffer consumed, residue;
      for (Clause& cl : sc)
        (mentions(cl, v) ? consumed : residue).push_back(std::move(cl));
      classify_inputs(consumed, v);
      sc = std::move(residue);
      return;
    }
  };

  auto shares_var = [&](const Clause& cl) {
    std::unordered_set<int> in_sc;
    for (const Clause& c : sc)
      for (const Literal& l : c) in_sc.insert(l.var);
    for (const Literal& l : cl)
      if (in_sc.count(l.var)) return true;
    return false;
  };

  for (const Clause& cl : cnf.clauses) {
    if (!sc.empty() && !shares_var(cl)) fallback();
    sc.push_back(cl);
    try_commit();
  }
  fallback();

  // Variables that occur in no clause at all: free inputs.
  for (int v = 1; v <= cnf.num_vars; ++v) {
    if (role[v] == Role::None) {
      role[v] = Role::Pi;
      res.pi.push_back(v);
    }
  }
  return res;
}

PathClassification classify_paths(const ExtractionResult& res) {
  std::unordered_map<int, const BoolExpr*> def_of;
  for (const BeEntry& e : res.be) def_of[e.var] = &e.expr;

  std::unordered_set<int> reaches;  // vars with a definition path to an output
  std::vector<int> stack;
  for (const PoEntry& p : res.po) stack.push_back(p.var);
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    if (!reaches.insert(v).second) continue;
    if (auto it = def_of.find(v); it != def_of.end())
      for (int u : support(*it->second)) stack.push_back(u);
  }

  PathClassification pc;
  for (int v : res.pi)
    (reaches.count(v) ? pc.constrained_pi : pc.unconstrained_pi).push_back(v);
  return pc;
}

}  // namespace satgrad
