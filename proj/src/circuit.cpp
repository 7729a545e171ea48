#include "satgrad/circuit.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include "json.hpp"

namespace satgrad {

const char* gate_kind_name(GateKind k) {
  switch (k) {
    case GateKind::Input: return "INPUT";
    case GateKind::Const0: return "CONST0";
    case GateKind::Const1: return "CONST1";
    case GateKind::Buf: return "BUF";
    case GateKind::Not: return "NOT";
    case GateKind::And2: return "AND2";
    case GateKind::Or2: return "OR2";
    case GateKind::Xor2: return "XOR2";
    case GateKind::Xnor2: return "XNOR2";
  }
  return "?";
}

namespace {

int operand_count(GateKind k) {
  switch (k) {
    case GateKind::Input:
    case GateKind::Const0:
    case GateKind::Const1:
      return 0;
    case GateKind::Buf:
    case GateKind::Not:
      return 1;
    default:
      return 2;
  }
}

GateKind kind_from_name(const std::string& s) {
  for (GateKind k : {GateKind::Input, GateKind::Const0, GateKind::Const1,
                     GateKind::Buf, GateKind::Not, GateKind::And2,
                     GateKind::Or2, GateKind::Xor2, GateKind::Xnor2})
    if (s == gate_kind_name(k)) return k;
  throw SchemaError("unknown gate kind '" + s + "'");
}

}  // namespace

int Circuit::node_of(int var) const {
  auto it = var_to_node.find(var);
  if (it == var_to_node.end())
    throw std::invalid_argument("x" + std::to_string(var) +
                                " has no circuit node");
  return it->second;
}

Circuit build(const ExtractionResult& res) {
  Circuit c;
  c.num_vars = res.num_vars;
  c.inputs = res.pi;
  c.outputs = res.po;

  for (int v : res.pi) {
    c.var_to_node.emplace(v, static_cast<int>(c.nodes.size()));
    c.nodes.push_back({GateKind::Input, -1, -1, v});
  }

  for (const BeEntry& def : res.be) {
    Decomposition d = decompose_two_input(def.expr);
    std::vector<int> gate_node(d.gates.size(), -1);
    auto resolve = [&](const GateRef& ref) -> int {
      switch (ref.src) {
        case GateRef::Src::Var:
          return c.node_of(ref.index);  // classified before this definition
        case GateRef::Src::Gate:
          return gate_node[ref.index];
        case GateRef::Src::Const:
          // Constants never survive inside simplified operands; they can
          // only be a whole definition, handled below.
          throw std::logic_error("constant operand in decomposition");
      }
      return -1;
    };
    for (size_t i = 0; i < d.gates.size(); ++i) {
      const ExprGate& g = d.gates[i];
      GateKind k = GateKind::Not;
      switch (g.op) {
        case ExprGate::Op::Not: k = GateKind::Not; break;
        case ExprGate::Op::And2: k = GateKind::And2; break;
        case ExprGate::Op::Or2: k = GateKind::Or2; break;
        case ExprGate::Op::Xor2: k = GateKind::Xor2; break;
        case ExprGate::Op::Xnor2: k = GateKind::Xnor2; break;
      }
      int a = resolve(g.a);
      int b = g.op == ExprGate::Op::Not ? -1 : resolve(g.b);
      gate_node[i] = static_cast<int>(c.nodes.size());
      c.nodes.push_back({k, a, b, 0});
    }
    // Every defined variable owns a node so the JSON form can name it.
    int out_node = -1;
    switch (d.output.src) {
      case GateRef::Src::Gate:
        out_node = gate_node[d.output.index];
        break;
      case GateRef::Src::Var:
        out_node = static_cast<int>(c.nodes.size());
        c.nodes.push_back({GateKind::Buf, c.node_of(d.output.index), -1, 0});
        break;
      case GateRef::Src::Const:
        out_node = static_cast<int>(c.nodes.size());
        c.nodes.push_back(
            {d.output.index ? GateKind::Const1 : GateKind::Const0, -1, -1, 0});
        break;
    }
    c.nodes[out_node].var = def.var;
    c.var_to_node.emplace(def.var, out_node);
  }
  return c;
}

Assignment eval_discrete(const Circuit& c, const Assignment& pi_values) {
  std::vector<uint8_t> val(c.nodes.size(), 0);
  for (size_t i = 0; i < c.nodes.size(); ++i) {
    const GateNode& n = c.nodes[i];
    switch (n.kind) {
      case GateKind::Input: {
        int v = n.var;
        if (static_cast<size_t>(v) >= pi_values.size() || pi_values[v] > 1)
          throw std::invalid_argument("input x" + std::to_string(v) +
                                      " is unassigned");
        val[i] = pi_values[v];
        break;
      }
      case GateKind::Const0: val[i] = 0; break;
      case GateKind::Const1: val[i] = 1; break;
      case GateKind::Buf: val[i] = val[n.a]; break;
      case GateKind::Not: val[i] = !val[n.a]; break;
      case GateKind::And2: val[i] = val[n.a] & val[n.b]; break;
      case GateKind::Or2: val[i] = val[n.a] | val[n.b]; break;
      case GateKind::Xor2: val[i] = val[n.a] ^ val[n.b]; break;
      case GateKind::Xnor2: val[i] = !(val[n.a] ^ val[n.b]); break;
    }
  }
  int max_var = c.num_vars;
  for (const auto& [v, _] : c.var_to_node) max_var = std::max(max_var, v);
  Assignment out(max_var + 1, 0xFF);
  for (const auto& [v, node] : c.var_to_node) out[v] = val[node];
  return out;
}

long long gate_equivalents(const Circuit& c) {
  long long n = 0;
  for (const GateNode& g : c.nodes) {
    switch (g.kind) {
      case GateKind::And2:
      case GateKind::Or2:
      case GateKind::Xor2:
      case GateKind::Xnor2:
        ++n;
        break;
      default:
        break;
    }
  }
  return n;
}

long long cnf_gate_equivalents(const CnfFormula& cnf) {
  if (cnf.clauses.empty()) return 0;
  long long n = static_cast<long long>(cnf.clauses.size()) - 1;  // AND chain
  for (const Clause& cl : cnf.clauses)
    n += static_cast<long long>(cl.size()) - 1;  // OR chain per clause
  return n;
}

std::string export_json(const Circuit& c, const ExtractionResult& res) {
  if (res.num_vars != c.num_vars || res.po.size() != c.outputs.size())
    throw std::invalid_argument("circuit does not match extraction result");
  nlohmann::json j;
  j["num_vars"] = c.num_vars;
  j["aux_base"] = c.num_vars;
  j["inputs"] = c.inputs;
  auto outs = nlohmann::json::array();
  for (const PoEntry& p : c.outputs)
    outs.push_back({{"var", p.var}, {"target", p.target ? 1 : 0}});
  j["outputs"] = outs;
  auto gates = nlohmann::json::array();
  for (size_t i = 0; i < c.nodes.size(); ++i) {
    const GateNode& n = c.nodes[i];
    nlohmann::json g;
    g["id"] = i;
    g["kind"] = gate_kind_name(n.kind);
    auto args = nlohmann::json::array();
    if (operand_count(n.kind) >= 1) args.push_back(n.a);
    if (operand_count(n.kind) == 2) args.push_back(n.b);
    g["args"] = args;
    if (n.var != 0)
      g["var"] = n.var;
    else
      g["var"] = nullptr;
    gates.push_back(g);
  }
  j["gates"] = gates;
  return j.dump(2) + "\n";
}

namespace {

BoolExpr unfold_operand(const Circuit& c, int id);

BoolExpr unfold_gate(const Circuit& c, int id) {
  const GateNode& n = c.nodes[id];
  switch (n.kind) {
    case GateKind::Input:
      return expr_var(n.var);
    case GateKind::Const0:
      return expr_const(false);
    case GateKind::Const1:
      return expr_const(true);
    case GateKind::Buf:
      return unfold_operand(c, n.a);
    case GateKind::Not:
      return expr_not(unfold_operand(c, n.a));
    case GateKind::And2:
      return expr_and({unfold_operand(c, n.a), unfold_operand(c, n.b)});
    case GateKind::Or2:
      return expr_or({unfold_operand(c, n.a), unfold_operand(c, n.b)});
    case GateKind::Xor2:
      return expr_xor({unfold_operand(c, n.a), unfold_operand(c, n.b)});
    case GateKind::Xnor2:
      return expr_xnor({unfold_operand(c, n.a), unfold_operand(c, n.b)});
  }
  return expr_const(false);
}

// Operands stop at named nodes: a reference to a defined variable or input
// reads as that variable, everything else keeps unfolding.
BoolExpr unfold_operand(const Circuit& c, int id) {
  const GateNode& n = c.nodes[id];
  if (n.var != 0) return expr_var(n.var);
  return unfold_gate(c, id);
}

}  // namespace

std::pair<Circuit, ExtractionResult> import_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("bad json: ") + e.what());
  }
  try {
    Circuit c;
    c.num_vars = j.at("num_vars").get<int>();
    int aux_base = j.at("aux_base").get<int>();
    if (c.num_vars < 0 || aux_base != c.num_vars)
      throw SchemaError("aux_base must equal num_vars");
    c.inputs = j.at("inputs").get<std::vector<int>>();
    for (const auto& g : j.at("gates")) {
      int id = g.at("id").get<int>();
      if (id != static_cast<int>(c.nodes.size()))
        throw SchemaError("gate ids must be consecutive from 0");
      GateNode n;
      n.kind = kind_from_name(g.at("kind").get<std::string>());
      auto args = g.at("args").get<std::vector<int>>();
      if (static_cast<int>(args.size()) != operand_count(n.kind))
        throw SchemaError("wrong operand count for " +
                          std::string(gate_kind_name(n.kind)));
      if (operand_count(n.kind) >= 1) n.a = args[0];
      if (operand_count(n.kind) == 2) n.b = args[1];
      if ((n.a >= id && n.a != -1) || (n.b >= id && n.b != -1) || n.a < -1 ||
          n.b < -1)
        throw SchemaError("operands must reference earlier gates");
      if (!g.at("var").is_null()) {
        n.var = g.at("var").get<int>();
        if (n.var <= 0) throw SchemaError("gate var must be positive");
        if (!c.var_to_node.emplace(n.var, id).second)
          throw SchemaError("x" + std::to_string(n.var) +
                            " mapped to two gates");
      }
      c.nodes.push_back(n);
    }
    for (int v : c.inputs) {
      auto it = c.var_to_node.find(v);
      if (it == c.var_to_node.end() ||
          c.nodes[it->second].kind != GateKind::Input)
        throw SchemaError("input x" + std::to_string(v) +
                          " has no INPUT gate");
    }
    for (const auto& [v, id] : c.var_to_node) {
      if (c.nodes[id].kind == GateKind::Input &&
          std::find(c.inputs.begin(), c.inputs.end(), v) == c.inputs.end())
        throw SchemaError("INPUT gate for x" + std::to_string(v) +
                          " missing from inputs");
    }

    ExtractionResult res;
    res.num_vars = c.num_vars;
    res.pi = c.inputs;
    std::unordered_set<int> po_vars;
    for (const auto& o : j.at("outputs")) {
      PoEntry p;
      p.var = o.at("var").get<int>();
      int t = o.at("target").get<int>();
      if (t != 0 && t != 1) throw SchemaError("output target must be 0 or 1");
      p.target = t != 0;
      if (!c.var_to_node.count(p.var))
        throw SchemaError("output x" + std::to_string(p.var) +
                          " has no gate");
      if (!po_vars.insert(p.var).second)
        throw SchemaError("duplicate output x" + std::to_string(p.var));
      c.outputs.push_back(p);
      res.po.push_back(p);
    }
    for (size_t id = 0; id < c.nodes.size(); ++id) {
      const GateNode& n = c.nodes[id];
      if (n.var == 0 || n.kind == GateKind::Input) continue;
      res.be.push_back({n.var, unfold_gate(c, static_cast<int>(id))});
      if (n.var > aux_base)
        res.aux.push_back(n.var);
      else if (!po_vars.count(n.var))
        res.iv.push_back(n.var);
    }
    return {std::move(c), std::move(res)};
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("bad circuit json: ") + e.what());
  }
}

}  // namespace satgrad
