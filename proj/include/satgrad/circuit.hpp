#pragma once

// Flat gate-level representation of an extraction result: a topologically
// ordered node array of 1/2-input gates. Definitions share nodes through the
// variables they reference; each defined variable owns exactly one node
// (identity definitions materialize as BUF), which keeps the JSON form
// loss-free.

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "satgrad/cnf.hpp"
#include "satgrad/extract.hpp"

namespace satgrad {

enum class GateKind : uint8_t {
  Input, Const0, Const1, Buf, Not, And2, Or2, Xor2, Xnor2
};

const char* gate_kind_name(GateKind k);

struct GateNode {
  GateKind kind = GateKind::Const0;
  int a = -1, b = -1;  // operand node ids, always < own id
  int var = 0;         // CNF/aux variable computed here, 0 = internal
};

struct Circuit {
  int num_vars = 0;                           // original CNF variables
  std::vector<GateNode> nodes;                // topological order
  std::vector<int> inputs;                    // PI vars, classification order
  std::vector<PoEntry> outputs;               // constrained vars + targets
  std::unordered_map<int, int> var_to_node;   // every PI/defined var

  int node_of(int var) const;  // throws if var has no node
};

Circuit build(const ExtractionResult& res);

// Values for every variable that owns a node (original and aux), sized by the
// largest var id + 1. `pi_values` must assign 0/1 to every input var.
Assignment eval_discrete(const Circuit& c, const Assignment& pi_values);

// 2-input AND/OR/XOR/XNOR nodes count 1; INPUT/CONST/BUF/NOT count 0.
long long gate_equivalents(const Circuit& c);

// The same convention applied to the flat formula: every clause is an OR
// chain (len-1 gates) and the clause conjunction an AND chain (count-1).
long long cnf_gate_equivalents(const CnfFormula& cnf);

class SchemaError : public std::runtime_error {
 public:
  explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

std::string export_json(const Circuit& c, const ExtractionResult& res);
std::pair<Circuit, ExtractionResult> import_json(const std::string& text);

}  // namespace satgrad
