#pragma once

// Packed truth tables over up to 16 variables. Bit r of the table is the
// function value on the assignment whose i-th variable equals bit i of r.

#include <cstdint>
#include <functional>
#include <vector>

namespace satgrad {

// Hard cap on table width: 2^16 rows (8 KiB) is the largest table we ever
// want to materialize during extraction.
inline constexpr int kMaxTruthTableVars = 16;

class TruthTable {
 public:
  TruthTable() = default;
  explicit TruthTable(int num_vars);

  static TruthTable from_eval(int num_vars,
                              const std::function<bool(uint32_t)>& f);
  // Projection onto variable position `i`: bit r = (r >> i) & 1.
  static TruthTable var(int num_vars, int i);
  static TruthTable parity(int num_vars);  // XOR of all variables

  int num_vars() const { return num_vars_; }
  uint32_t num_rows() const { return 1u << num_vars_; }
  bool bit(uint32_t row) const;
  void set_bit(uint32_t row, bool v);

  TruthTable operator~() const;
  TruthTable operator&(const TruthTable& o) const;
  TruthTable operator|(const TruthTable& o) const;
  TruthTable operator^(const TruthTable& o) const;
  bool operator==(const TruthTable& o) const;

  bool all_zero() const;
  bool all_one() const;
  bool is_complement_of(const TruthTable& o) const;
  uint32_t popcount() const;

 private:
  int num_vars_ = 0;
  std::vector<uint64_t> words_ = {0};  // 2^max(0, n-6) words, top bits masked

  void mask_top();
};

}  // namespace satgrad
