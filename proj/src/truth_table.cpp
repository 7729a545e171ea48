#include "satgrad/truth_table.hpp"

#include <bit>
#include <stdexcept>

namespace satgrad {

namespace {

// Alternating bit patterns for variable positions 0..5 within one word.
constexpr uint64_t kVarMask[6] = {
    0xaaaaaaaaaaaaaaaaull, 0xccccccccccccccccull, 0xf0f0f0f0f0f0f0f0ull,
    0xff00ff00ff00ff00ull, 0xffff0000ffff0000ull, 0xffffffff00000000ull,
};

size_t word_count(int num_vars) {
  return num_vars <= 6 ? 1 : (size_t{1} << (num_vars - 6));
}

}  // namespace

TruthTable::TruthTable(int num_vars) : num_vars_(num_vars) {
  if (num_vars < 0 || num_vars > kMaxTruthTableVars)
    throw std::invalid_argument("truth table limited to 16 variables");
  words_.assign(word_count(num_vars), 0);
}

void TruthTable::mask_top() {
  if (num_vars_ < 6) words_[0] &= (uint64_t{1} << (1u << num_vars_)) - 1;
}

TruthTable TruthTable::from_eval(int num_vars,
                                 const std::function<bool(uint32_t)>& f) {
  TruthTable t(num_vars);
  for (uint32_t r = 0; r < t.num_rows(); ++r)
    if (f(r)) t.words_[r >> 6] |= uint64_t{1} << (r & 63);
  return t;
}

TruthTable TruthTable::var(int num_vars, int i) {
  TruthTable t(num_vars);
  if (i < 0 || i >= num_vars)
    throw std::invalid_argument("variable position out of range");
  if (i < 6) {
    for (auto& w : t.words_) w = kVarMask[i];
    t.mask_top();
  } else {
    for (size_t wi = 0; wi < t.words_.size(); ++wi)
      if (wi & (size_t{1} << (i - 6))) t.words_[wi] = ~uint64_t{0};
  }
  return t;
}

TruthTable TruthTable::parity(int num_vars) {
  TruthTable t(num_vars);
  for (uint32_t r = 0; r < t.num_rows(); ++r)
    if (std::popcount(r) & 1) t.words_[r >> 6] |= uint64_t{1} << (r & 63);
  return t;
}

bool TruthTable::bit(uint32_t row) const {
  return (words_[row >> 6] >> (row & 63)) & 1;
}

void TruthTable::set_bit(uint32_t row, bool v) {
  if (v)
    words_[row >> 6] |= uint64_t{1} << (row & 63);
  else
    words_[row >> 6] &= ~(uint64_t{1} << (row & 63));
}

TruthTable TruthTable::operator~() const {
  TruthTable t = *this;
  for (auto& w : t.words_) w = ~w;
  t.mask_top();
  return t;
}

#define SATGRAD_TT_BINOP(op)                                        \
  TruthTable TruthTable::operator op(const TruthTable& o) const {   \
    if (num_vars_ != o.num_vars_)                                   \
      throw std::invalid_argument("truth table arity mismatch");    \
    TruthTable t = *this;                                           \
    for (size_t i = 0; i < words_.size(); ++i) t.words_[i] op## = o.words_[i]; \
    return t;                                                       \
  }

SATGRAD_TT_BINOP(&)
SATGRAD_TT_BINOP(|)
SATGRAD_TT_BINOP(^)
#undef SATGRAD_TT_BINOP

bool TruthTable::operator==(const TruthTable& o) const {
  return num_vars_ == o.num_vars_ && words_ == o.words_;
}

bool TruthTable::all_zero() const {
  for (uint64_t w : words_)
    if (w) return false;
  return true;
}

bool TruthTable::all_one() const { return (~*this).all_zero(); }

bool TruthTable::is_complement_of(const TruthTable& o) const {
  return *this == ~o;
}

uint32_t TruthTable::popcount() const {
  uint32_t n = 0;
  for (uint64_t w : words_) n += static_cast<uint32_t>(std::popcount(w));
  return n;
}

}  // namespace satgrad
