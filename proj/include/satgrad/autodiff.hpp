#pragma once

// Batched probabilistic evaluation of a circuit and exact reverse-mode
// gradients of the squared output error. Gate semantics over probabilities:
//   NOT p        -> 1 - p
//   AND(p, q)    -> p * q
//   OR(p, q)     -> 1 - (1-p)(1-q)
//   XOR(p, q)    -> (1-p)q + p(1-q)
//   XNOR(p, q)   -> pq + (1-p)(1-q)
// Rows of a batch are independent and every reduction uses a fixed order, so
// results are bitwise identical for any thread count.

#include <cstdint>
#include <vector>

#include "satgrad/circuit.hpp"

namespace satgrad {

template <typename S>
struct Mat {
  int rows = 0, cols = 0;
  std::vector<S> a;  // row-major

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, S(0)) {}
  S& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  S at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
};

// sigmoid(V), with V clamped to +-40 to keep exp() finite.
template <typename S>
Mat<S> embed(const Mat<S>& v);

// Per-node activations for a whole batch, node-major: value(node, row).
template <typename S>
struct ForwardTape {
  int batch = 0;
  std::vector<S> values;  // nodes x batch

  S value(int node, int row) const {
    return values[static_cast<size_t>(node) * batch + row];
  }
};

template <typename S>
struct ForwardResult {
  Mat<S> y;  // batch x outputs, column order = Circuit::outputs
  ForwardTape<S> tape;
};

// `input_cols` names the circuit input var carried by each column of P.
// Inputs without a column evaluate at probability 1/2 (they cannot reach an
// output that feeds the loss). P entries must lie in [0, 1].
template <typename S>
ForwardResult<S> forward(const Circuit& c, const std::vector<int>& input_cols,
                         const Mat<S>& p, int threads = 1);

template <typename S>
struct LossResult {
  S total = S(0);           // summed over rows in row order
  std::vector<S> per_row;   // sum_m (y - t)^2
};

template <typename S>
LossResult<S> loss(const Mat<S>& y, const std::vector<uint8_t>& targets);

template <typename S>
struct BackwardResult {
  Mat<S> dv;  // d loss / d V, through the sigmoid
  Mat<S> dp;  // d loss / d P, at the input columns
};

template <typename S>
BackwardResult<S> backward(const Circuit& c, const std::vector<int>& input_cols,
                           const ForwardTape<S>& tape,
                           const std::vector<uint8_t>& targets,
                           const Mat<S>& v, int threads = 1);

template <typename S>
void gd_step(Mat<S>& v, const Mat<S>& grad, S learning_rate);

// Row-major bits, one per V entry: 1 iff V >= 0 (ties resolve to 1).
template <typename S>
std::vector<uint8_t> harden(const Mat<S>& v);

}  // namespace satgrad
