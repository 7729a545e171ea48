#include "satgrad/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace satgrad {

namespace {

template <typename S>
S sigmoid_clamped(S v) {
  S x = std::clamp(v, S(-40), S(40));
  return S(1) / (S(1) + std::exp(-x));
}

// Rows are independent, so any partition of the batch gives the same bits.
template <typename Fn>
void for_row_blocks(int batch, int threads, Fn fn) {
  threads = std::max(1, threads);
  if (threads == 1 || batch <= 1) {
    fn(0, batch);
    return;
  }
  int block = (batch + threads - 1) / threads;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    int r0 = t * block;
    int r1 = std::min(batch, r0 + block);
    if (r0 >= r1) break;
    pool.emplace_back([&fn, r0, r1] { fn(r0, r1); });
  }
  for (auto& th : pool) th.join();
}

// Column of P feeding each node; -1 for nodes driven by no column.
std::vector<int> map_input_columns(const Circuit& c,
                                   const std::vector<int>& input_cols) {
  std::vector<int> col_of_node(c.nodes.size(), -1);
  for (size_t j = 0; j < input_cols.size(); ++j) {
    int v = input_cols[j];
    int node = c.node_of(v);
    if (c.nodes[node].kind != GateKind::Input)
      throw std::invalid_argument("x" + std::to_string(v) +
                                  " is not a circuit input");
    if (col_of_node[node] != -1)
      throw std::invalid_argument("x" + std::to_string(v) +
                                  " bound to two columns");
    col_of_node[node] = static_cast<int>(j);
  }
  return col_of_node;
}

}  // namespace

template <typename S>
Mat<S> embed(const Mat<S>& v) {
  Mat<S> p(v.rows, v.cols);
  for (size_t i = 0; i < v.a.size(); ++i) p.a[i] = sigmoid_clamped(v.a[i]);
  return p;
}

template <typename S>
ForwardResult<S> forward(const Circuit& c, const std::vector<int>& input_cols,
                         const Mat<S>& p, int threads) {
  if (p.cols != static_cast<int>(input_cols.size()))
    throw std::invalid_argument("P has " + std::to_string(p.cols) +
                                " columns for " +
                                std::to_string(input_cols.size()) + " inputs");
  for (S x : p.a)
    if (!(x >= S(0) && x <= S(1)))
      throw std::invalid_argument("probabilities must lie in [0, 1]");

  std::vector<int> col_of_node = map_input_columns(c, input_cols);
  int batch = p.rows;

  ForwardResult<S> out;
  out.tape.batch = batch;
  out.tape.values.assign(c.nodes.size() * static_cast<size_t>(batch), S(0));
  S* val = out.tape.values.data();
  auto row_of = [batch, val](int node) {
    return val + static_cast<size_t>(node) * batch;
  };

  for_row_blocks(batch, threads, [&](int r0, int r1) {
    for (size_t i = 0; i < c.nodes.size(); ++i) {
      const GateNode& n = c.nodes[i];
      S* o = row_of(static_cast<int>(i));
      switch (n.kind) {
        case GateKind::Input: {
          int col = col_of_node[i];
          if (col < 0)
            for (int r = r0; r < r1; ++r) o[r] = S(0.5);
          else
            for (int r = r0; r < r1; ++r) o[r] = p.at(r, col);
          break;
        }
        case GateKind::Const0:
          for (int r = r0; r < r1; ++r) o[r] = S(0);
          break;
        case GateKind::Const1:
          for (int r = r0; r < r1; ++r) o[r] = S(1);
          break;
        case GateKind::Buf: {
          const S* a = row_of(n.a);
          for (int r = r0; r < r1; ++r) o[r] = a[r];
          break;
        }
        case GateKind::Not: {
          const S* a = row_of(n.a);
          for (int r = r0; r < r1; ++r) o[r] = S(1) - a[r];
          break;
        }
        case GateKind::And2: {
          const S* a = row_of(n.a);
          const S* b = row_of(n.b);
          for (int r = r0; r < r1; ++r) o[r] = a[r] * b[r];
          break;
        }
        case GateKind::Or2: {
          const S* a = row_of(n.a);
          const S* b = row_of(n.b);
          for (int r = r0; r < r1; ++r)
            o[r] = S(1) - (S(1) - a[r]) * (S(1) - b[r]);
          break;
        }
        case GateKind::Xor2: {
          const S* a = row_of(n.a);
          const S* b = row_of(n.b);
          for (int r = r0; r < r1; ++r)
            o[r] = (S(1) - a[r]) * b[r] + a[r] * (S(1) - b[r]);
          break;
        }
        case GateKind::Xnor2: {
          const S* a = row_of(n.a);
          const S* b = row_of(n.b);
          for (int r = r0; r < r1; ++r)
            o[r] = a[r] * b[r] + (S(1) - a[r]) * (S(1) - b[r]);
          break;
        }
      }
    }
  });

  out.y = Mat<S>(batch, static_cast<int>(c.outputs.size()));
  for (size_t m = 0; m < c.outputs.size(); ++m) {
    const S* o = row_of(c.node_of(c.outputs[m].var));
    for (int r = 0; r < batch; ++r) out.y.at(r, static_cast<int>(m)) = o[r];
  }
  return out;
}

template <typename S>
LossResult<S> loss(const Mat<S>& y, const std::vector<uint8_t>& targets) {
  if (y.cols != static_cast<int>(targets.size()))
    throw std::invalid_argument("target count does not match output count");
  LossResult<S> out;
  out.per_row.assign(y.rows, S(0));
  for (int r = 0; r < y.rows; ++r) {
    S s = S(0);
    for (int m = 0; m < y.cols; ++m) {
      S d = y.at(r, m) - S(targets[m]);
      s += d * d;
    }
    out.per_row[r] = s;
  }
  for (int r = 0; r < y.rows; ++r) out.total += out.per_row[r];
  return out;
}

template <typename S>
BackwardResult<S> backward(const Circuit& c, const std::vector<int>& input_cols,
                           const ForwardTape<S>& tape,
                           const std::vector<uint8_t>& targets,
                           const Mat<S>& v, int threads) {
  if (targets.size() != c.outputs.size())
    throw std::invalid_argument("target count does not match output count");
  int batch = tape.batch;
  if (v.rows != batch || v.cols != static_cast<int>(input_cols.size()))
    throw std::invalid_argument("V shape does not match the batch");
  if (tape.values.size() != c.nodes.size() * static_cast<size_t>(batch))
    throw std::invalid_argument("tape does not match the circuit");

  std::vector<int> col_of_node = map_input_columns(c, input_cols);

  BackwardResult<S> out;
  out.dv = Mat<S>(batch, v.cols);
  out.dp = Mat<S>(batch, v.cols);

  std::vector<S> adj(tape.values.size(), S(0));
  const S* val = tape.values.data();
  auto vrow = [batch, val](int node) {
    return val + static_cast<size_t>(node) * batch;
  };
  auto arow = [batch, &adj](int node) {
    return adj.data() + static_cast<size_t>(node) * batch;
  };

  for_row_blocks(batch, threads, [&](int r0, int r1) {
    for (const PoEntry& po : c.outputs) {
      int node = c.node_of(po.var);
      const S* y = vrow(node);
      S* a = arow(node);
      S t = S(po.target ? 1 : 0);
      for (int r = r0; r < r1; ++r) a[r] += S(2) * (y[r] - t);
    }
    for (int i = static_cast<int>(c.nodes.size()) - 1; i >= 0; --i) {
      const GateNode& n = c.nodes[i];
      const S* g = arow(i);
      switch (n.kind) {
        case GateKind::Input: {
          int col = col_of_node[i];
          if (col < 0) break;  // free input, nothing downstream to update
          for (int r = r0; r < r1; ++r) {
            S p = sigmoid_clamped(v.at(r, col));
            out.dp.at(r, col) = g[r];
            out.dv.at(r, col) = g[r] * p * (S(1) - p);
          }
          break;
        }
        case GateKind::Const0:
        case GateKind::Const1:
          break;
        case GateKind::Buf: {
          S* a = arow(n.a);
          for (int r = r0; r < r1; ++r) a[r] += g[r];
          break;
        }
        case GateKind::Not: {
          S* a = arow(n.a);
          for (int r = r0; r < r1; ++r) a[r] -= g[r];
          break;
        }
        case GateKind::And2: {
          S* a = arow(n.a);
          S* b = arow(n.b);
          const S* va = vrow(n.a);
          const S* vb = vrow(n.b);
          for (int r = r0; r < r1; ++r) {
            a[r] += g[r] * vb[r];
            b[r] += g[r] * va[r];
          }
          break;
        }
        case GateKind::Or2: {
          S* a = arow(n.a);
          S* b = arow(n.b);
          const S* va = vrow(n.a);
          const S* vb = vrow(n.b);
          for (int r = r0; r < r1; ++r) {
            a[r] += g[r] * (S(1) - vb[r]);
            b[r] += g[r] * (S(1) - va[r]);
          }
          break;
        }
        case GateKind::Xor2: {
          S* a = arow(n.a);
          S* b = arow(n.b);
          const S* va = vrow(n.a);
          const S* vb = vrow(n.b);
          for (int r = r0; r < r1; ++r) {
            a[r] += g[r] * (S(1) - S(2) * vb[r]);
            b[r] += g[r] * (S(1) - S(2) * va[r]);
          }
          break;
        }
        case GateKind::Xnor2: {
          S* a = arow(n.a);
          S* b = arow(n.b);
          const S* va = vrow(n.a);
          const S* vb = vrow(n.b);
          for (int r = r0; r < r1; ++r) {
            a[r] += g[r] * (S(2) * vb[r] - S(1));
            b[r] += g[r] * (S(2) * va[r] - S(1));
          }
          break;
        }
      }
    }
  });
  return out;
}

template <typename S>
void gd_step(Mat<S>& v, const Mat<S>& grad, S learning_rate) {
  if (v.rows != grad.rows || v.cols != grad.cols)
    throw std::invalid_argument("gradient shape does not match V");
  for (size_t i = 0; i < v.a.size(); ++i) v.a[i] -= learning_rate * grad.a[i];
}

template <typename S>
std::vector<uint8_t> harden(const Mat<S>& v) {
  std::vector<uint8_t> bits(v.a.size());
  for (size_t i = 0; i < v.a.size(); ++i) bits[i] = v.a[i] >= S(0) ? 1 : 0;
  return bits;
}

template Mat<float> embed(const Mat<float>&);
template Mat<double> embed(const Mat<double>&);
template ForwardResult<float> forward(const Circuit&, const std::vector<int>&,
                                      const Mat<float>&, int);
template ForwardResult<double> forward(const Circuit&, const std::vector<int>&,
                                       const Mat<double>&, int);
template LossResult<float> loss(const Mat<float>&,
                                const std::vector<uint8_t>&);
template LossResult<double> loss(const Mat<double>&,
                                 const std::vector<uint8_t>&);
template BackwardResult<float> backward(const Circuit&,
                                        const std::vector<int>&,
                                        const ForwardTape<float>&,
                                        const std::vector<uint8_t>&,
                                        const Mat<float>&, int);
template BackwardResult<double> backward(const Circuit&,
                                         const std::vector<int>&,
                                         const ForwardTape<double>&,
                                         const std::vector<uint8_t>&,
                                         const Mat<double>&, int);
template void gd_step(Mat<float>&, const Mat<float>&, float);
template void gd_step(Mat<double>&, const Mat<double>&, double);
template std::vector<uint8_t> harden(const Mat<float>&);
template std::vector<uint8_t> harden(const Mat<double>&);

}  // namespace satgrad
