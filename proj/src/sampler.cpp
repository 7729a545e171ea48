#include "satgrad/sampler.hpp"

#include <chrono>
#include <stdexcept>

#include "satgrad/rng.hpp"

namespace satgrad {

namespace {

// Stream tags keep every random draw independent of the others.
constexpr uint64_t kInitTag = 0x696e6974;  // soft input init
constexpr uint64_t kFreeTag = 0x66726565;  // unconstrained input bits

}  // namespace

std::vector<uint64_t> dedupe_key(const Assignment& a, int num_vars) {
  std::vector<uint64_t> key((num_vars + 63) / 64, 0);
  for (int v = 1; v <= num_vars; ++v) {
    if (static_cast<size_t>(v) >= a.size() || a[v] > 1)
      throw std::invalid_argument("x" + std::to_string(v) + " is unassigned");
    if (a[v]) key[(v - 1) / 64] |= uint64_t(1) << ((v - 1) % 64);
  }
  return key;
}

size_t SolutionSet::KeyHash::operator()(
    const std::vector<uint64_t>& k) const {
  uint64_t h = 1469598103934665603ull;
  for (uint64_t w : k) {
    h ^= w;
    h *= 1099511628211ull;
  }
  return static_cast<size_t>(h);
}

bool SolutionSet::insert(const Assignment& a) {
  std::vector<uint64_t> key = dedupe_key(a, num_vars_);
  auto [it, fresh] = index_.emplace(key, size());
  (void)it;
  if (fresh) keys_.push_back(std::move(key));
  return fresh;
}

Assignment SolutionSet::assignment(long long i) const {
  const std::vector<uint64_t>& key = keys_.at(i);
  Assignment a(num_vars_ + 1, 0xFF);
  for (int v = 1; v <= num_vars_; ++v)
    a[v] = (key[(v - 1) / 64] >> ((v - 1) % 64)) & 1;
  return a;
}

Mat<double> init_soft_inputs(int batch, int cols, uint64_t seed, int restart) {
  Mat<double> v(batch, cols);
  for (int r = 0; r < batch; ++r)
    for (int c = 0; c < cols; ++c)
      v.at(r, c) =
          2.0 * u01(hash_stream({seed, kInitTag, static_cast<uint64_t>(restart),
                                 static_cast<uint64_t>(r),
                                 static_cast<uint64_t>(c)})) -
          1.0;
  return v;
}

std::string format_solution_line(const Assignment& a, int num_vars) {
  std::string line;
  for (int v = 1; v <= num_vars; ++v) {
    if (static_cast<size_t>(v) >= a.size() || a[v] > 1)
      throw std::invalid_argument("x" + std::to_string(v) + " is unassigned");
    line += a[v] ? std::to_string(v) : std::to_string(-v);
    line += ' ';
  }
  line += '0';
  return line;
}

std::string format_solutions(const SolutionSet& s) {
  std::string out;
  for (long long i = 0; i < s.size(); ++i) {
    out += format_solution_line(s.assignment(i), s.num_vars());
    out += '\n';
  }
  return out;
}

namespace {

template <typename S>
RunResult run_impl(const CnfFormula& cnf, const Circuit& c,
                   const ExtractionResult& res, const PathClassification& paths,
                   const SamplerConfig& cfg) {
  if (cfg.batch < 1) throw std::invalid_argument("batch must be positive");
  if (cfg.iterations < 0)
    throw std::invalid_argument("iterations must be non-negative");

  auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&t0] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  };

  RunResult out;
  out.solutions = SolutionSet(cnf.num_vars);
  if (res.unsat) {
    out.stats.note = res.unsat_note.empty() ? "unsatisfiable by construction"
                                            : res.unsat_note;
    out.stats.wall_time_s = elapsed();
    return out;
  }

  const std::vector<int>& cols = paths.constrained_pi;
  std::vector<uint8_t> targets;
  for (const PoEntry& po : c.outputs) targets.push_back(po.target ? 1 : 0);

  bool quota = cfg.max_solutions > 0;
  auto quota_met = [&] {
    return quota && out.solutions.size() >= cfg.max_solutions;
  };
  auto out_of_time = [&] {
    return cfg.timeout_s > 0.0 && elapsed() >= cfg.timeout_s;
  };

  Assignment pi_vals(cnf.num_vars + 1, 0xFF);
  auto harvest = [&](const Mat<S>& v, int restart, int iter) {
    std::vector<uint8_t> bits = harden(v);
    long long added = 0;
    for (int r = 0; r < cfg.batch; ++r) {
      if (quota_met()) break;
      for (size_t j = 0; j < cols.size(); ++j)
        pi_vals[cols[j]] = bits[static_cast<size_t>(r) * cols.size() + j];
      for (size_t k = 0; k < paths.unconstrained_pi.size(); ++k)
        pi_vals[paths.unconstrained_pi[k]] = static_cast<uint8_t>(
            hash_stream({cfg.seed, kFreeTag, static_cast<uint64_t>(restart),
                         static_cast<uint64_t>(iter), static_cast<uint64_t>(r),
                         static_cast<uint64_t>(k)}) &
            1);
      Assignment full = eval_discrete(c, pi_vals);
      ++out.stats.attempts;
      bool hit = true;
      for (const PoEntry& po : c.outputs)
        if (full[po.var] != (po.target ? 1 : 0)) {
          hit = false;
          break;
        }
      if (!hit) continue;
      if (!eval_cnf(cnf, full)) continue;  // refuse to emit anything unchecked
      full.resize(cnf.num_vars + 1);
      if (out.solutions.insert(full)) ++added;
    }
    out.stats.new_unique.push_back(added);
    return added;
  };

  for (int restart = 0;; ++restart) {
    Mat<double> v0 = init_soft_inputs(cfg.batch, static_cast<int>(cols.size()),
                                      cfg.seed, restart);
    Mat<S> v(v0.rows, v0.cols);
    for (size_t i = 0; i < v0.a.size(); ++i) v.a[i] = static_cast<S>(v0.a[i]);

    long long before = out.solutions.size();
    harvest(v, restart, 0);
    for (int iter = 1; iter <= cfg.iterations && !quota_met(); ++iter) {
      if (out_of_time()) {
        out.stats.timed_out = true;
        break;
      }
      ForwardResult<S> fwd = forward(c, cols, embed(v), cfg.threads);
      LossResult<S> l = loss(fwd.y, targets);
      out.stats.loss_trace.push_back(static_cast<double>(l.total) / cfg.batch);
      BackwardResult<S> bwd =
          backward(c, cols, fwd.tape, targets, v, cfg.threads);
      gd_step(v, bwd.dv, static_cast<S>(cfg.learning_rate));
      harvest(v, restart, iter);
    }

    if (quota_met() || out.stats.timed_out) break;
    if (cfg.restart != RestartPolicy::ReinitOnExhaust) break;
    if (out.solutions.size() == before) break;  // this restart found nothing
    if (restart >= 1000) break;                 // safety valve
    if (out_of_time()) {
      out.stats.timed_out = true;
      break;
    }
    out.stats.restarts = restart + 1;
  }

  out.stats.unique_count = out.solutions.size();
  out.stats.wall_time_s = elapsed();
  out.stats.throughput = out.stats.wall_time_s > 0.0
                             ? out.stats.unique_count / out.stats.wall_time_s
                             : 0.0;
  return out;
}

}  // namespace

RunResult run(const CnfFormula& cnf, const Circuit& c,
              const ExtractionResult& res, const PathClassification& paths,
              const SamplerConfig& cfg) {
  return cfg.use_f32 ? run_impl<float>(cnf, c, res, paths, cfg)
                     : run_impl<double>(cnf, c, res, paths, cfg);
}

}  // namespace satgrad
