#pragma once

// Gradient-descent sampling of satisfying assignments. Soft input values are
// pushed toward the output targets for a few iterations; after every
// iteration (including iteration 0, before the first step) the batch is
// hardened, unconstrained inputs get fresh random bits, rows are propagated
// through the circuit, verified against the formula, and deduplicated.

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "satgrad/autodiff.hpp"
#include "satgrad/circuit.hpp"
#include "satgrad/cnf.hpp"
#include "satgrad/extract.hpp"

namespace satgrad {

enum class RestartPolicy : uint8_t { None, ReinitOnExhaust };

struct SamplerConfig {
  int batch = 1024;
  int iterations = 5;
  double learning_rate = 10.0;
  uint64_t seed = 1;
  long long max_solutions = 0;  // 0 = no quota
  double timeout_s = 0.0;       // 0 = no timeout, checked between iterations
  RestartPolicy restart = RestartPolicy::None;
  int threads = 1;
  bool use_f32 = false;  // run the descent in single precision
};

// Unique satisfying assignments over the original variables, insertion
// ordered. The key packs vars 1..num_vars into 64-bit words.
std::vector<uint64_t> dedupe_key(const Assignment& a, int num_vars);

class SolutionSet {
 public:
  explicit SolutionSet(int num_vars = 0) : num_vars_(num_vars) {}

  bool insert(const Assignment& a);  // false if already present
  long long size() const { return static_cast<long long>(keys_.size()); }
  int num_vars() const { return num_vars_; }
  Assignment assignment(long long i) const;

 private:
  struct KeyHash {
    size_t operator()(const std::vector<uint64_t>& k) const;
  };
  int num_vars_ = 0;
  std::vector<std::vector<uint64_t>> keys_;  // insertion order
  std::unordered_map<std::vector<uint64_t>, long long, KeyHash> index_;
};

struct RunStats {
  long long unique_count = 0;
  long long attempts = 0;  // hardened rows pushed through verification
  double wall_time_s = 0.0;
  double throughput = 0.0;  // unique solutions per second
  std::vector<double> loss_trace;       // one entry per descent iteration
  std::vector<long long> new_unique;    // per harvest, iteration 0 included
  int restarts = 0;
  bool timed_out = false;
  std::string note;  // set when sampling is skipped (e.g. UNSAT instance)
};

struct RunResult {
  SolutionSet solutions;
  RunStats stats;
};

// V columns follow `paths.constrained_pi`. Initial soft inputs are i.i.d.
// uniform on [-1, 1], drawn from (seed, restart, row, column).
Mat<double> init_soft_inputs(int batch, int cols, uint64_t seed,
                             int restart = 0);

RunResult run(const CnfFormula& cnf, const Circuit& c,
              const ExtractionResult& res, const PathClassification& paths,
              const SamplerConfig& cfg);

// "lit lit ... 0" with literals in ascending variable order.
std::string format_solution_line(const Assignment& a, int num_vars);

std::string format_solutions(const SolutionSet& s);

}  // namespace satgrad
