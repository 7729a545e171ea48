// satgrad: turn a CNF instance back into a gate-level circuit and sample
// satisfying assignments by gradient descent on its probabilistic relaxation.
//
// Exit codes: 0 ok, 1 usage or failed verification, 2 unreadable input,
// 3 instance is unsatisfiable by construction, 4 timeout with partial results.

#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "satgrad/circuit.hpp"
#include "satgrad/cnf.hpp"
#include "satgrad/extract.hpp"
#include "satgrad/sampler.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitParse = 2;
constexpr int kExitUnsat = 3;
constexpr int kExitTimeout = 4;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw satgrad::ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    write_file(path, text);
}

std::string fnv1a_hex(const std::string& bytes) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct Pipeline {
  satgrad::CnfFormula cnf;
  satgrad::ExtractionResult res;
  satgrad::Circuit circuit;
  double transform_s = 0.0;
};

Pipeline load_and_extract(const std::string& cnf_path) {
  Pipeline p;
  std::vector<std::string> warnings;
  p.cnf = satgrad::parse_dimacs(read_file(cnf_path), &warnings);
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
  auto t0 = std::chrono::steady_clock::now();
  p.res = satgrad::extract(p.cnf);
  p.circuit = satgrad::build(p.res);
  p.transform_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return p;
}

nlohmann::json transform_stats(const Pipeline& p) {
  long long cnf_ge = satgrad::cnf_gate_equivalents(p.cnf);
  long long cir_ge = satgrad::gate_equivalents(p.circuit);
  nlohmann::json j;
  j["num_vars"] = p.cnf.num_vars;
  j["num_clauses"] = p.cnf.clauses.size();
  j["pi"] = p.res.pi.size();
  j["iv"] = p.res.iv.size();
  j["po"] = p.res.po.size();
  j["aux"] = p.res.aux.size();
  j["cnf_gate_equivalents"] = cnf_ge;
  j["circuit_gate_equivalents"] = cir_ge;
  j["ops_reduction"] =
      cir_ge > 0 ? static_cast<double>(cnf_ge) / cir_ge : 0.0;
  j["unsat"] = p.res.unsat;
  j["transform_seconds"] = p.transform_s;
  return j;
}

void print_transform_summary(const Pipeline& p) {
  nlohmann::json j = transform_stats(p);
  std::cerr << "transform: " << p.cnf.num_vars << " vars, "
            << p.cnf.clauses.size() << " clauses -> " << j["pi"] << " inputs, "
            << j["iv"] << " intermediates, " << j["po"] << " outputs, "
            << j["aux"] << " auxiliary\n"
            << "gate equivalents: cnf " << j["cnf_gate_equivalents"]
            << ", circuit " << j["circuit_gate_equivalents"] << " (reduction "
            << j["ops_reduction"] << "x) in " << p.transform_s << " s\n";
}

int cmd_transform(const std::string& cnf_path, const std::string& out_path,
                  bool dump_exprs, const std::string& stats_path) {
  Pipeline p = load_and_extract(cnf_path);
  write_output(out_path, satgrad::export_json(p.circuit, p.res));
  if (dump_exprs) {
    // Definitions go to stderr so stdout stays a single JSON document.
    for (const satgrad::BeEntry& e : p.res.be)
      std::cerr << "x" << e.var << " = " << satgrad::to_string(e.expr) << "\n";
    for (const satgrad::PoEntry& po : p.res.po)
      std::cerr << "x" << po.var << " == " << (po.target ? 1 : 0) << "\n";
  }
  if (!stats_path.empty())
    write_output(stats_path, transform_stats(p).dump(2) + "\n");
  print_transform_summary(p);
  if (p.res.unsat) {
    std::cerr << "unsatisfiable by construction: " << p.res.unsat_note << "\n";
    return kExitUnsat;
  }
  return kExitOk;
}

// Reuse a cached transform when the CNF bytes are unchanged.
Pipeline load_with_cache(const std::string& cnf_path) {
  std::string bytes = read_file(cnf_path);
  std::string hash = fnv1a_hex(bytes);
  std::string cache_path = cnf_path + ".circuit.json";

  std::vector<std::string> warnings;
  satgrad::CnfFormula cnf = satgrad::parse_dimacs(bytes, &warnings);
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";

  std::ifstream cache(cache_path, std::ios::binary);
  if (cache) {
    try {
      nlohmann::json j;
      cache >> j;
      if (j.at("cnf_hash").get<std::string>() == hash) {
        auto [c, res] = satgrad::import_json(j.at("circuit").dump());
        Pipeline p;
        p.cnf = std::move(cnf);
        p.res = std::move(res);
        p.circuit = std::move(c);
        std::cerr << "using cached transform " << cache_path << "\n";
        return p;
      }
    } catch (const std::exception&) {
      // stale or foreign cache, fall through and rebuild
    }
  }

  Pipeline p;
  p.cnf = std::move(cnf);
  auto t0 = std::chrono::steady_clock::now();
  p.res = satgrad::extract(p.cnf);
  p.circuit = satgrad::build(p.res);
  p.transform_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  if (!p.res.unsat) {
    nlohmann::json j;
    j["cnf_hash"] = hash;
    j["circuit"] = nlohmann::json::parse(satgrad::export_json(p.circuit, p.res));
    try {
      write_file(cache_path, j.dump(2) + "\n");
    } catch (const std::exception&) {
      // read-only location, sampling works without the cache
    }
  }
  return p;
}

nlohmann::json sample_stats_json(const satgrad::RunStats& st,
                                 const satgrad::SamplerConfig& cfg) {
  nlohmann::json j;
  j["unique"] = st.unique_count;
  j["attempts"] = st.attempts;
  j["wall_time_s"] = st.wall_time_s;
  j["throughput_per_s"] = st.throughput;
  j["loss_trace"] = st.loss_trace;
  j["new_unique"] = st.new_unique;
  j["restarts"] = st.restarts;
  j["timed_out"] = st.timed_out;
  j["note"] = st.note;
  j["batch"] = cfg.batch;
  j["iterations"] = cfg.iterations;
  j["learning_rate"] = cfg.learning_rate;
  j["seed"] = cfg.seed;
  j["threads"] = cfg.threads;
  return j;
}

int cmd_sample(const std::string& cnf_path, const std::string& circuit_path,
               const satgrad::SamplerConfig& cfg, const std::string& out_path,
               const std::string& stats_path) {
  Pipeline p;
  if (!circuit_path.empty()) {
    std::vector<std::string> warnings;
    p.cnf = satgrad::parse_dimacs(read_file(cnf_path), &warnings);
    for (const std::string& w : warnings)
      std::cerr << "warning: " << w << "\n";
    auto [c, res] = satgrad::import_json(read_file(circuit_path));
    p.circuit = std::move(c);
    p.res = std::move(res);
  } else {
    p = load_with_cache(cnf_path);
  }

  satgrad::PathClassification paths = satgrad::classify_paths(p.res);
  satgrad::RunResult r = satgrad::run(p.cnf, p.circuit, p.res, paths, cfg);

  write_output(out_path, satgrad::format_solutions(r.solutions));
  if (!stats_path.empty())
    write_output(stats_path, sample_stats_json(r.stats, cfg).dump(2) + "\n");

  std::cerr << "sample: " << r.stats.unique_count << " unique solutions, "
            << r.stats.attempts << " attempts, " << r.stats.wall_time_s
            << " s (" << r.stats.throughput << " unique/s), restarts "
            << r.stats.restarts << (r.stats.timed_out ? ", timed out" : "")
            << "\n";
  if (!r.stats.note.empty()) {
    std::cerr << r.stats.note << "\n";
    if (p.res.unsat) return kExitUnsat;
  }
  if (r.stats.timed_out) return kExitTimeout;
  return kExitOk;
}

int cmd_verify(const std::string& cnf_path, const std::string& sol_path) {
  satgrad::CnfFormula cnf = satgrad::parse_dimacs(read_file(cnf_path));
  std::istringstream in(read_file(sol_path));

  satgrad::SolutionSet seen(cnf.num_vars);
  std::string line;
  int lineno = 0;
  long long checked = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    satgrad::Assignment a(cnf.num_vars + 1, 0xFF);
    bool terminated = false;
    long long lit;
    bool any = false;
    while (ls >> lit) {
      any = true;
      if (lit == 0) {
        terminated = true;
        break;
      }
      long long v = lit < 0 ? -lit : lit;
      if (v > cnf.num_vars) {
        std::cerr << sol_path << ":" << lineno << ": x" << v
                  << " exceeds the variable count\n";
        return kExitUsage;
      }
      uint8_t bit = lit > 0 ? 1 : 0;
      if (a[v] != 0xFF && a[v] != bit) {
        std::cerr << sol_path << ":" << lineno << ": x" << v
                  << " assigned both ways\n";
        return kExitUsage;
      }
      a[v] = bit;
    }
    if (!any) continue;  // blank line
    if (!terminated) {
      std::cerr << sol_path << ":" << lineno << ": missing 0 terminator\n";
      return kExitUsage;
    }
    for (int v = 1; v <= cnf.num_vars; ++v)
      if (a[v] == 0xFF) {
        std::cerr << sol_path << ":" << lineno << ": x" << v
                  << " unassigned\n";
        return kExitUsage;
      }
    if (!satgrad::eval_cnf(cnf, a)) {
      std::cerr << sol_path << ":" << lineno
                << ": assignment does not satisfy the formula\n";
      return kExitUsage;
    }
    if (!seen.insert(a)) {
      std::cerr << sol_path << ":" << lineno << ": duplicate assignment\n";
      return kExitUsage;
    }
    ++checked;
  }
  std::cerr << "verify: " << checked << " solutions, all satisfying and "
            << "pairwise distinct\n";
  return kExitOk;
}

int cmd_bench(const std::string& cnf_path, long long quota, double timeout_s,
              const std::vector<int>& batch_sweep,
              const std::vector<int>& iters_sweep, uint64_t seed,
              int threads) {
  Pipeline p = load_with_cache(cnf_path);
  if (p.res.unsat) {
    std::cerr << "unsatisfiable by construction: " << p.res.unsat_note << "\n";
    return kExitUnsat;
  }
  satgrad::PathClassification paths = satgrad::classify_paths(p.res);

  std::cout << "quota,batch,iters,unique,seconds,throughput\n";
  int rc = kExitOk;
  for (int batch : batch_sweep)
    for (int iters : iters_sweep) {
      satgrad::SamplerConfig cfg;
      cfg.batch = batch;
      cfg.iterations = iters;
      cfg.seed = seed;
      cfg.max_solutions = quota;
      cfg.timeout_s = timeout_s;
      cfg.restart = satgrad::RestartPolicy::ReinitOnExhaust;
      cfg.threads = threads;
      satgrad::RunResult r = satgrad::run(p.cnf, p.circuit, p.res, paths, cfg);
      std::cout << quota << "," << batch << "," << iters << ","
                << r.stats.unique_count << "," << r.stats.wall_time_s << ","
                << r.stats.throughput << "\n";
      if (r.stats.timed_out) rc = kExitTimeout;
    }
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CNF-to-circuit transformation and gradient-based SAT sampling"};
  app.require_subcommand(1);

  std::string cnf_path, out_path, stats_path, circuit_path, sol_path;
  bool dump_exprs = false;

  auto* transform =
      app.add_subcommand("transform", "extract a circuit from a CNF instance");
  transform->add_option("cnf", cnf_path, "DIMACS CNF input")->required();
  transform->add_option("--out", out_path, "circuit JSON path (default stdout)");
  transform->add_flag("--dump-exprs", dump_exprs,
                      "print recovered definitions to stderr");
  transform->add_option("--stats", stats_path, "write stats JSON to this path");

  satgrad::SamplerConfig cfg;
  bool reinit = false;
  auto* sample =
      app.add_subcommand("sample", "draw satisfying assignments from a CNF");
  sample->add_option("cnf", cnf_path, "DIMACS CNF input")->required();
  sample->add_option("--circuit", circuit_path,
                     "reuse a transform written by `transform --out`");
  sample->add_option("--batch", cfg.batch, "rows per descent batch");
  sample->add_option("--iters", cfg.iterations, "descent iterations");
  sample->add_option("--lr", cfg.learning_rate, "learning rate");
  sample->add_option("--seed", cfg.seed, "rng seed");
  sample->add_option("--max-solutions", cfg.max_solutions,
                     "stop after this many unique solutions (0 = no quota)");
  sample->add_option("--timeout", cfg.timeout_s,
                     "wall-clock budget in seconds (0 = none)");
  sample->add_option("--threads", cfg.threads, "worker threads");
  sample->add_flag("--restart", reinit,
                   "reinitialize and continue until the quota is met");
  sample->add_flag("--f32", cfg.use_f32, "single-precision descent");
  sample->add_option("--out", out_path, "solutions path (default stdout)");
  sample->add_option("--stats-json", stats_path, "write run stats to this path");

  auto* verify =
      app.add_subcommand("verify", "check a solutions file against a CNF");
  verify->add_option("cnf", cnf_path, "DIMACS CNF input")->required();
  verify->add_option("solutions", sol_path, "file of `lit ... 0` lines")
      ->required();

  long long quota = 1000;
  double bench_timeout = 0.0;
  std::vector<int> batch_sweep{1024}, iters_sweep{5};
  uint64_t bench_seed = 1;
  int bench_threads = 1;
  auto* bench = app.add_subcommand("bench", "sweep sampler settings, emit CSV");
  bench->add_option("cnf", cnf_path, "DIMACS CNF input")->required();
  bench->add_option("--quota", quota, "unique solutions per sweep point");
  bench->add_option("--timeout", bench_timeout, "per-point budget in seconds");
  bench->add_option("--batch-sweep", batch_sweep, "batch sizes to try")
      ->delimiter(',');
  bench->add_option("--iters-sweep", iters_sweep, "iteration counts to try")
      ->delimiter(',');
  bench->add_option("--seed", bench_seed, "rng seed");
  bench->add_option("--threads", bench_threads, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (transform->parsed())
      return cmd_transform(cnf_path, out_path, dump_exprs, stats_path);
    if (sample->parsed()) {
      cfg.restart = reinit ? satgrad::RestartPolicy::ReinitOnExhaust
                           : satgrad::RestartPolicy::None;
      return cmd_sample(cnf_path, circuit_path, cfg, out_path, stats_path);
    }
    if (verify->parsed()) return cmd_verify(cnf_path, sol_path);
    if (bench->parsed())
      return cmd_bench(cnf_path, quota, bench_timeout, batch_sweep,
                       iters_sweep, bench_seed, bench_threads);
  } catch (const satgrad::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const satgrad::SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
