#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "gen.hpp"
#include "satgrad/sampler.hpp"

using namespace satgrad;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kData = SATGRAD_TEST_DATA;

struct Fixture {
  CnfFormula cnf;
  ExtractionResult res;
  Circuit circuit;
  PathClassification paths;
};

Fixture load(const std::string& text) {
  Fixture f;
  f.cnf = parse_dimacs(text);
  f.res = extract(f.cnf);
  f.circuit = build(f.res);
  f.paths = classify_paths(f.res);
  return f;
}

Fixture mux_chain() { return load(slurp(kData + "/mux_chain14.cnf")); }

bool stats_equal_modulo_time(const RunStats& a, const RunStats& b) {
  return a.unique_count == b.unique_count && a.attempts == b.attempts &&
         a.loss_trace == b.loss_trace && a.new_unique == b.new_unique &&
         a.restarts == b.restarts && a.timed_out == b.timed_out &&
         a.note == b.note;
}

}  // namespace

TEST_CASE("dedupe keys pack across word boundaries") {
  Assignment a(71, 0);
  a[1] = 1;
  a[64] = 1;
  a[70] = 1;
  std::vector<uint64_t> key = dedupe_key(a, 70);
  REQUIRE(key.size() == 2);
  CHECK(key[0] == ((uint64_t(1) << 0) | (uint64_t(1) << 63)));
  CHECK(key[1] == (uint64_t(1) << 5));
  a[5] = 0xFF;
  CHECK_THROWS_AS(dedupe_key(a, 70), std::invalid_argument);
}

TEST_CASE("solution sets preserve insertion order and reject repeats") {
  SolutionSet s(3);
  Assignment a(4, 0);
  a[1] = 1;
  CHECK(s.insert(a));
  CHECK_FALSE(s.insert(a));
  a[2] = 1;
  CHECK(s.insert(a));
  CHECK(s.size() == 2);
  CHECK(s.assignment(0)[1] == 1);
  CHECK(s.assignment(0)[2] == 0);
  CHECK(s.assignment(1)[2] == 1);
}

TEST_CASE("soft input init is seeded, bounded, and restart-dependent") {
  Mat<double> a = init_soft_inputs(8, 5, 42);
  Mat<double> b = init_soft_inputs(8, 5, 42);
  CHECK(a.a == b.a);
  Mat<double> c = init_soft_inputs(8, 5, 43);
  CHECK(a.a != c.a);
  Mat<double> d = init_soft_inputs(8, 5, 42, 1);
  CHECK(a.a != d.a);
  for (double x : a.a) {
    CHECK(x >= -1.0);
    CHECK(x <= 1.0);
  }
}

TEST_CASE("solution lines print ascending signed literals") {
  Assignment a(4, 0xFF);
  a[1] = 1, a[2] = 0, a[3] = 1;
  CHECK(format_solution_line(a, 3) == "1 -2 3 0");
}

TEST_CASE("sampling the mux chain fixture") {
  Fixture f = mux_chain();
  SamplerConfig cfg;
  cfg.batch = 64;
  cfg.seed = 7;
  RunResult r = run(f.cnf, f.circuit, f.res, f.paths, cfg);

  CHECK(r.stats.unique_count == r.solutions.size());
  CHECK(r.stats.unique_count > 0);
  CHECK(r.stats.attempts == 64 * 6);  // batch x (initial + 5 iterations)
  CHECK(r.stats.new_unique.size() == 6);
  CHECK(r.stats.loss_trace.size() == 5);
  for (size_t i = 1; i < r.stats.loss_trace.size(); ++i)
    CHECK(r.stats.loss_trace[i] <= r.stats.loss_trace[i - 1]);

  for (long long i = 0; i < r.solutions.size(); ++i)
    CHECK(eval_cnf(f.cnf, r.solutions.assignment(i)));
}

TEST_CASE("identical configs give identical runs") {
  Fixture f = mux_chain();
  SamplerConfig cfg;
  cfg.batch = 128;
  cfg.seed = 9;
  RunResult a = run(f.cnf, f.circuit, f.res, f.paths, cfg);
  RunResult b = run(f.cnf, f.circuit, f.res, f.paths, cfg);
  CHECK(format_solutions(a.solutions) == format_solutions(b.solutions));
  CHECK(stats_equal_modulo_time(a.stats, b.stats));

  cfg.threads = 4;
  RunResult c = run(f.cnf, f.circuit, f.res, f.paths, cfg);
  CHECK(format_solutions(a.solutions) == format_solutions(c.solutions));
  CHECK(stats_equal_modulo_time(a.stats, c.stats));
}

TEST_CASE("restarts drain the whole solution space") {
  Fixture f = mux_chain();
  SamplerConfig cfg;
  cfg.batch = 64;
  cfg.seed = 3;
  cfg.max_solutions = 1000;  // more than exist
  cfg.restart = RestartPolicy::ReinitOnExhaust;
  RunResult r = run(f.cnf, f.circuit, f.res, f.paths, cfg);
  CHECK(r.stats.unique_count == 32);  // full model count of the fixture
  CHECK(r.stats.restarts > 0);

  std::set<std::string> lines;
  for (long long i = 0; i < r.solutions.size(); ++i)
    lines.insert(format_solution_line(r.solutions.assignment(i), 14));
  CHECK(lines.size() == 32);
}

TEST_CASE("quota cuts a run short") {
  Fixture f = mux_chain();
  SamplerConfig cfg;
  cfg.batch = 64;
  cfg.seed = 5;
  cfg.max_solutions = 3;
  RunResult r = run(f.cnf, f.circuit, f.res, f.paths, cfg);
  CHECK(r.stats.unique_count == 3);
}

TEST_CASE("single model instances need exactly one harvest") {
  Fixture f = load("p cnf 2 2\n1 0\n-2 0\n");
  SamplerConfig cfg;
  cfg.batch = 4;
  cfg.max_solutions = 1;
  cfg.restart = RestartPolicy::ReinitOnExhaust;
  RunResult r = run(f.cnf, f.circuit, f.res, f.paths, cfg);
  REQUIRE(r.stats.unique_count == 1);
  Assignment only = r.solutions.assignment(0);
  CHECK(only[1] == 1);
  CHECK(only[2] == 0);
}

TEST_CASE("unsatisfiable instances are reported, not sampled") {
  Fixture f = load("p cnf 1 2\n1 0\n-1 0\n");
  REQUIRE(f.res.unsat);
  SamplerConfig cfg;
  RunResult r = run(f.cnf, f.circuit, f.res, f.paths, cfg);
  CHECK(r.stats.unique_count == 0);
  CHECK(r.stats.attempts == 0);
  CHECK_FALSE(r.stats.note.empty());
}

TEST_CASE("timeouts stop between iterations and keep partial results") {
  Fixture f = mux_chain();
  SamplerConfig cfg;
  cfg.batch = 64;
  cfg.iterations = 50;
  cfg.timeout_s = 1e-9;
  RunResult r = run(f.cnf, f.circuit, f.res, f.paths, cfg);
  CHECK(r.stats.timed_out);
  CHECK(r.stats.new_unique.size() >= 1);  // the initial harvest still ran
}

TEST_CASE("single precision descent still verifies everything") {
  Fixture f = mux_chain();
  SamplerConfig cfg;
  cfg.batch = 64;
  cfg.seed = 21;
  cfg.use_f32 = true;
  RunResult r = run(f.cnf, f.circuit, f.res, f.paths, cfg);
  CHECK(r.stats.unique_count > 0);
  for (long long i = 0; i < r.solutions.size(); ++i)
    CHECK(eval_cnf(f.cnf, r.solutions.assignment(i)));
}

TEST_CASE("free inputs are resampled every harvest") {
  // x3 constrained; x1, x2 only feed x4 which nothing constrains
  Fixture f = load("p cnf 4 5\n3 0\n-1 -2 4 0\n-1 2 -4 0\n1 -3 4 0\n1 3 -4 0\n");
  REQUIRE_FALSE(f.res.unsat);
  SamplerConfig cfg;
  cfg.batch = 8;
  cfg.iterations = 3;
  cfg.seed = 2;
  RunResult r = run(f.cnf, f.circuit, f.res, f.paths, cfg);
  // with random free bits the runs must turn up more than one distinct row
  CHECK(r.stats.unique_count > 1);
  for (long long i = 0; i < r.solutions.size(); ++i)
    CHECK(eval_cnf(f.cnf, r.solutions.assignment(i)));
}
