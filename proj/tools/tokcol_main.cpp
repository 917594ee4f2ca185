#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "tokcol/engine.hpp"
#include "tokcol/errors.hpp"
#include "tokcol/experiment.hpp"
#include "tokcol/sweep.hpp"
#include "tokcol/trace_io.hpp"
#include "tokcol/verify.hpp"

namespace {

using namespace tokcol;

// Exit codes: 0 verdict matches the oracle (or the requested property holds),
// 1 usage or input errors, 2 verdict/property mismatch, 3 timeout,
// 4 bandwidth violation, 5 ran without deciding.
constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kMismatch = 2;
constexpr int kTimeout = 3;
constexpr int kBandwidth = 4;
constexpr int kNoDecision = 5;

void put(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    write_text_file(path, text);
}

int cmd_gen(const std::string& config, int index, const std::string& out, bool canonical) {
  ExperimentSpec spec = parse_experiment(read_text_file(config));
  if (canonical) {
    put(out, emit_experiment(spec));
    return kOk;
  }
  MaterializedRun mr = materialize_run(spec, index);
  put(out, emit_instance(mr.inst));
  return kOk;
}

int outcome_exit(const RunMetrics& m, Verdict oracle) {
  switch (m.outcome) {
    case Outcome::Timeout: return kTimeout;
    case Outcome::NoDecision: return kNoDecision;
    case Outcome::Decided: break;
  }
  return *m.verdict == oracle ? kOk : kMismatch;
}

int cmd_run(const std::string& config, int index, const std::string& instance_override,
            const std::string& metrics_path, const std::string& trace_path) {
  ExperimentSpec spec = parse_experiment(read_text_file(config));
  MaterializedRun mr = materialize_run(spec, index);
  if (!instance_override.empty())
    mr.inst = parse_instance(read_text_file(instance_override));
  if (!trace_path.empty()) mr.cfg.trace_level = TraceLevel::Full;

  RunResult rr = run_instance(mr.inst.topo, mr.inst.tokens, mr.cfg);
  Verdict oracle = oracle_collision(mr.inst.tokens);
  bool rp = mr.cfg.algorithm == Algorithm::Rand;
  put(metrics_path, metrics_header(rp) + "\n" +
                        metrics_record(run_id(spec, index), rr.metrics, oracle, rp) + "\n");
  if (!trace_path.empty()) write_text_file(trace_path, emit_trace(rr.trace));
  return outcome_exit(rr.metrics, oracle);
}

int cmd_sweep(const std::string& config, const std::string& out, bool fit) {
  std::vector<ExperimentSpec> cells = parse_sweep(read_text_file(config));
  std::vector<SweepResult> results = run_sweep(cells);
  put(out, sweep_csv(results));
  if (fit) {
    LinearFit f = fit_rounds(results);
    std::cerr << "fit a=" << f.a << " C=" << f.C << "\n";
  }
  bool timeout = false, nodecision = false;
  for (const SweepResult& r : results) {
    if (r.metrics.outcome == Outcome::Timeout) timeout = true;
    if (r.metrics.outcome == Outcome::NoDecision) nodecision = true;
    if (r.metrics.outcome == Outcome::Decided && *r.metrics.verdict != r.oracle)
      return kMismatch;
  }
  if (timeout) return kTimeout;
  if (nodecision) return kNoDecision;
  return kOk;
}

int cmd_verify(const std::string& instance_path, const std::string& trace_path) {
  Instance inst = parse_instance(read_text_file(instance_path));
  RunTrace t = parse_trace(read_text_file(trace_path));
  if (t.n != inst.topo.n)
    throw ParseError("trace is for " + std::to_string(t.n) + " nodes, instance has " +
                     std::to_string(inst.topo.n));
  InvariantReport rep = check_trace(inst.topo, t);
  if (!t.rounds.empty()) {
    for (int v = 0; v < t.n; ++v) {
      if (t.rounds[0][v].x != inst.tokens.at[v]) {
        rep.violations.push_back({"trace-shape", 0, v,
                                  "initial tokens differ from the instance file"});
        break;
      }
    }
  }
  if (rep.ok()) {
    std::cout << "ok: no invariant violations in " << t.rounds.size() << " rows\n";
    return kOk;
  }
  std::cout << rep.to_string();
  return kMismatch;
}

int cmd_impossibility(int n, long long rounds, bool flip, const std::string& out_dir) {
  CoverPair cp = make_double_cover_pair(n, flip);
  RunConfig cfg;
  cfg.algorithm = Algorithm::DetSmall;
  cfg.knowledge = Knowledge::None;
  cfg.bandwidth_B = auto_bandwidth(Algorithm::DetSmall, cp.cover.n, cp.base_tokens.L);
  cfg.round_limit = rounds;
  cfg.trace_level = TraceLevel::Full;
  cfg.seed = 1;

  RunResult base = run_instance(cp.base, cp.base_tokens, cfg);
  RunResult cover = run_instance(cp.cover, cp.cover_tokens, cfg);
  long long rows = equivalent_prefix_rows(cover.trace, base.trace, cp.map_to_base);
  long long want = rounds + 1;  // row 0 plus one row per superstep

  if (!out_dir.empty()) {
    write_text_file(out_dir + "/base.inst", emit_instance({cp.base, cp.base_tokens}));
    write_text_file(out_dir + "/cover.inst", emit_instance({cp.cover, cp.cover_tokens}));
    write_text_file(out_dir + "/map.txt", emit_correspondence(cp.map_to_base));
  }

  std::cout << "ring n=" << n << " vs its double cover: states agree for " << rows
            << " of " << want << " snapshot rows\n";
  if (!flip) {
    if (rows >= want) {
      std::cout << "indistinguishable for " << rounds << " rounds\n";
      return kOk;
    }
    std::cout << "unexpected divergence at row " << rows << "\n";
    return kMismatch;
  }
  if (rows < want) {
    std::cout << "flipped ports diverge at row " << rows << " as expected\n";
    return kOk;
  }
  std::cout << "flipped ports unexpectedly stayed aligned\n";
  return kMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"token collision detection on anonymous synchronous networks"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "materialize a seeded instance from a config");
  std::string gen_config, gen_out;
  int gen_index = 0;
  bool gen_canonical = false;
  gen->add_option("--config", gen_config, "experiment config file")->required();
  gen->add_option("--index", gen_index, "repetition index (default 0)");
  gen->add_option("--out", gen_out, "output path (default stdout)");
  gen->add_flag("--canonical", gen_canonical, "print the canonical config instead");

  auto* run = app.add_subcommand("run", "run one instance and report metrics");
  std::string run_config, run_instance_path, run_metrics, run_trace;
  int run_index = 0;
  run->add_option("--config", run_config, "experiment config file")->required();
  run->add_option("--index", run_index, "repetition index (default 0)");
  run->add_option("--instance", run_instance_path, "run this instance file instead");
  run->add_option("--metrics", run_metrics, "metrics csv path (default stdout)");
  run->add_option("--trace", run_trace, "write the full trace here");

  auto* sweep = app.add_subcommand("sweep", "run a config grid and emit one csv");
  std::string sweep_config, sweep_out;
  bool sweep_fit = false;
  sweep->add_option("--config", sweep_config, "sweep config file")->required();
  sweep->add_option("--out", sweep_out, "csv path (default stdout)");
  sweep->add_flag("--fit", sweep_fit, "print a least-squares round fit to stderr");

  auto* verify = app.add_subcommand("verify", "check a trace against the invariants");
  std::string verify_instance, verify_trace;
  verify->add_option("--instance", verify_instance, "instance file")->required();
  verify->add_option("--trace", verify_trace, "trace file")->required();

  auto* imp = app.add_subcommand(
      "impossibility", "compare a ring against its double cover, state for state");
  int imp_n = 4;
  long long imp_rounds = 200;
  bool imp_flip = false;
  std::string imp_out_dir;
  imp->add_option("--n", imp_n, "base ring size (default 4)");
  imp->add_option("--rounds", imp_rounds, "supersteps to compare (default 200)");
  imp->add_flag("--flip", imp_flip, "reverse the cover's ports (negative control)");
  imp->add_option("--out-dir", imp_out_dir, "write base/cover/map files here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen(gen_config, gen_index, gen_out, gen_canonical);
    if (run->parsed())
      return cmd_run(run_config, run_index, run_instance_path, run_metrics, run_trace);
    if (sweep->parsed()) return cmd_sweep(sweep_config, sweep_out, sweep_fit);
    if (verify->parsed()) return cmd_verify(verify_instance, verify_trace);
    if (imp->parsed()) return cmd_impossibility(imp_n, imp_rounds, imp_flip, imp_out_dir);
  } catch (const BandwidthViolationError& e) {
    std::cerr << "bandwidth violation: " << e.what() << "\n";
    return kBandwidth;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
