#include <string>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "tokcol/experiment.hpp"
#include "tokcol/instance_io.hpp"
#include "tokcol/trace_io.hpp"

using namespace tokcol;

TEST_CASE("instance text round-trips exactly, ports included") {
  for (std::uint64_t seed : {1ULL, 5ULL}) {
    Instance inst;
    inst.topo = make_random_connected(9, 0.35, seed);
    inst.tokens = assign_tokens(inst.topo, 13, 12, AssignMode::Distinct, 0, seed);
    std::string text = emit_instance(inst);
    Instance back = parse_instance(text);
    CHECK(back.topo.n == inst.topo.n);
    CHECK(back.topo.edges == inst.topo.edges);
    CHECK(back.topo.ports == inst.topo.ports);
    CHECK(back.tokens.L == inst.tokens.L);
    CHECK(back.tokens.at == inst.tokens.at);
    CHECK(emit_instance(back) == text);
  }
}

TEST_CASE("instances keep empty nodes and narrow tokens") {
  Instance inst;
  inst.topo = make_path(4, 2);
  inst.tokens = th::tokens_of(4, 1, {{2, 1}, {2, 0}, {0, 1}});
  std::string text = emit_instance(inst);
  Instance back = parse_instance(text);
  CHECK(back.tokens.at[1].empty());
  CHECK(back.tokens.at[3].empty());
  CHECK(back.tokens.at == inst.tokens.at);
  CHECK(emit_instance(back) == text);
}

TEST_CASE("two-field edges get ports in order of appearance") {
  std::string text =
      "# triangle\n"
      "3 3 4\n"
      "0 1\n"
      "1 2\n"
      "0 2\n"
      "0: 1 2\n"
      "1: 3\n"
      "2: # none\n";
  Instance inst = parse_instance(text);
  inst.topo.validate();
  CHECK(inst.topo.n == 3);
  CHECK(inst.tokens.L == 4);
  CHECK(inst.tokens.at[0].size() == 2);
  CHECK(inst.tokens.at[2].empty());
  // node 0 saw edges (0,1) then (0,2): ports 0 and 1 in that order
  CHECK(inst.topo.ports[0][0].node == 1);
  CHECK(inst.topo.ports[0][1].node == 2);
  CHECK(inst.topo.ports[1][1].node == 2);
}

TEST_CASE("malformed instances are rejected") {
  CHECK_THROWS_AS(parse_instance(""), ParseError);
  CHECK_THROWS_AS(parse_instance("x y z\n"), ParseError);
  // token count mismatch
  CHECK_THROWS_AS(parse_instance("2 2 4\n0 1\n0: 1\n1:\n"), ParseError);
  // bad hex digit
  CHECK_THROWS_AS(parse_instance("2 1 4\n0 1\n0: g\n1:\n"), ParseError);
  // node repeated
  CHECK_THROWS_AS(parse_instance("2 2 4\n0 1\n0: 1\n0: 2\n"), ParseError);
  // node out of range
  CHECK_THROWS_AS(parse_instance("2 1 4\n0 1\n0: 1\n5: 2\n"), ParseError);
  // edge endpoint out of range
  CHECK_THROWS_AS(parse_instance("2 1 4\n0 3\n0: 1\n1:\n"), ParseError);
}

TEST_CASE("correspondence file round-trips") {
  std::vector<int> map = {0, 1, 2, 0, 1, 2};
  std::string text = emit_correspondence(map);
  CHECK(parse_correspondence(text) == map);
  CHECK_THROWS_AS(parse_correspondence("0 zero\n"), ParseError);
}

TEST_CASE("experiment text: defaults, canonical form, round trip") {
  ExperimentSpec d = parse_experiment("");
  CHECK(d.topology == "ring");
  CHECK(d.n == 8);
  CHECK(d.k == -1);
  CHECK(d.run.algorithm == Algorithm::DetSmall);

  ExperimentSpec s = parse_experiment(
      "topology random\n"
      "n 12\n"
      "edge_prob 0.5\n"
      "k 20\n"
      "L 16\n"
      "dup_pairs 2\n"
      "repeat 3\n"
      "seed 99\n"
      "algorithm det-large\n"
      "knowledge k\n"
      "B 24\n"
      "trace full\n");
  CHECK(s.run.bandwidth_B == 24);
  CHECK(s.run.knowledge == Knowledge::K);
  CHECK(s.run.trace_level == TraceLevel::Full);

  std::string canon = emit_experiment(s);
  // canonical form lists every key once, in the documented order
  const auto& keys = experiment_keys();
  size_t at = 0;
  for (const auto& key : keys) {
    size_t pos = canon.find(key + " ", at == 0 ? 0 : at);
    REQUIRE(pos != std::string::npos);
    at = pos;
  }
  ExperimentSpec back = parse_experiment(canon);
  CHECK(emit_experiment(back) == canon);
  CHECK(config_hash8(back) == config_hash8(s));
}

TEST_CASE("experiment parse errors") {
  CHECK_THROWS_AS(parse_experiment("banana 3\n"), ParseError);
  CHECK_THROWS_AS(parse_experiment("n 8\nn 9\n"), ParseError);
  CHECK_THROWS_AS(parse_experiment("n\n"), ParseError);
  CHECK_THROWS_AS(parse_experiment("n eight\n"), ParseError);
  CHECK_THROWS_AS(parse_experiment("topology torus\n"), ParseError);
  CHECK_THROWS_AS(parse_experiment("algorithm qsort\n"), ParseError);
  CHECK_THROWS_AS(parse_experiment("knowledge all\n"), ParseError);
  CHECK_THROWS_AS(parse_experiment("trace maybe\n"), ParseError);
}

TEST_CASE("run ids fold the canonical config") {
  ExperimentSpec a = parse_experiment("n 8\n");
  ExperimentSpec b = parse_experiment("n 9\n");
  std::string ha = config_hash8(a);
  CHECK(ha.size() == 8);
  CHECK(ha.find_first_not_of("0123456789abcdef") == std::string::npos);
  CHECK(ha == config_hash8(a));
  CHECK(ha != config_hash8(b));
  CHECK(run_id(a, 0) == ha + "-000");
  CHECK(run_id(a, 41) == ha + "-041");
}

TEST_CASE("materialized repetitions differ but are reproducible") {
  ExperimentSpec s = parse_experiment("n 8\nk 8\nL 16\nrepeat 2\nseed 5\n");
  MaterializedRun r0 = materialize_run(s, 0);
  MaterializedRun r0b = materialize_run(s, 0);
  MaterializedRun r1 = materialize_run(s, 1);
  CHECK(r0.inst.tokens.at == r0b.inst.tokens.at);
  CHECK(r0.cfg.seed == r0b.cfg.seed);
  CHECK(r0.cfg.seed != r1.cfg.seed);
  CHECK(r0.inst.tokens.at != r1.inst.tokens.at);
  CHECK_THROWS_AS(materialize_run(s, 2), InvalidParameterError);
  CHECK_THROWS_AS(materialize_run(s, -1), InvalidParameterError);

  ExperimentSpec bad = parse_experiment("dup_pairs 1\nadversarial 1\nk 8\n");
  CHECK_THROWS_AS(materialize_run(bad, 0), InvalidParameterError);
}

TEST_CASE("traces round-trip for every algorithm") {
  Topology topo = make_ring(5, 3);
  TokenAssignment tk = assign_tokens(topo, 5, 8, AssignMode::WithDuplicates, 1, 7);
  for (Algorithm algo : {Algorithm::DetSmall, Algorithm::DetLarge, Algorithm::Rand}) {
    RunConfig c = th::cfg(algo, Knowledge::N, 0, false, TraceLevel::Full);
    RunResult r = run_instance(topo, tk, c);
    REQUIRE(r.metrics.outcome == Outcome::Decided);
    std::string text = emit_trace(r.trace);
    RunTrace back = parse_trace(text);
    CHECK(back.algorithm == r.trace.algorithm);
    CHECK(back.n == r.trace.n);
    CHECK(back.k == r.trace.k);
    CHECK(back.L == r.trace.L);
    CHECK(back.B == r.trace.B);
    CHECK(back.M == r.trace.M);
    CHECK(back.P == r.trace.P);
    CHECK(back.id_bits == r.trace.id_bits);
    CHECK(back.outcome == r.trace.outcome);
    CHECK(back.halt_round == r.trace.halt_round);
    REQUIRE(back.rounds.size() == r.trace.rounds.size());
    for (size_t s = 0; s < back.rounds.size(); ++s)
      for (int v = 0; v < topo.n; ++v)
        CHECK(back.rounds[s][v].state_line == r.trace.rounds[s][v].state_line);
    CHECK(emit_trace(back) == text);
  }
}

TEST_CASE("trace parser rejects junk") {
  CHECK_THROWS_AS(parse_trace(""), ParseError);
  CHECK_THROWS_AS(parse_trace("not-a-trace 1\n"), ParseError);
  CHECK_THROWS_AS(parse_trace("tokcol-trace 2\n"), ParseError);

  Topology topo = make_ring(4, 1);
  TokenAssignment tk = assign_tokens(topo, 4, 6, AssignMode::Distinct, 0, 2);
  RunResult r =
      run_instance(topo, tk, th::cfg(Algorithm::DetSmall, Knowledge::N, 0, false, TraceLevel::Full));
  std::string text = emit_trace(r.trace);
  // truncation: drop the terminator and the last node line
  std::string cut = text.substr(0, text.rfind("end"));
  cut = cut.substr(0, cut.find_last_of('\n', cut.size() - 2));
  CHECK_THROWS_AS(parse_trace(cut), ParseError);
}
