#include <cmath>
#include <cstdint>

#include "doctest.h"
#include "helpers.hpp"
#include "tokcol/engine.hpp"
#include "tokcol/verify.hpp"

using namespace tokcol;

TEST_CASE("single node decides immediately for every algorithm") {
  Topology one = make_path(1, 5);
  for (Algorithm algo : {Algorithm::DetSmall, Algorithm::DetLarge, Algorithm::Rand}) {
    for (auto tk : {th::tokens_of(1, 8, {{0, 7}}),
                    th::tokens_of(1, 8, {{0, 7}, {0, 9}, {0, 7}}),
                    th::tokens_of(1, 8, {{0, 1}, {0, 2}, {0, 3}})}) {
      RunResult r = th::run_ok(one, tk, th::cfg(algo, Knowledge::K));
      CHECK(r.metrics.halted_round_per_node[0] >= 1);
    }
  }
  RunResult r = th::run_ok(one, th::tokens_of(1, 8, {{0, 7}}),
                           th::cfg(Algorithm::DetSmall, Knowledge::N));
  CHECK(r.metrics.iterations <= 3);
}

TEST_CASE("neighbors halt within one superstep of each other") {
  Topology topo = make_random_connected(11, 0.3, 9);
  TokenAssignment tk = assign_tokens(topo, 11, 10, AssignMode::Distinct, 0, 4);
  for (Algorithm algo : {Algorithm::DetSmall, Algorithm::DetLarge, Algorithm::Rand}) {
    RunResult r = th::run_ok(topo, tk, th::cfg(algo, Knowledge::N));
    const auto& h = r.metrics.halted_round_per_node;
    for (auto [u, v] : topo.edges) {
      CHECK(h[u] >= 1);
      CHECK(h[v] >= 1);
      CHECK(std::abs(h[u] - h[v]) <= 1);
    }
  }
}

TEST_CASE("identical configs replay identically") {
  Topology topo = make_ring(9, 2);
  TokenAssignment tk = assign_tokens(topo, 9, 12, AssignMode::WithDuplicates, 1, 8);
  for (Algorithm algo : {Algorithm::DetSmall, Algorithm::DetLarge, Algorithm::Rand}) {
    RunConfig c = th::cfg(algo, Knowledge::N, 0, false, TraceLevel::Full, 77);
    RunResult a = run_instance(topo, tk, c);
    RunResult b = run_instance(topo, tk, c);
    CHECK(a.metrics.rounds == b.metrics.rounds);
    CHECK(a.metrics.iterations == b.metrics.iterations);
    CHECK(a.metrics.total_messages == b.metrics.total_messages);
    CHECK(a.metrics.verdict == b.metrics.verdict);
    REQUIRE(a.trace.rounds.size() == b.trace.rounds.size());
    for (size_t s = 0; s < a.trace.rounds.size(); ++s)
      for (int v = 0; v < topo.n; ++v)
        CHECK(a.trace.rounds[s][v].state_line == b.trace.rounds[s][v].state_line);
  }
}

TEST_CASE("one-shot budget is strict and tight") {
  Topology topo = make_ring(8, 3);
  TokenAssignment tk = assign_tokens(topo, 8, 8, AssignMode::Distinct, 0, 6);
  int need = auto_bandwidth(Algorithm::DetSmall, 8, 8);
  RunResult r = th::run_ok(topo, tk, th::cfg(Algorithm::DetSmall, Knowledge::N, need));
  CHECK(r.metrics.max_message_bits == need);  // the largest legal message is sent
  CHECK(r.metrics.B == need);
  CHECK_THROWS_AS(run_instance(topo, tk, th::cfg(Algorithm::DetSmall, Knowledge::N, need - 1)),
                  BandwidthViolationError);
}

TEST_CASE("streamed algorithms charge rounds per piece") {
  Topology topo = make_path(6, 4);
  TokenAssignment tk = assign_tokens(topo, 6, 64, AssignMode::Distinct, 0, 3);
  RunConfig c = th::cfg(Algorithm::DetLarge, Knowledge::N, 16);
  RunResult r = th::run_ok(topo, tk, c);
  CHECK(r.metrics.iterations < r.metrics.rounds);
  long long per_step = (r.metrics.max_message_bits + 15) / 16;
  CHECK(r.metrics.rounds <= r.metrics.iterations * per_step);

  // one-shot charges one round per superstep
  RunResult s = th::run_ok(topo, assign_tokens(topo, 6, 8, AssignMode::Distinct, 0, 3),
                           th::cfg(Algorithm::DetSmall, Knowledge::N));
  CHECK(s.metrics.rounds == s.metrics.iterations);
}

TEST_CASE("phase round counters partition the total") {
  Topology topo = make_ring(8, 1);
  TokenAssignment tk = assign_tokens(topo, 8, 16, AssignMode::Distinct, 0, 2);
  for (Algorithm algo : {Algorithm::DetSmall, Algorithm::DetLarge, Algorithm::Rand}) {
    RunResult r = th::run_ok(topo, tk, th::cfg(algo, Knowledge::N));
    CHECK(r.metrics.phase_rounds_elect + r.metrics.phase_rounds_seed +
              r.metrics.phase_rounds_aggregate ==
          r.metrics.rounds);
    CHECK(r.metrics.phase_rounds_elect > 0);
    if (algo != Algorithm::Rand) CHECK(r.metrics.phase_rounds_seed == 0);
  }
}

TEST_CASE("timeout and no-decision outcomes") {
  Topology topo = make_ring(6, 2);
  TokenAssignment tk = assign_tokens(topo, 6, 8, AssignMode::Distinct, 0, 5);

  RunConfig tight = th::cfg(Algorithm::DetSmall, Knowledge::N);
  tight.round_limit = 1;
  RunResult t = run_instance(topo, tk, tight);
  CHECK(t.metrics.outcome == Outcome::Timeout);
  CHECK(!t.metrics.verdict.has_value());

  RunConfig blind = th::cfg(Algorithm::DetSmall, Knowledge::None);
  blind.round_limit = 300;
  RunResult nd = run_instance(topo, tk, blind);
  CHECK(nd.metrics.outcome == Outcome::NoDecision);
  CHECK(!nd.metrics.verdict.has_value());

  CHECK_THROWS_AS(run_instance(topo, tk, th::cfg(Algorithm::Rand, Knowledge::None)),
                  InvalidParameterError);
}

TEST_CASE("run parameter validation") {
  Topology topo = make_ring(4, 1);
  TokenAssignment wrong_n = th::tokens_of(3, 8, {{0, 1}});
  CHECK_THROWS_AS(run_instance(topo, wrong_n, th::cfg(Algorithm::DetSmall, Knowledge::N)),
                  InvalidParameterError);
  TokenAssignment none = th::tokens_of(4, 8, {});
  CHECK_THROWS_AS(run_instance(topo, none, th::cfg(Algorithm::DetSmall, Knowledge::N)),
                  InvalidParameterError);
  TokenAssignment zero_len;
  zero_len.L = 0;
  zero_len.at.assign(4, {});
  zero_len.at[0].push_back(BitString(0));
  CHECK_THROWS_AS(run_instance(topo, zero_len, th::cfg(Algorithm::DetSmall, Knowledge::N)),
                  InvalidParameterError);
}

TEST_CASE("full traces carry the initial row and every superstep") {
  Topology topo = make_path(5, 2);
  TokenAssignment tk = assign_tokens(topo, 5, 8, AssignMode::Distinct, 0, 7);
  RunResult r = run_instance(topo, tk,
                             th::cfg(Algorithm::DetSmall, Knowledge::N, 0, false, TraceLevel::Full));
  REQUIRE(r.metrics.outcome == Outcome::Decided);
  CHECK(static_cast<long long>(r.trace.rounds.size()) == r.metrics.iterations + 1);
  // row 0 holds the freshly initialized states: nobody decided, tokens in place
  for (int v = 0; v < topo.n; ++v) {
    CHECK(!r.trace.rounds[0][v].res.has_value());
    CHECK(r.trace.rounds[0][v].x == tk.at[v]);
  }
  // metrics-level runs keep no rows
  RunResult m = run_instance(topo, tk, th::cfg(Algorithm::DetSmall, Knowledge::N));
  CHECK(m.trace.rounds.empty());
}

TEST_CASE("metrics file shape") {
  Topology topo = make_ring(5, 2);
  TokenAssignment tk = assign_tokens(topo, 5, 8, AssignMode::Distinct, 0, 7);
  RunResult r = th::run_ok(topo, tk, th::cfg(Algorithm::DetSmall, Knowledge::N));
  std::string hdr = metrics_header(false);
  std::string rec = metrics_record("abcd1234-000", r.metrics, oracle_collision(tk), false);
  CHECK(std::count(hdr.begin(), hdr.end(), ',') == std::count(rec.begin(), rec.end(), ','));
  CHECK(rec.find("abcd1234-000,") == 0);
  CHECK(rec.find("all-distinct") != std::string::npos);
  std::string hdr3 = metrics_header(true);
  std::string rec3 = metrics_record("abcd1234-000", r.metrics, std::nullopt, true);
  CHECK(std::count(hdr3.begin(), hdr3.end(), ',') == std::count(hdr.begin(), hdr.end(), ',') + 3);
  CHECK(std::count(rec3.begin(), rec3.end(), ',') == std::count(rec.begin(), rec.end(), ',') + 3);
}
