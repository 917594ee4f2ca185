#pragma once

#include <algorithm>
#include <cassert>
#include <string>
#include <vector>

#include "tokcol/assignment.hpp"
#include "tokcol/errors.hpp"
#include "tokcol/run_config.hpp"
#include "tokcol/snapshot.hpp"
#include "tokcol/topology.hpp"

namespace tokcol {

// Bandwidth when the config leaves it 0: the exact size of the largest legal
// message for the one-shot algorithm, a short budget for the streamed ones.
int auto_bandwidth(Algorithm algo, int n, int L);

// Superstep limit when the config leaves it 0.
long long auto_round_limit(int D, long long k, int L, int B);

// Field widths for a run.  `known` sizes the randomized identifier space and
// hash range; it is ignored for the deterministic algorithms.
WireFormat make_wire_format(Algorithm algo, int n, int L, int B, bool packing,
                            long long known, int c, int beta);

// Build, run and measure one instance end to end.
RunResult run_instance(const Topology& topo, const TokenAssignment& tokens,
                       const RunConfig& cfg);

// Synchronous engine.  One superstep: every live node composes one message
// per port, nodes that already hold a verdict halt right after this goodbye
// broadcast, messages are delivered, every still-live node runs its receive
// step.  A one-shot algorithm must fit each message in B or the run aborts;
// a streamed algorithm instead pays ceil(max_bits / B) rounds per superstep.
template <class Algo>
RunResult run_automaton(const Topology& topo, const std::vector<std::vector<Token>>& inputs,
                        const typename Algo::Params& params, const RunConfig& cfg, int B,
                        long long round_limit, TraceLevel level) {
  const int n = topo.n;
  assert(static_cast<int>(inputs.size()) == n);

  std::vector<typename Algo::State> st;
  st.reserve(n);
  for (int v = 0; v < n; ++v)
    st.push_back(Algo::init(params, inputs[v], topo.degree(v), v, cfg.seed));

  RunResult r;
  r.trace.level = level;
  r.trace.halt_round.assign(n, -1);

  auto snap_all = [&] {
    std::vector<NodeSnapshot> row;
    row.reserve(n);
    for (int v = 0; v < n; ++v) row.push_back(Algo::snapshot(params, st[v]));
    r.trace.rounds.push_back(std::move(row));
  };
  if (level == TraceLevel::Full) snap_all();

  std::vector<bool> halted(n, false);
  int live = n;
  long long phase_rounds[3] = {0, 0, 0};

  std::vector<std::vector<typename Algo::Msg>> out(n);
  for (long long step = 1; live > 0 && step <= round_limit; ++step) {
    int gp = 3;
    for (int v = 0; v < n; ++v)
      if (!halted[v]) gp = std::min(gp, Algo::phase(st[v]));

    // Compose: live nodes only, ascending node then port order.
    int step_max_bits = 0;
    std::vector<bool> sent_this_step(n, false);
    for (int v = 0; v < n; ++v) {
      out[v].clear();
      if (halted[v]) continue;
      sent_this_step[v] = true;
      int deg = topo.degree(v);
      out[v].reserve(deg);
      for (int i = 0; i < deg; ++i) {
        out[v].push_back(Algo::compose(params, st[v], i));
        int bits = Algo::msg_bits(params, out[v].back());
        step_max_bits = std::max(step_max_bits, bits);
        ++r.metrics.total_messages;
        if (!Algo::kIterationSteps && bits > B)
          throw BandwidthViolationError(
              "message of " + std::to_string(bits) + " bits exceeds budget " +
                  std::to_string(B) + " at superstep " + std::to_string(step),
              step, bits, B);
      }
      if (st[v].res) {  // goodbye sent, stop here
        halted[v] = true;
        r.trace.halt_round[v] = step;
        --live;
      } else {
        Algo::post_send(params, st[v]);
      }
    }
    r.metrics.max_message_bits = std::max(r.metrics.max_message_bits, step_max_bits);

    // Deliver and receive: still-live nodes, ascending.  A silent neighbor
    // means its goodbye was ignored, which the protocol never allows.
    for (int v = 0; v < n; ++v) {
      if (halted[v]) continue;
      int deg = topo.degree(v);
      std::vector<typename Algo::Msg> inbox;
      inbox.reserve(deg);
      for (int i = 0; i < deg; ++i) {
        PortPeer pe = topo.ports[v][i];
        if (!sent_this_step[pe.node])
          throw EngineInvariantError("node " + std::to_string(v) +
                                     " expected a message from halted node " +
                                     std::to_string(pe.node) + " at superstep " +
                                     std::to_string(step));
        inbox.push_back(out[pe.node][pe.port]);
      }
      Algo::receive(params, st[v], inbox);
    }

    long long step_rounds =
        Algo::kIterationSteps ? std::max(1, (step_max_bits + B - 1) / B) : 1;
    r.metrics.rounds += step_rounds;
    r.metrics.iterations += 1;
    phase_rounds[std::min(gp, 2)] += step_rounds;
    if (level == TraceLevel::Full) snap_all();
  }

  r.metrics.phase_rounds_elect = phase_rounds[0];
  r.metrics.phase_rounds_seed = phase_rounds[1];
  r.metrics.phase_rounds_aggregate = phase_rounds[2];
  r.metrics.halted_round_per_node = r.trace.halt_round;
  r.metrics.verdict_per_node.reserve(n);
  for (int v = 0; v < n; ++v) r.metrics.verdict_per_node.push_back(st[v].res);

  if (live == 0) {
    r.metrics.outcome = Outcome::Decided;
    r.metrics.verdict = st[0].res;
    for (int v = 0; v < n; ++v) assert(st[v].res && *st[v].res == *r.metrics.verdict);
  } else {
    r.metrics.outcome =
        cfg.knowledge == Knowledge::None ? Outcome::NoDecision : Outcome::Timeout;
  }
  r.trace.outcome = r.metrics.outcome;
  return r;
}

}  // namespace tokcol
