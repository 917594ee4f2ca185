#include "tokcol/engine.hpp"

#include <algorithm>
#include <bit>

#include "tokcol/algo_large.hpp"
#include "tokcol/algo_rand.hpp"
#include "tokcol/algo_small.hpp"

namespace tokcol {

namespace {

// ceil(log2(m)) for m >= 1.
int clog2(int m) {
  return m > 1 ? std::bit_width(static_cast<unsigned>(m - 1)) : 0;
}

}  // namespace

int auto_bandwidth(Algorithm algo, int n, int L) {
  if (algo == Algorithm::DetSmall) {
    WireFormat wf;
    wf.n = n;
    wf.L = L;
    wf.packing = false;
    wf.pack_cap = 1;
    return small_max_msg_bits(wf);
  }
  return std::max(8, 2 * bits_for_count(n));
}

long long auto_round_limit(int D, long long k, int L, int B) {
  long long m = (L + B - 1) / B;
  return 64 * (D + k * m + L);
}

WireFormat make_wire_format(Algorithm algo, int n, int L, int B, bool packing,
                            long long known, int c, int beta) {
  assert(n >= 1 && L >= 1 && B >= 1);
  WireFormat wf;
  wf.n = n;
  wf.L = L;
  wf.B = B;
  wf.M = piece_count(L, B);
  wf.P = std::max(1, (clog2(wf.M) + B - 1) / B);
  wf.packing = packing;
  wf.pack_cap = packing ? pack_capacity(B, n, L) : 1;
  if (algo == Algorithm::Rand) {
    wf.id_bits = sampled_id_bits(c, known);
    wf.id_M = piece_count(wf.id_bits, B);
    wf.id_P = std::max(1, (clog2(wf.id_M) + B - 1) / B);
    wf.hash_bits = std::max(1, bits_for_count(hash_range(known, beta) - 1));
  }
  return wf;
}

RunResult run_instance(const Topology& topo, const TokenAssignment& tokens,
                       const RunConfig& cfg) {
  const int n = topo.n;
  if (static_cast<int>(tokens.at.size()) != n)
    throw InvalidParameterError("token assignment covers " +
                                std::to_string(tokens.at.size()) + " nodes, topology has " +
                                std::to_string(n));
  const int L = tokens.L;
  const long long k = tokens.total();
  if (L < 1) throw InvalidParameterError("token length must be positive");
  if (k < 1) throw InvalidParameterError("at least one token required");
  if (cfg.algorithm == Algorithm::Rand && cfg.knowledge == Knowledge::None)
    throw InvalidParameterError("the randomized algorithm needs a known count");
  if (cfg.bandwidth_B < 0) throw InvalidParameterError("bandwidth must be positive");

  const int D = diameter(topo);
  // Auto budget must cover the largest legal message.  With packing on, the
  // floor capacity of one still adds a count subfield, so one more bit.
  int auto_B = auto_bandwidth(cfg.algorithm, n, L);
  if (cfg.algorithm == Algorithm::DetSmall && cfg.packing) auto_B += 1;
  const int B = cfg.bandwidth_B > 0 ? cfg.bandwidth_B : auto_B;
  long long known = 0;
  if (cfg.knowledge == Knowledge::N) known = n;
  if (cfg.knowledge == Knowledge::K) known = k;

  WireFormat wf = make_wire_format(cfg.algorithm, n, L, B, cfg.packing,
                                   std::max<long long>(known, 1), cfg.rand_c, cfg.rand_beta);
  const long long limit =
      cfg.round_limit > 0 ? cfg.round_limit : auto_round_limit(D, k, L, B);

  RunResult r;
  switch (cfg.algorithm) {
    case Algorithm::DetSmall: {
      SmallParams p;
      p.know = cfg.knowledge;
      p.known = known;
      p.L = L;
      p.packing = cfg.packing;
      p.wf = wf;
      r = run_automaton<SmallAlgo>(topo, tokens.at, p, cfg, B, limit, cfg.trace_level);
      break;
    }
    case Algorithm::DetLarge: {
      LargeParams p;
      p.know = cfg.knowledge;
      p.known = known;
      p.L = L;
      p.wf = wf;
      r = run_automaton<LargeAlgo>(topo, tokens.at, p, cfg, B, limit, cfg.trace_level);
      break;
    }
    case Algorithm::Rand: {
      RandParams p;
      p.know = cfg.knowledge;
      p.known = known;
      p.L = L;
      p.c = cfg.rand_c;
      p.beta = cfg.rand_beta;
      p.wf = wf;
      r = run_automaton<RandAlgo>(topo, tokens.at, p, cfg, B, limit, cfg.trace_level);
      break;
    }
  }

  r.metrics.n = n;
  r.metrics.k = static_cast<int>(k);
  r.metrics.L = L;
  r.metrics.B = B;
  r.metrics.D = D;
  r.metrics.algorithm = cfg.algorithm;
  r.metrics.knowledge = cfg.knowledge;
  r.metrics.seed = cfg.seed;

  r.trace.algorithm = cfg.algorithm;
  r.trace.knowledge = cfg.knowledge;
  r.trace.n = n;
  r.trace.k = static_cast<int>(k);
  r.trace.L = L;
  r.trace.B = B;
  r.trace.M = wf.M;
  r.trace.P = wf.P;
  r.trace.id_bits = wf.id_bits;
  r.trace.packing = cfg.packing;
  r.trace.pack_cap = wf.pack_cap;
  return r;
}

std::string metrics_header(bool rand_phases) {
  std::string h =
      "run_id,n,k,L,D,algorithm,knowledge,B,rounds,iterations,verdict,"
      "oracle_verdict,max_bits,seed";
  if (rand_phases) h += ",phase_rounds_elect,phase_rounds_seed,phase_rounds_aggregate";
  return h;
}

std::string metrics_record(const std::string& run_id, const RunMetrics& m,
                           std::optional<Verdict> oracle_verdict, bool rand_phases) {
  std::string s = run_id;
  s += ',' + std::to_string(m.n);
  s += ',' + std::to_string(m.k);
  s += ',' + std::to_string(m.L);
  s += ',' + std::to_string(m.D);
  s += ','; s += to_string(m.algorithm);
  s += ','; s += to_string(m.knowledge);
  s += ',' + std::to_string(m.B);
  s += ',' + std::to_string(m.rounds);
  s += ',' + std::to_string(m.iterations);
  s += ','; s += m.verdict ? to_string(*m.verdict) : to_string(m.outcome);
  s += ','; s += oracle_verdict ? to_string(*oracle_verdict) : "-";
  s += ',' + std::to_string(m.max_message_bits);
  s += ',' + std::to_string(m.seed);
  if (rand_phases) {
    s += ',' + std::to_string(m.phase_rounds_elect);
    s += ',' + std::to_string(m.phase_rounds_seed);
    s += ',' + std::to_string(m.phase_rounds_aggregate);
  }
  return s;
}

}  // namespace tokcol
