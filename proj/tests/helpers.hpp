#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "tokcol/engine.hpp"
#include "tokcol/verify.hpp"

namespace th {

using namespace tokcol;

inline RunConfig cfg(Algorithm a, Knowledge know, int B = 0, bool packing = false,
                     TraceLevel lvl = TraceLevel::Metrics, std::uint64_t seed = 1) {
  RunConfig c;
  c.algorithm = a;
  c.knowledge = know;
  c.bandwidth_B = B;
  c.packing = packing;
  c.trace_level = lvl;
  c.seed = seed;
  return c;
}

// Hand-built assignment: one (node, value) pair per token.
inline TokenAssignment tokens_of(int n, int L,
                                 const std::vector<std::pair<int, std::uint64_t>>& at) {
  TokenAssignment a;
  a.L = L;
  a.at.assign(n, {});
  for (const auto& [v, val] : at) a.at[v].push_back(BitString::from_u64(val, L));
  return a;
}

inline RunResult run_ok(const Topology& topo, const TokenAssignment& tk,
                        const RunConfig& c) {
  RunResult r = run_instance(topo, tk, c);
  if (r.metrics.outcome != Outcome::Decided)
    throw std::runtime_error("run did not decide");
  if (!r.metrics.verdict || *r.metrics.verdict != oracle_collision(tk))
    throw std::runtime_error("verdict does not match the oracle");
  return r;
}

}  // namespace th
