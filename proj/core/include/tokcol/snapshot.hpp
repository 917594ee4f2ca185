#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tokcol/bits.hpp"
#include "tokcol/ident.hpp"
#include "tokcol/message.hpp"
#include "tokcol/run_config.hpp"

namespace tokcol {

// One node's protocol-visible state at the end of a superstep.  state_line
// is the complete documented serialization (engine-private data such as the
// port peer map never appears in it); the named fields are the subset the
// checkers consume directly.
struct NodeSnapshot {
  Ident rid;
  std::optional<int> parent;  // port index, 0-based
  std::vector<int> chi;       // port indices, ascending
  bool f = false;
  bool build = true;
  std::optional<long long> cnt;
  EleTag ele_tag = EleTag::More;
  std::vector<Token> x;
  std::optional<Verdict> res;
  int sent = -1;   // streamed algorithms only
  int phase = 0;   // randomized only
  std::string state_line;
};

struct RunTrace {
  Algorithm algorithm = Algorithm::DetSmall;
  Knowledge knowledge = Knowledge::N;
  int n = 0, k = 0, L = 0, B = 0, M = 1, P = 1;
  int id_bits = 0;  // randomized runs: sampled identifier length
  bool packing = false;
  int pack_cap = 1;
  TraceLevel level = TraceLevel::Metrics;
  // rounds[s][v]: state after superstep s; rounds[0] is the post-init state.
  std::vector<std::vector<NodeSnapshot>> rounds;
  // Superstep in which the node broadcast its decided verdict and stopped;
  // -1 = ran to the end without halting.
  std::vector<long long> halt_round;
  Outcome outcome = Outcome::NoDecision;
};

struct RunMetrics {
  int n = 0, k = 0, L = 0, B = 0, D = 0;
  Algorithm algorithm = Algorithm::DetSmall;
  Knowledge knowledge = Knowledge::N;
  std::uint64_t seed = 0;
  long long rounds = 0;
  long long iterations = 0;
  int max_message_bits = 0;
  long long total_messages = 0;
  Outcome outcome = Outcome::NoDecision;
  std::optional<Verdict> verdict;
  std::vector<std::optional<Verdict>> verdict_per_node;
  std::vector<long long> halted_round_per_node;
  long long phase_rounds_elect = 0;
  long long phase_rounds_seed = 0;
  long long phase_rounds_aggregate = 0;
};

struct RunResult {
  RunMetrics metrics;
  RunTrace trace;
};

// Line-delimited records, one run per line:
//   run_id,n,k,L,D,algorithm,knowledge,B,rounds,iterations,verdict,
//   oracle_verdict,max_bits,seed
// With rand_phases the phase_rounds_elect/seed/aggregate columns follow
// (zero on deterministic runs).
std::string metrics_header(bool rand_phases);
std::string metrics_record(const std::string& run_id, const RunMetrics& m,
                           std::optional<Verdict> oracle_verdict, bool rand_phases);

}  // namespace tokcol
