#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "tokcol/algo_common.hpp"
#include "tokcol/message.hpp"
#include "tokcol/snapshot.hpp"

namespace tokcol {

// Streamed-token algorithm: tokens and identifiers travel as M = ceil(L/B)
// pieces, P pieces per superstep (one superstep = one pipeline iteration).
struct LargeParams {
  Knowledge know = Knowledge::N;
  long long known = 0;
  int L = 1;
  WireFormat wf;
};

struct LargeState {
  bool build = true;
  std::deque<Token> x;
  Ident rid;    // full padded value, or the token-less sentinel
  int sent = 0; // identifier pieces declared so far (sentinel nodes sit at M)
  std::optional<int> p;
  std::vector<int> chi;
  bool f = false;
  std::optional<long long> cnt;
  std::optional<Verdict> res;

  std::vector<Ident> nrid;  // per-port view: received prefix padded with ones
  std::vector<int> nsent;   // per-port declared position
  std::vector<Token> inbuf; // per-port token reassembly buffer
  std::vector<int> infill;  // pieces filled in inbuf
  Token outbuf;             // token currently being sliced upward
  bool outbuf_set = false;
  int outfill = 0;          // pieces of outbuf already sent
  EleTag ele_tag = EleTag::More;
  BitString ele_window;
  int degree = 0;
};

struct LargeAlgo {
  using Params = LargeParams;
  using State = LargeState;
  using Msg = LargeMsg;
  static constexpr bool kIterationSteps = true;

  static State init(const Params& p, const std::vector<Token>& inputs, int degree,
                    int node, std::uint64_t run_seed);
  static Msg compose(const Params& p, const State& s, int port);
  static void post_send(const Params& p, State& s);
  static void receive(const Params& p, State& s, const std::vector<Msg>& inbox);
  static int msg_bits(const Params& p, const Msg& m) { return large_msg_bits(m, p.wf); }
  static NodeSnapshot snapshot(const Params& p, const State& s);
  static int phase(const State& s) { return s.res ? 3 : (s.build ? 0 : 2); }
};

}  // namespace tokcol
