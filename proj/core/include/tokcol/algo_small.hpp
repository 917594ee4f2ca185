#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "tokcol/algo_common.hpp"
#include "tokcol/message.hpp"
#include "tokcol/snapshot.hpp"

namespace tokcol {

// Whole-token algorithm: one round per superstep, every message carries at
// most one identifier and (unless packing) one token.
struct SmallParams {
  Knowledge know = Knowledge::N;
  long long known = 0;  // the value of n or k the nodes were told
  int L = 1;
  bool packing = false;
  WireFormat wf;
};

struct SmallState {
  bool build = true;
  std::deque<Token> x;  // FIFO: input order, then arrival order
  Ident rid;
  std::optional<int> p;
  std::vector<int> chi;
  bool f = false;
  std::optional<long long> cnt;
  EleTag ele_tag = EleTag::More;
  std::vector<Token> ele;
  std::optional<Verdict> res;
  int degree = 0;
};

struct SmallAlgo {
  using Params = SmallParams;
  using State = SmallState;
  using Msg = SmallMsg;
  static constexpr bool kIterationSteps = false;

  static State init(const Params& p, const std::vector<Token>& inputs, int degree,
                    int node, std::uint64_t run_seed);
  static Msg compose(const Params& p, const State& s, int port);
  static void post_send(const Params&, State&) {}
  static void receive(const Params& p, State& s, const std::vector<Msg>& inbox);
  static int msg_bits(const Params& p, const Msg& m) { return small_msg_bits(m, p.wf); }
  static NodeSnapshot snapshot(const Params& p, const State& s);
  static int phase(const State& s) { return s.res ? 3 : (s.build ? 0 : 2); }
};

}  // namespace tokcol
