#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "tokcol/algo_common.hpp"
#include "tokcol/bits.hpp"
#include "tokcol/ident.hpp"
#include "tokcol/message.hpp"
#include "tokcol/rng.hpp"
#include "tokcol/run_config.hpp"
#include "tokcol/snapshot.hpp"

namespace tokcol {

// Pairwise-independent compression h(x) = (x mod p) mod q with p a uniform
// prime in [T, 2T].  q bounds the range, T = max(64, q * max(1, L)) keeps the
// per-pair collision probability at most 1/q.
struct HashSpec {
  std::uint64_t p = 0;
  std::uint64_t q = 1;

  std::uint64_t eval(const Token& x) const { return x.mod_u64(p) % q; }
};

bool is_prime_u64(std::uint64_t n);

// q = k^(2+beta); the prime is drawn from [T, 2T] by rejection off `seed`.
HashSpec build_hash(std::uint64_t seed, long long k, int L, int beta);

// Range parameter q = k^(2+beta) without drawing the prime.
std::uint64_t hash_range(long long k, int beta);

// Identifier length for the election phase: c ideal digests of the token
// count.  With k tokens this gives collision probability <= k^2 / 2^(c log k).
int sampled_id_bits(int c, long long k);

struct RandParams {
  Knowledge know = Knowledge::K;
  long long known = 0;  // the advertised count (k, or n standing in for it)
  int L = 1;            // real token length
  int c = 4;
  int beta = 2;
  WireFormat wf;
};

struct RandState {
  bool build = true;
  Ident rid;    // sampled id_bits-bit identifier, streamed piecewise
  int sent = 0;
  std::optional<int> p;
  std::vector<int> chi;
  bool f = false;
  std::optional<long long> cnt;
  std::optional<Verdict> res;

  std::vector<Ident> nrid;
  std::vector<int> nsent;

  std::vector<Token> inputs;
  std::uint64_t own_seed_draw = 0;  // used only if this node ends up the root
  std::optional<std::uint64_t> hseed;
  bool spec_ready = false;
  HashSpec hspec;
  std::deque<std::uint64_t> hx;  // hashed values queued for the convergecast
  EleTag hele_tag = EleTag::More;
  std::optional<std::uint64_t> hele;
  int degree = 0;
};

// Randomized collision detection: elect a root on short sampled identifiers,
// flood a hash seed down the tree, convergecast hashed tokens.  A distinct
// verdict can be wrong only if the hash collides; a collision verdict cannot.
struct RandAlgo {
  using Params = RandParams;
  using State = RandState;
  using Msg = RandMsg;
  static constexpr bool kIterationSteps = true;

  static State init(const Params& p, const std::vector<Token>& inputs, int degree,
                    int node, std::uint64_t run_seed);
  static Msg compose(const Params& p, const State& s, int port);
  static void post_send(const Params& p, State& s);
  static void receive(const Params& p, State& s, const std::vector<Msg>& inbox);
  static int msg_bits(const Params& p, const Msg& m) { return rand_msg_bits(m, p.wf); }
  static NodeSnapshot snapshot(const Params& p, const State& s);
  static int phase(const State& s) {
    if (s.res) return 3;
    if (s.build) return 0;
    return s.spec_ready ? 2 : 1;
  }
};

}  // namespace tokcol
