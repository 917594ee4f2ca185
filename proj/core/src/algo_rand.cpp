#include "tokcol/algo_rand.hpp"

#include <algorithm>
#include <bit>
#include <cassert>

#include "tokcol/errors.hpp"
#include "tokcol/stream_elect.hpp"

namespace tokcol {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<__uint128_t>(a) * b) % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

constexpr std::uint64_t kMrBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

}  // namespace

// Deterministic Miller-Rabin; the first twelve prime bases decide primality
// for every 64-bit integer.
bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t b : kMrBases)
    if (n % b == 0) return n == b;
  std::uint64_t d = n - 1;
  int r = std::countr_zero(d);
  d >>= r;
  for (std::uint64_t b : kMrBases) {
    std::uint64_t x = powmod(b, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < r && witness; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) witness = false;
    }
    if (witness) return false;
  }
  return true;
}

std::uint64_t hash_range(long long k, int beta) {
  if (k < 1) throw InvalidParameterError("hash range needs a positive count");
  if (beta < 0) throw InvalidParameterError("hash exponent must be nonnegative");
  __uint128_t q = 1;
  for (int i = 0; i < 2 + beta; ++i) {
    q *= static_cast<std::uint64_t>(k);
    if (q > (static_cast<__uint128_t>(1) << 40))
      throw InvalidParameterError("hash range k^(2+beta) exceeds 2^40");
  }
  return static_cast<std::uint64_t>(q);
}

HashSpec build_hash(std::uint64_t seed, long long k, int L, int beta) {
  HashSpec h;
  h.q = hash_range(k, beta);
  __uint128_t t = static_cast<__uint128_t>(h.q) * static_cast<std::uint64_t>(std::max(1, L));
  if (t < 64) t = 64;
  if (t > (static_cast<__uint128_t>(1) << 62))
    throw InvalidParameterError("hash modulus range q*L exceeds 2^62");
  std::uint64_t T = static_cast<std::uint64_t>(t);
  Rng g = Rng(seed).derive(0x7072696d, 0);
  for (;;) {
    std::uint64_t cand = T + g.below(T + 1);  // uniform over [T, 2T]
    if (is_prime_u64(cand)) {
      h.p = cand;
      return h;
    }
  }
}

int sampled_id_bits(int c, long long k) {
  assert(c >= 1 && k >= 1);
  int lg = k > 1 ? std::bit_width(static_cast<std::uint64_t>(k - 1)) : 1;
  return c * lg;
}

RandAlgo::State RandAlgo::init(const Params& p, const std::vector<Token>& inputs,
                               int degree, int node, std::uint64_t run_seed) {
  State s;
  s.inputs = inputs;
  if (!inputs.empty()) {
    s.rid = Ident(Rng(run_seed).derive(0x6964, node).bits(p.wf.id_bits));
    s.sent = 0;
  } else {
    s.sent = p.wf.id_M;  // nothing to stream
  }
  s.own_seed_draw = Rng(run_seed).derive(0x73656564, node).next_u64();
  s.degree = degree;
  s.nrid.assign(degree, Ident());
  s.nsent.assign(degree, p.wf.id_M);
  return s;
}

RandAlgo::Msg RandAlgo::compose(const Params& p, const State& s, int port) {
  Msg m;
  m.res = s.res;
  m.build = s.build;
  m.ischild = s.p && *s.p == port;
  m.f = s.f;
  m.cnt = s.cnt;
  if (s.rid.is_sentinel()) {
    m.rid_sentinel = true;
  } else {
    m.rid_pos = s.sent;
    int r = std::min(s.sent + p.wf.id_P, p.wf.id_M);
    int lo = std::min(s.sent * p.wf.B, p.wf.id_bits);
    int hi = std::min(r * p.wf.B, p.wf.id_bits);
    m.rid_window = s.rid.token().slice(lo, hi - lo);
  }
  m.hseed = s.hseed;  // children read this from their parent port only
  m.hele_tag = s.hele_tag;
  if (s.hele_tag == EleTag::Value) m.hele = s.hele;
  return m;
}

void RandAlgo::post_send(const Params& p, State& s) {
  s.sent = std::min(s.sent + p.wf.id_P, p.wf.id_M);
}

namespace {

void rand_detection_step(const RandParams& p, RandState& s,
                         const std::vector<RandMsg>& inbox) {
  s.chi.clear();
  for (int i = 0; i < static_cast<int>(inbox.size()); ++i) {
    if (!inbox[i].build && inbox[i].ischild && s.nsent[i] == p.wf.id_M &&
        Ident::equal(s.nrid[i], s.rid))
      s.chi.push_back(i);
  }
  for (int i : s.chi) {
    if (inbox[i].hele_tag == EleTag::Value) {
      assert(s.spec_ready);  // the seed went down before values come up
      s.hx.push_back(*inbox[i].hele);
    }
  }

  for (const auto& m : inbox)
    if (m.build) return;
  if (s.sent != p.wf.id_M) return;  // still flushing the identifier stream

  bool kids_counted = true;
  for (int i : s.chi)
    if (!inbox[i].cnt) { kids_counted = false; break; }
  if (kids_counted) {
    long long c = 1;
    for (int i : s.chi) c += *inbox[i].cnt;
    assert(!s.cnt || *s.cnt == c);
    s.cnt = c;
  }

  if (!s.hseed) {
    if (!s.p)
      s.hseed = s.own_seed_draw;  // the root mints the shared seed
    else if (inbox[*s.p].hseed)
      s.hseed = *inbox[*s.p].hseed;
  }
  if (s.hseed && !s.spec_ready) {
    s.hspec = build_hash(*s.hseed, p.known, p.L, p.beta);
    for (const Token& t : s.inputs) s.hx.push_back(s.hspec.eval(t));
    s.spec_ready = true;
  }

  bool kids_drained = true;
  for (int i : s.chi)
    if (inbox[i].hele_tag != EleTag::Done) { kids_drained = false; break; }

  if (s.p) {
    if (s.spec_ready && !s.hx.empty()) {
      s.hele = s.hx.front();
      s.hx.pop_front();
      s.hele_tag = EleTag::Value;
    } else if (s.spec_ready && kids_drained) {
      s.hele = std::nullopt;
      s.hele_tag = EleTag::Done;
    } else {
      s.hele = std::nullopt;
      s.hele_tag = EleTag::More;
    }
  } else if (s.spec_ready && s.cnt && kids_drained && !s.res) {
    std::vector<std::uint64_t> vals(s.hx.begin(), s.hx.end());
    s.res = decide_verdict(p.know, p.known, *s.cnt,
                           static_cast<long long>(vals.size()), has_duplicate(vals));
  }
}

}  // namespace

void RandAlgo::receive(const Params& p, State& s, const std::vector<Msg>& inbox) {
  for (const auto& m : inbox) {
    if (m.res) {
      assert(!s.res || *s.res == *m.res);
      s.res = m.res;
    }
  }
  absorb_identifier_windows(p.wf.id_bits, p.wf.B, p.wf.id_P, s, inbox);
  for (const auto& m : inbox) s.build = s.build && m.build;
  if (s.build)
    stream_elect_step(p.wf.B, p.wf.id_M, s, inbox);
  else
    rand_detection_step(p, s, inbox);
}

NodeSnapshot RandAlgo::snapshot(const Params&, const State& s) {
  NodeSnapshot ns;
  ns.rid = s.rid;
  ns.parent = s.p;
  ns.chi = s.chi;
  ns.f = s.f;
  ns.build = s.build;
  ns.cnt = s.cnt;
  ns.ele_tag = s.hele_tag;
  ns.x.assign(s.inputs.begin(), s.inputs.end());
  ns.res = s.res;
  ns.sent = s.sent;
  ns.phase = phase(s);

  std::string hxs = "-";
  if (!s.hx.empty()) {
    hxs.clear();
    for (std::size_t i = 0; i < s.hx.size(); ++i) {
      if (i) hxs += ',';
      hxs += std::to_string(s.hx[i]);
    }
  }
  std::string nr = "-", nsent = "-";
  if (s.degree > 0) {
    nr.clear(); nsent.clear();
    for (int i = 0; i < s.degree; ++i) {
      if (i) { nr += ','; nsent += ','; }
      nr += s.nrid[i].to_string();
      nsent += std::to_string(s.nsent[i]);
    }
  }
  ns.state_line =
      "build=" + std::to_string(s.build ? 1 : 0) + " rid=" + s.rid.to_string() +
      " sent=" + std::to_string(s.sent) + " p=" + s_port(s.p) +
      " chi=" + s_ports(s.chi) + " f=" + std::to_string(s.f ? 1 : 0) +
      " cnt=" + s_opt(s.cnt) + " hseed=" + (s.hseed ? std::to_string(*s.hseed) : "-") +
      " hp=" + (s.spec_ready ? std::to_string(s.hspec.p) : "-") +
      " hq=" + (s.spec_ready ? std::to_string(s.hspec.q) : "-") + " hx=" + hxs +
      " hele=" + s_ele(s.hele_tag, s.hele ? std::to_string(*s.hele) : "") +
      " nrid=" + nr + " nsent=" + nsent + " res=" + s_res(s.res);
  return ns;
}

}  // namespace tokcol
