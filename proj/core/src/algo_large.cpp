#include "tokcol/algo_large.hpp"

#include <algorithm>
#include <cassert>

#include "tokcol/stream_elect.hpp"

namespace tokcol {

namespace {

// Bits of pieces [a..b] (1-based, inclusive) of an L-bit value.
BitString window_slice(const Token& t, int a, int b, int L, int B) {
  int lo = std::min((a - 1) * B, L);
  int hi = std::min(b * B, L);
  if (hi < lo) hi = lo;
  return t.slice(lo, hi - lo);
}

}  // namespace

LargeAlgo::State LargeAlgo::init(const Params& p, const std::vector<Token>& inputs,
                                 int degree, int, std::uint64_t) {
  State s;
  s.x.assign(inputs.begin(), inputs.end());
  if (!inputs.empty()) {
    Token m = inputs[0];
    for (const Token& t : inputs)
      if (t < m) m = t;
    s.rid = Ident(m);
    s.sent = 0;
  } else {
    s.sent = p.wf.M;  // nothing to stream
  }
  s.degree = degree;
  s.nrid.assign(degree, Ident());
  s.nsent.assign(degree, p.wf.M);
  s.inbuf.assign(degree, Token(p.L));
  s.infill.assign(degree, 0);
  s.outbuf = Token(p.L);
  return s;
}

LargeAlgo::Msg LargeAlgo::compose(const Params& p, const State& s, int port) {
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
    int r = std::min(s.sent + p.wf.P, p.wf.M);
    m.rid_window = window_slice(s.rid.token(), s.sent + 1, r, p.L, p.wf.B);
  }
  m.ele_tag = s.ele_tag;
  if (s.ele_tag == EleTag::Value) m.ele_window = s.ele_window;
  return m;
}

void LargeAlgo::post_send(const Params& p, State& s) {
  s.sent = std::min(s.sent + p.wf.P, p.wf.M);
}

namespace {

void detection_step(const LargeParams& p, LargeState& s,
                    const std::vector<LargeMsg>& inbox) {
  const int L = p.L, B = p.wf.B, M = p.wf.M, P = p.wf.P;
  s.chi.clear();
  for (int i = 0; i < static_cast<int>(inbox.size()); ++i) {
    if (!inbox[i].build && inbox[i].ischild && s.nsent[i] == M &&
        Ident::equal(s.nrid[i], s.rid))
      s.chi.push_back(i);
  }
  for (int i : s.chi) {
    if (inbox[i].ele_tag != EleTag::Value) continue;
    int c = pieces_from_bits(s.infill[i], inbox[i].ele_window.size(), P, L, B);
    assert(c >= 0);
    if (c > 0) {
      s.inbuf[i].write(s.infill[i] * B, inbox[i].ele_window);
      s.infill[i] += c;
      if (s.infill[i] == M) {
        s.x.push_back(s.inbuf[i]);
        s.infill[i] = 0;
      }
    }
  }

  for (const auto& m : inbox)
    if (m.build) return;
  if (s.sent != M) return;  // still flushing the identifier stream

  bool kids_counted = true;
  for (int i : s.chi)
    if (!inbox[i].cnt) { kids_counted = false; break; }
  if (kids_counted) {
    long long c = 1;
    for (int i : s.chi) c += *inbox[i].cnt;
    assert(!s.cnt || *s.cnt == c);
    s.cnt = c;
  }

  bool kids_drained = true;
  for (int i : s.chi)
    if (inbox[i].ele_tag != EleTag::Done) { kids_drained = false; break; }

  if (s.p) {
    if (s.outfill != 0) {
      int r = std::min(s.outfill + P, M);
      s.ele_window = window_slice(s.outbuf, s.outfill + 1, r, L, B);
      s.ele_tag = EleTag::Value;
      s.outfill = r % M;  // the wrap to 0 re-arms the slicer
    } else if (!s.x.empty()) {
      s.outbuf = s.x.front();
      s.x.pop_front();
      s.outbuf_set = true;
      s.ele_window = window_slice(s.outbuf, 1, P, L, B);
      s.ele_tag = EleTag::Value;
      s.outfill = P;
    } else if (kids_drained) {
      s.ele_window = BitString();
      s.ele_tag = EleTag::Done;
    } else {
      s.ele_window = BitString();
      s.ele_tag = EleTag::More;
    }
  } else if (s.cnt && kids_drained && !s.res) {
    s.res = decide_verdict(p.know, p.known, *s.cnt,
                           static_cast<long long>(s.x.size()),
                           has_duplicate_tokens(s.x));
  }
}

}  // namespace

void LargeAlgo::receive(const Params& p, State& s, const std::vector<Msg>& inbox) {
  for (const auto& m : inbox) {
    if (m.res) {
      assert(!s.res || *s.res == *m.res);
      s.res = m.res;
    }
  }
  absorb_identifier_windows(p.L, p.wf.B, p.wf.P, s, inbox);
  for (const auto& m : inbox) s.build = s.build && m.build;
  if (s.build)
    stream_elect_step(p.wf.B, p.wf.M, s, inbox);
  else
    detection_step(p, s, inbox);
}

NodeSnapshot LargeAlgo::snapshot(const Params& p, const State& s) {
  NodeSnapshot ns;
  ns.rid = s.rid;
  ns.parent = s.p;
  ns.chi = s.chi;
  ns.f = s.f;
  ns.build = s.build;
  ns.cnt = s.cnt;
  ns.ele_tag = s.ele_tag;
  ns.x.assign(s.x.begin(), s.x.end());
  ns.res = s.res;
  ns.sent = s.sent;
  ns.phase = phase(s);

  std::string nr = "-", nsent = "-", infill = "-";
  if (s.degree > 0) {
    nr.clear(); nsent.clear(); infill.clear();
    for (int i = 0; i < s.degree; ++i) {
      if (i) { nr += ','; nsent += ','; infill += ','; }
      nr += s.nrid[i].to_string();
      nsent += std::to_string(s.nsent[i]);
      infill += std::to_string(s.infill[i]);
    }
  }
  ns.state_line =
      "build=" + std::to_string(s.build ? 1 : 0) + " rid=" + s.rid.to_string() +
      " sent=" + std::to_string(s.sent) + " p=" + s_port(s.p) +
      " chi=" + s_ports(s.chi) + " f=" + std::to_string(s.f ? 1 : 0) +
      " cnt=" + s_opt(s.cnt) +
      " ele=" + s_ele(s.ele_tag, std::to_string(s.ele_window.size()) + "b" +
                                     (s.ele_window.empty() ? "" : s.ele_window.to_hex())) +
      " outbuf=" + (s.outbuf_set ? s.outbuf.to_hex() : "-") +
      " outfill=" + std::to_string(s.outfill) + " x=" + s_tokens(s.x) +
      " nrid=" + nr + " nsent=" + nsent + " infill=" + infill +
      " res=" + s_res(s.res);
  return ns;
}

}  // namespace tokcol
