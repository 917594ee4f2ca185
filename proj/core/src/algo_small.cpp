#include "tokcol/algo_small.hpp"

#include <cassert>

namespace tokcol {

SmallAlgo::State SmallAlgo::init(const Params&, const std::vector<Token>& inputs,
                                 int degree, int, std::uint64_t) {
  State s;
  s.x.assign(inputs.begin(), inputs.end());
  if (!inputs.empty()) {
    Token m = inputs[0];
    for (const Token& t : inputs)
      if (t < m) m = t;
    s.rid = Ident(m);
  }
  s.degree = degree;
  return s;
}

SmallAlgo::Msg SmallAlgo::compose(const Params&, const State& s, int port) {
  Msg m;
  m.res = s.res;
  m.build = s.build;
  m.ischild = s.p && *s.p == port;
  m.f = s.f;
  m.cnt = s.cnt;
  m.rid = s.rid;
  m.ele_tag = s.ele_tag;
  if (s.ele_tag == EleTag::Value) m.ele = s.ele;
  return m;
}

namespace {

void bfs_build_step(SmallState& s, const std::vector<SmallMsg>& inbox) {
  int best = -1;
  for (int i = 0; i < static_cast<int>(inbox.size()); ++i) {
    if (best < 0 ? Ident::less(inbox[i].rid, s.rid)
                 : Ident::less(inbox[i].rid, inbox[best].rid))
      best = i;
  }
  if (best >= 0) {
    // Strictly smaller identifier seen: adopt it, lowest port wins ties.
    s.rid = inbox[best].rid;
    s.p = best;
    s.f = false;
  } else {
    bool all_equal = true;
    for (const auto& m : inbox)
      if (!Ident::equal(m.rid, s.rid)) { all_equal = false; break; }
    if (all_equal) {
      s.chi.clear();
      for (int i = 0; i < static_cast<int>(inbox.size()); ++i)
        if (inbox[i].ischild) s.chi.push_back(i);
      bool kids_done = true;
      for (int i : s.chi)
        if (!inbox[i].f) { kids_done = false; break; }
      if (s.chi.empty() || kids_done) s.f = true;
    }
  }
  if (!s.p && s.f) s.build = false;
}

void detection_step(const SmallParams& p, SmallState& s,
                    const std::vector<SmallMsg>& inbox) {
  s.chi.clear();
  for (int i = 0; i < static_cast<int>(inbox.size()); ++i) {
    if (!inbox[i].build && inbox[i].ischild && Ident::equal(inbox[i].rid, s.rid))
      s.chi.push_back(i);
  }
  for (int i : s.chi) {
    if (inbox[i].ele_tag == EleTag::Value)
      for (const Token& t : inbox[i].ele) s.x.push_back(t);
  }

  for (const auto& m : inbox)
    if (m.build) return;  // some neighbor is still building

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
    if (!s.x.empty()) {
      int cap = p.packing ? p.wf.pack_cap : 1;
      s.ele.clear();
      while (!s.x.empty() && static_cast<int>(s.ele.size()) < cap) {
        s.ele.push_back(s.x.front());
        s.x.pop_front();
      }
      s.ele_tag = EleTag::Value;
    } else if (kids_drained) {
      s.ele.clear();
      s.ele_tag = EleTag::Done;
    } else {
      s.ele.clear();
      s.ele_tag = EleTag::More;
    }
  } else if (s.cnt && kids_drained && !s.res) {
    s.res = decide_verdict(p.know, p.known, *s.cnt,
                           static_cast<long long>(s.x.size()),
                           has_duplicate_tokens(s.x));
  }
}

}  // namespace

void SmallAlgo::receive(const Params& p, State& s, const std::vector<Msg>& inbox) {
  for (const auto& m : inbox) {
    if (m.res) {
      assert(!s.res || *s.res == *m.res);
      s.res = m.res;
    }
  }
  for (const auto& m : inbox) s.build = s.build && m.build;
  if (s.build)
    bfs_build_step(s, inbox);
  else
    detection_step(p, s, inbox);
}

NodeSnapshot SmallAlgo::snapshot(const Params&, const State& s) {
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
  ns.phase = phase(s);
  ns.state_line = "build=" + std::to_string(s.build ? 1 : 0) +
                  " rid=" + s.rid.to_string() + " p=" + s_port(s.p) +
                  " chi=" + s_ports(s.chi) + " f=" + std::to_string(s.f ? 1 : 0) +
                  " cnt=" + s_opt(s.cnt) + " ele=" + s_ele(s.ele_tag, s_tokens(s.ele)) +
                  " x=" + s_tokens(s.x) + " res=" + s_res(s.res);
  return ns;
}

}  // namespace tokcol
