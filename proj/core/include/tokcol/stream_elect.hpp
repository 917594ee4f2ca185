#pragma once

#include <algorithm>
#include <cassert>
#include <optional>
#include <vector>

#include "tokcol/bits.hpp"
#include "tokcol/ident.hpp"
#include "tokcol/message.hpp"

namespace tokcol {

// Leader election over identifiers streamed in pieces, shared by every
// automaton that pipelines identifiers.  The state type must expose
// rid/sent/p/chi/f/build plus the per-port views nrid/nsent; the message
// type must expose rid_sentinel/rid_pos/rid_window/ischild/f.

// Write each port's declared window into the padded per-port view.  Earlier
// pieces are kept, the suffix past the window is re-padded with ones.
template <class St, class Msg>
void absorb_identifier_windows(int L, int B, int P, St& s, const std::vector<Msg>& inbox) {
  const int M = piece_count(L, B);
  for (int i = 0; i < static_cast<int>(inbox.size()); ++i) {
    const Msg& m = inbox[i];
    if (m.rid_sentinel) {
      s.nrid[i] = Ident();
      s.nsent[i] = M;
      continue;
    }
    int pos = m.rid_pos;
    int c = pieces_from_bits(pos, m.rid_window.size(), P, L, B);
    assert(c >= 0);
    if (s.nrid[i].is_sentinel()) {
      // A sender coming off the sentinel restarts its stream from piece 1.
      assert(pos == 0);
      s.nrid[i] = Ident(BitString::all_ones(L));
    }
    Token t = s.nrid[i].token();
    if (c > 0) t.write(pos * B, m.rid_window);
    int lo = std::min((pos + c) * B, L);
    t.fill_ones(lo, L - lo);  // anything past the window is unknown again
    s.nrid[i] = Ident(t);
    s.nsent[i] = pos + c;
  }
}

template <class St, class Msg>
void stream_elect_step(int B, int M, St& s, const std::vector<Msg>& inbox) {
  int deg = static_cast<int>(inbox.size());
  int best = -1;
  for (int i = 0; i < deg; ++i)
    if (best < 0 || Ident::less(s.nrid[i], s.nrid[best])) best = i;

  if (best >= 0 && Ident::less(s.nrid[best], s.rid)) {
    int j = best;
    if (s.p && Ident::equal(s.nrid[*s.p], s.nrid[best]))
      j = *s.p;  // keep the current parent among equal minima
    // Resume the outgoing stream no later than the first piece where the
    // new identifier differs from what was being streamed before; neighbors
    // hold exactly the prefix that still matches.
    int q1;
    if (s.rid.is_sentinel()) {
      q1 = 0;
    } else {
      int fd = BitString::first_diff_bit(s.rid.token(), s.nrid[j].token());
      assert(fd >= 0);
      q1 = fd / B;
    }
    s.sent = std::min({inbox[j].rid_pos, s.sent, q1});
    s.rid = s.nrid[j];
    s.p = j;
    s.f = false;
  } else {
    bool complete = (s.sent == M);
    for (int i = 0; i < deg && complete; ++i)
      complete = s.nsent[i] == M && Ident::equal(s.nrid[i], s.rid);
    if (complete) {
      s.chi.clear();
      for (int i = 0; i < deg; ++i)
        if (inbox[i].ischild) s.chi.push_back(i);
      bool kids_done = true;
      for (int i : s.chi)
        if (!inbox[i].f) { kids_done = false; break; }
      if (s.chi.empty() || kids_done) s.f = true;
    }
  }
  if (!s.p && s.f) s.build = false;
}

}  // namespace tokcol
