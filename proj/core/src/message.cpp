#include "tokcol/message.hpp"

namespace tokcol {

namespace {
constexpr int kFixedHead = 2 + 1 + 1 + 1;  // res, build, ischild, f
}

int small_msg_bits(const SmallMsg& m, const WireFormat& wf) {
  int bits = kFixedHead + wf.cnt_field();
  bits += 2 + (m.rid.is_token() ? wf.L : 0);
  bits += 2;
  if (m.ele_tag == EleTag::Value) {
    if (wf.packing) bits += bits_for_count(wf.pack_cap);
    bits += static_cast<int>(m.ele.size()) * wf.L;
  }
  return bits;
}

int small_max_msg_bits(const WireFormat& wf) {
  int bits = kFixedHead + wf.cnt_field() + (2 + wf.L) + 2;
  if (wf.packing) bits += bits_for_count(wf.pack_cap) + wf.pack_cap * wf.L;
  else bits += wf.L;
  return bits;
}

int large_msg_bits(const LargeMsg& m, const WireFormat& wf) {
  int bits = kFixedHead + wf.cnt_field();
  bits += 2;
  if (!m.rid_sentinel) bits += wf.pos_field(wf.M) + m.rid_window.size();
  bits += 2;
  if (m.ele_tag == EleTag::Value) bits += m.ele_window.size();
  return bits;
}

int large_max_msg_bits(const WireFormat& wf) {
  int win = window_bits(0, wf.P < wf.M ? wf.P : wf.M, wf.L, wf.B);
  return kFixedHead + wf.cnt_field() + 2 + wf.pos_field(wf.M) + win + 2 + win;
}

int rand_msg_bits(const RandMsg& m, const WireFormat& wf) {
  int bits = kFixedHead + wf.cnt_field();
  bits += 2;
  if (!m.rid_sentinel) bits += wf.pos_field(wf.id_M) + m.rid_window.size();
  bits += 1 + (m.hseed ? 64 : 0);
  bits += 2 + (m.hele_tag == EleTag::Value ? wf.hash_bits : 0);
  return bits;
}

int rand_max_msg_bits(const WireFormat& wf) {
  int win = window_bits(0, wf.id_P < wf.id_M ? wf.id_P : wf.id_M, wf.id_bits, wf.B);
  return kFixedHead + wf.cnt_field() + 2 + wf.pos_field(wf.id_M) + win + 1 + 64 + 2 +
         wf.hash_bits;
}

int pack_capacity(int B, int n, int L) {
  // Header with an empty payload: everything but the packed tokens and the
  // count subfield.  Message size grows strictly with the capacity, so walk
  // down from the one-bit-count bound to the largest value that fits.
  int head = kFixedHead + (1 + bits_for_count(n)) + (2 + L) + 2;
  int cap = (B - head - 1) / L;
  while (cap > 1 && head + bits_for_count(cap) + cap * L > B) --cap;
  return cap < 1 ? 1 : cap;
}

}  // namespace tokcol
