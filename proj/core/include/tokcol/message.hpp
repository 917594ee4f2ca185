#pragma once

#include <bit>
#include <cassert>
#include <cstdint>
#include <optional>
#include <vector>

#include "tokcol/bits.hpp"
#include "tokcol/ident.hpp"
#include "tokcol/run_config.hpp"

namespace tokcol {

// Upward token channel tag: a value, "more may come", or "subtree drained".
enum class EleTag { Value, More, Done };

inline int bits_for_count(long long maxval) {
  assert(maxval >= 0);
  return maxval == 0 ? 1 : std::bit_width(static_cast<std::uint64_t>(maxval));
}

// --- piece geometry for the streamed algorithms ---------------------------

inline int piece_count(int L, int B) { return (L + B - 1) / B; }

// Piece j (1-based) covers bits [(j-1)*B, min(j*B, L)); only the last piece
// may be short.
inline int piece_bits(int j, int L, int B) {
  assert(j >= 1 && j <= piece_count(L, B));
  int hi = j * B < L ? j * B : L;
  return hi - (j - 1) * B;
}

inline int window_bits(int pos, int count, int L, int B) {
  int total = 0;
  for (int j = pos + 1; j <= pos + count; ++j) total += piece_bits(j, L, B);
  return total;
}

// How many whole pieces starting after `pos` the given bit count represents;
// -1 if it does not land on a piece boundary within `max_pieces`.
inline int pieces_from_bits(int pos, int bits, int max_pieces, int L, int B) {
  int total = 0, c = 0;
  while (total < bits && c < max_pieces && pos + c < piece_count(L, B)) {
    total += piece_bits(pos + c + 1, L, B);
    ++c;
  }
  return total == bits ? c : -1;
}

// --- messages --------------------------------------------------------------

struct SmallMsg {
  std::optional<Verdict> res;
  bool build = true;
  bool ischild = false;
  bool f = false;
  std::optional<long long> cnt;
  Ident rid;
  EleTag ele_tag = EleTag::More;
  std::vector<Token> ele;  // one token, or up to pack_cap when packing
};

struct LargeMsg {
  std::optional<Verdict> res;
  bool build = true;
  bool ischild = false;
  bool f = false;
  std::optional<long long> cnt;
  bool rid_sentinel = false;
  int rid_pos = 0;         // pieces already declared before this window
  BitString rid_window;    // next identifier pieces (may be empty)
  EleTag ele_tag = EleTag::More;
  BitString ele_window;    // next token pieces (may be empty; lockstep, no pos)
};

struct RandMsg {
  std::optional<Verdict> res;
  bool build = true;
  bool ischild = false;
  bool f = false;
  std::optional<long long> cnt;
  bool rid_sentinel = false;
  int rid_pos = 0;
  BitString rid_window;               // identifier pieces over L_id bits
  std::optional<std::uint64_t> hseed; // flooded hash seed
  EleTag hele_tag = EleTag::More;
  std::optional<std::uint64_t> hele;  // hashed token value
};

// Field widths for one run, fixed by (n, L, B) and the algorithm.
struct WireFormat {
  int n = 1;
  int L = 1;
  int B = 1;
  int M = 1;       // token pieces (streamed algorithms)
  int P = 1;       // pieces per window
  int pack_cap = 1;
  bool packing = false;
  int id_bits = 0;   // randomized: sampled identifier length
  int id_M = 1, id_P = 1;
  int hash_bits = 1;

  int cnt_field() const { return 1 + bits_for_count(n); }
  int pos_field(int pieces) const { return bits_for_count(pieces); }
};

// Documented layout: res 2, build 1, ischild 1, f 1, cnt presence + value,
// rid 2-bit tag + payload, ele 2-bit tag + payload.
int small_msg_bits(const SmallMsg& m, const WireFormat& wf);
int small_max_msg_bits(const WireFormat& wf);

// Streamed layout: fixed header as above; rid tag + declared position +
// window bits; ele tag + window bits.
int large_msg_bits(const LargeMsg& m, const WireFormat& wf);
int large_max_msg_bits(const WireFormat& wf);

// Randomized layout: identifier channel over id_bits, seed presence + 64,
// hashed value tag + hash_bits.
int rand_msg_bits(const RandMsg& m, const WireFormat& wf);
int rand_max_msg_bits(const WireFormat& wf);

// Tokens per packed ele payload so the whole message still fits B:
// max(1, floor((B - header) / L)) where header counts every non-payload
// field including the payload count subfield (solved to a fixpoint).
int pack_capacity(int B, int n, int L);

}  // namespace tokcol
