#pragma once

#include <bit>
#include <cassert>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace tokcol {

// Fixed-length bit string, MSB first.  Bit 0 is the most significant bit, so
// word-wise unsigned comparison equals comparison of the value as an
// unsigned integer.  Pad bits past size() are kept zero.
class BitString {
 public:
  BitString() = default;

  explicit BitString(int nbits) : nbits_(nbits), w_((nbits + 63) / 64, 0) {
    assert(nbits >= 0);
  }

  static BitString from_u64(std::uint64_t v, int nbits) {
    assert(nbits >= 0 && nbits <= 64);
    assert(nbits == 64 || (v >> nbits) == 0);
    BitString b(nbits);
    if (nbits > 0) b.w_[0] = v << (64 - nbits);
    return b;
  }

  static BitString all_ones(int nbits) {
    BitString b(nbits);
    for (auto& w : b.w_) w = ~0ULL;
    b.mask_pad();
    return b;
  }

  int size() const { return nbits_; }
  bool empty() const { return nbits_ == 0; }

  bool bit(int i) const {
    assert(i >= 0 && i < nbits_);
    return (w_[i >> 6] >> (63 - (i & 63))) & 1u;
  }

  void set_bit(int i, bool v) {
    assert(i >= 0 && i < nbits_);
    std::uint64_t m = 1ULL << (63 - (i & 63));
    if (v)
      w_[i >> 6] |= m;
    else
      w_[i >> 6] &= ~m;
  }

  // Bits [start, start+len), as their own string.
  BitString slice(int start, int len) const {
    assert(start >= 0 && len >= 0 && start + len <= nbits_);
    BitString out(len);
    for (int i = 0; i < len; ++i) out.set_bit(i, bit(start + i));
    return out;
  }

  // Overwrite bits [start, start+piece.size()) with piece.
  void write(int start, const BitString& piece) {
    assert(start >= 0 && start + piece.size() <= nbits_);
    for (int i = 0; i < piece.size(); ++i) set_bit(start + i, piece.bit(i));
  }

  void fill_ones(int start, int len) {
    assert(start >= 0 && len >= 0 && start + len <= nbits_);
    for (int i = 0; i < len; ++i) set_bit(start + i, true);
  }

  std::uint64_t to_u64() const {
    assert(nbits_ <= 64);
    if (nbits_ == 0) return 0;
    return w_[0] >> (64 - nbits_);
  }

  // Value as fixed-width lowercase hex, ceil(size/4) digits.
  std::string to_hex() const {
    int ndigits = (nbits_ + 3) / 4;
    std::string s(ndigits, '0');
    for (int d = 0; d < ndigits; ++d) {
      int hi = nbits_ - 4 * (ndigits - 1 - d);  // one past this digit's lsb
      int v = 0;
      for (int i = hi - 4; i < hi; ++i) {
        v <<= 1;
        if (i >= 0) v |= bit(i) ? 1 : 0;
      }
      static const char* k = "0123456789abcdef";
      s[d] = k[v & 15];
    }
    return s;
  }

  // Parse fixed-width hex back into an nbits-long string.  Digits beyond
  // what nbits can hold must be zero.
  static BitString from_hex(const std::string& s, int nbits) {
    BitString b(nbits);
    int nd = static_cast<int>(s.size());
    for (int d = 0; d < nd; ++d) {
      char c = s[nd - 1 - d];
      int v;
      if (c >= '0' && c <= '9')
        v = c - '0';
      else if (c >= 'a' && c <= 'f')
        v = c - 'a' + 10;
      else if (c >= 'A' && c <= 'F')
        v = c - 'A' + 10;
      else
        throw std::invalid_argument("bad hex digit");
      for (int j = 0; j < 4; ++j) {
        int i = nbits - 1 - (4 * d + j);
        bool on = (v >> j) & 1;
        if (i < 0) {
          if (on) throw std::invalid_argument("hex value wider than field");
        } else {
          b.set_bit(i, on);
        }
      }
    }
    return b;
  }

  // Remainder of the value modulo m.
  std::uint64_t mod_u64(std::uint64_t m) const {
    assert(m > 0);
    unsigned __int128 r = 0;
    int full = nbits_ / 64;
    for (int i = 0; i < full; ++i) r = ((r << 64) | w_[i]) % m;
    int rest = nbits_ - 64 * full;
    if (rest > 0) {
      std::uint64_t tail = w_[full] >> (64 - rest);
      for (int j = 0; j < rest; ++j) r = (r << 1) % m;
      r = (r + tail % m) % m;
    }
    return static_cast<std::uint64_t>(r);
  }

  // Index of the first bit where two equal-length strings differ, or -1.
  static int first_diff_bit(const BitString& a, const BitString& b) {
    assert(a.nbits_ == b.nbits_);
    for (size_t i = 0; i < a.w_.size(); ++i) {
      std::uint64_t x = a.w_[i] ^ b.w_[i];
      if (x != 0) return static_cast<int>(i) * 64 + std::countl_zero(x);
    }
    return -1;
  }

  friend bool operator==(const BitString& a, const BitString& b) {
    return a.nbits_ == b.nbits_ && a.w_ == b.w_;
  }

  friend std::strong_ordering operator<=>(const BitString& a, const BitString& b) {
    assert(a.nbits_ == b.nbits_);
    for (size_t i = 0; i < a.w_.size(); ++i) {
      if (a.w_[i] != b.w_[i]) return a.w_[i] <=> b.w_[i];
    }
    return std::strong_ordering::equal;
  }

 private:
  void mask_pad() {
    int rest = nbits_ & 63;
    if (rest != 0 && !w_.empty()) w_.back() &= ~0ULL << (64 - rest);
  }

  int nbits_ = 0;
  std::vector<std::uint64_t> w_;
};

using Token = BitString;

}  // namespace tokcol
