#pragma once

#include <cassert>
#include <cstdint>
#include <vector>

#include "tokcol/bits.hpp"

namespace tokcol {

// Counter-based deterministic generator.  Every consumer derives its own
// stream from (key, labels), so adding a new draw site never shifts the
// values seen by existing ones.
class Rng {
 public:
  explicit Rng(std::uint64_t key) : key_(mix(key ^ 0x6a09e667f3bcc908ULL)) {}

  // Independent stream; leaves this one untouched.
  Rng derive(std::uint64_t a, std::uint64_t b = 0) const {
    Rng r(0);
    r.key_ = mix(mix(key_ ^ mix(a + 0x9e3779b97f4a7c15ULL)) + mix(b + 0xbb67ae8584caa73bULL));
    r.ctr_ = 0;
    return r;
  }

  std::uint64_t next_u64() { return mix(key_ + (++ctr_) * 0x9e3779b97f4a7c15ULL); }

  // Uniform in [0, n).
  std::uint64_t below(std::uint64_t n) {
    assert(n > 0);
    std::uint64_t bound = ~0ULL - ~0ULL % n;
    for (;;) {
      std::uint64_t v = next_u64();
      if (v < bound) return v % n;
    }
  }

  double unit() { return (next_u64() >> 11) * 0x1.0p-53; }

  bool coin(double p) { return unit() < p; }

  BitString bits(int nbits) {
    BitString b(nbits);
    for (int i = 0; i < nbits; i += 64) {
      std::uint64_t w = next_u64();
      int len = nbits - i < 64 ? nbits - i : 64;
      b.write(i, BitString::from_u64(len == 64 ? w : w >> (64 - len), len));
    }
    return b;
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = below(i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t key_;
  std::uint64_t ctr_ = 0;
};

}  // namespace tokcol
