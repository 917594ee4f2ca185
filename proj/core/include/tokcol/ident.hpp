#pragma once

#include <cassert>
#include <optional>
#include <string>

#include "tokcol/bits.hpp"

namespace tokcol {

// A node identifier: either a real token value or the sentinel carried by
// nodes that hold no token.  The sentinel orders strictly above every token
// and compares equal to nothing, itself included; two token-less nodes must
// never look like they share an identifier.
class Ident {
 public:
  Ident() = default;  // sentinel
  explicit Ident(Token t) : val_(std::move(t)) {}

  static Ident sentinel() { return Ident(); }

  bool is_token() const { return val_.has_value(); }
  bool is_sentinel() const { return !val_.has_value(); }
  const Token& token() const {
    assert(val_);
    return *val_;
  }

  // Protocol order: token < token by value, token < sentinel.
  static bool less(const Ident& a, const Ident& b) {
    if (a.is_sentinel()) return false;
    if (b.is_sentinel()) return true;
    return a.token() < b.token();
  }

  // Protocol equality: sentinel equals nothing.
  static bool equal(const Ident& a, const Ident& b) {
    if (a.is_sentinel() || b.is_sentinel()) return false;
    return a.token() == b.token();
  }

  // Representation equality, for state snapshots and tests only.
  static bool same_state(const Ident& a, const Ident& b) {
    if (a.is_sentinel() != b.is_sentinel()) return false;
    return a.is_sentinel() || a.token() == b.token();
  }

  std::string to_string() const { return val_ ? val_->to_hex() : "T"; }

 private:
  std::optional<Token> val_;
};

}  // namespace tokcol
