#pragma once

#include <algorithm>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "tokcol/bits.hpp"
#include "tokcol/ident.hpp"
#include "tokcol/message.hpp"
#include "tokcol/run_config.hpp"

namespace tokcol {

template <class T>
bool has_duplicate(std::vector<T> xs) {
  std::sort(xs.begin(), xs.end());
  return std::adjacent_find(xs.begin(), xs.end()) != xs.end();
}

inline bool has_duplicate_tokens(const std::deque<Token>& x) {
  return has_duplicate(std::vector<Token>(x.begin(), x.end()));
}

// Final verdict at a root that finished its convergecast.  `collected` is
// the number of tokens gathered (|x| or the hashed count); `dup` whether two
// of them match.  Knowledge::None never decides.
inline std::optional<Verdict> decide_verdict(Knowledge know, long long known,
                                             long long cnt, long long collected,
                                             bool dup) {
  switch (know) {
    case Knowledge::N:
      return (cnt == known && !dup) ? Verdict::AllDistinct : Verdict::Collision;
    case Knowledge::K:
      return (collected == known && !dup) ? Verdict::AllDistinct : Verdict::Collision;
    case Knowledge::None:
      return std::nullopt;
  }
  return std::nullopt;
}

// --- state serialization helpers (1-based ports, '-' for absent) -----------

inline std::string s_opt(const std::optional<long long>& v) {
  return v ? std::to_string(*v) : "-";
}

inline std::string s_port(const std::optional<int>& p) {
  return p ? std::to_string(*p + 1) : "-";
}

inline std::string s_ports(const std::vector<int>& ps) {
  if (ps.empty()) return "-";
  std::string s;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(ps[i] + 1);
  }
  return s;
}

template <class Seq>
std::string s_tokens(const Seq& xs) {
  if (xs.empty()) return "-";
  std::string s;
  bool first = true;
  for (const auto& t : xs) {
    if (!first) s += ',';
    first = false;
    s += t.to_hex();
  }
  return s;
}

inline std::string s_res(const std::optional<Verdict>& r) {
  if (!r) return "-";
  return *r == Verdict::AllDistinct ? "D" : "C";
}

inline std::string s_ele(EleTag tag, const std::string& payload) {
  switch (tag) {
    case EleTag::More: return "T";
    case EleTag::Done: return "B";
    case EleTag::Value: return payload.empty() ? "v:" : "v:" + payload;
  }
  return "?";
}

}  // namespace tokcol
