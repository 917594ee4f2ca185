#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace tokcol {

enum class Algorithm { DetSmall, DetLarge, Rand };
enum class Knowledge { N, K, None };
enum class Verdict { AllDistinct, Collision };
enum class Outcome { Decided, Timeout, NoDecision };
enum class TraceLevel { Metrics, Full };

inline const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::DetSmall: return "det-small";
    case Algorithm::DetLarge: return "det-large";
    case Algorithm::Rand: return "rand";
  }
  return "?";
}

inline const char* to_string(Knowledge k) {
  switch (k) {
    case Knowledge::N: return "n";
    case Knowledge::K: return "k";
    case Knowledge::None: return "none";
  }
  return "?";
}

inline const char* to_string(Verdict v) {
  return v == Verdict::AllDistinct ? "all-distinct" : "collision";
}

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Decided: return "decided";
    case Outcome::Timeout: return "timeout";
    case Outcome::NoDecision: return "no-decision";
  }
  return "?";
}

inline std::optional<Algorithm> algorithm_from_string(const std::string& s) {
  if (s == "det-small") return Algorithm::DetSmall;
  if (s == "det-large") return Algorithm::DetLarge;
  if (s == "rand") return Algorithm::Rand;
  return std::nullopt;
}

inline std::optional<Knowledge> knowledge_from_string(const std::string& s) {
  if (s == "n") return Knowledge::N;
  if (s == "k") return Knowledge::K;
  if (s == "none") return Knowledge::None;
  return std::nullopt;
}

inline std::optional<Outcome> outcome_from_string(const std::string& s) {
  if (s == "decided") return Outcome::Decided;
  if (s == "timeout") return Outcome::Timeout;
  if (s == "no-decision") return Outcome::NoDecision;
  return std::nullopt;
}

struct RunConfig {
  Algorithm algorithm = Algorithm::DetSmall;
  Knowledge knowledge = Knowledge::N;
  // Per-round bit budget.  0 means auto: det-small gets the exact encoded
  // size of the largest legal message for (n, L) and the packing mode; the
  // piece-based algorithms get max(8, 2 * ceil(log2(n + 1))).
  int bandwidth_B = 0;
  // 0 means auto: 64 * (D + k * ceil(L / B) + L) supersteps.
  long long round_limit = 0;
  TraceLevel trace_level = TraceLevel::Metrics;
  std::uint64_t seed = 1;
  bool packing = false;
  // Randomized algorithm parameters.
  int rand_c = 4;
  int rand_beta = 2;
};

}  // namespace tokcol
