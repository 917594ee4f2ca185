#pragma once

#include <stdexcept>
#include <string>

namespace tokcol {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A caller-supplied parameter violates a documented precondition.
struct InvalidParameterError : Error {
  using Error::Error;
};

// The requested token assignment cannot exist (e.g. k distinct values of
// fewer than log2(k) bits).
struct InfeasibleAssignmentError : Error {
  using Error::Error;
};

// Malformed instance, config, or trace text.
struct ParseError : Error {
  using Error::Error;
};

// A composed message exceeds the per-round bit budget in strict mode.
struct BandwidthViolationError : Error {
  BandwidthViolationError(const std::string& what, long long round, int bits, int budget)
      : Error(what), round(round), bits(bits), budget(budget) {}
  long long round;
  int bits;
  int budget;
};

// The scheduler caught an internal contract breach (e.g. a live node reading
// a port whose peer halted two or more rounds earlier).
struct EngineInvariantError : Error {
  using Error::Error;
};

}  // namespace tokcol
