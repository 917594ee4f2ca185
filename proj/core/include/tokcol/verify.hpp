#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tokcol/assignment.hpp"
#include "tokcol/snapshot.hpp"
#include "tokcol/topology.hpp"

namespace tokcol {

// Ground truth by direct inspection of the multiset of tokens.
Verdict oracle_collision(const TokenAssignment& tokens);

struct InvariantViolation {
  std::string checker;
  long long round = 0;  // snapshot row index
  int node = -1;
  std::string detail;
};

struct InvariantReport {
  std::vector<InvariantViolation> violations;

  bool ok() const { return violations.empty(); }
  bool flagged(const std::string& checker) const {
    for (const auto& v : violations)
      if (v.checker == checker) return true;
    return false;
  }
  std::string to_string() const;
};

// Checker families, each derived from a structural property every honest
// run keeps:
//   identifier-monotone     a node's adopted identifier never grows
//   parent-forest           parent pointers stay acyclic every round
//   parent-path-nonincrease a parent's identifier never exceeds the child's
//   child-links             in steady detection, chi mirrors the neighbors'
//                           parent pointers at matching identifiers
//   halt-discipline         neighbors stop within one superstep of each other
//   token-conservation      tokens move along edges, one hop per round at
//                           most, never minted or duplicated
//   count-at-decision       a deciding root's count equals its subtree size
//   collect-exactly-once    a deciding root holds exactly its subtree's
//                           initial tokens
// The last two only fire on runs that decide; token rules skip the hashed
// algorithm, whose tokens never move.
extern const char* const kCheckerFamilies[8];

InvariantReport check_trace(const Topology& topo, const RunTrace& t);

// Resolve each node's parent port to the neighbor node id for one row.
std::vector<std::optional<int>> parent_nodes(const Topology& topo,
                                             const std::vector<NodeSnapshot>& row);

// Distinct-input sanity for the deterministic runs: at the first row where
// every build flag is off, there is a single root, it holds the global
// minimum token, and every node adopted that identifier.
std::optional<std::string> check_single_tree_on_distinct(const Topology& topo,
                                                         const RunTrace& t);

// Count of leading snapshot rows (row 0 first) where every cover node's
// state line equals its base image's, byte for byte.
long long equivalent_prefix_rows(const RunTrace& cover, const RunTrace& base,
                                 const std::vector<int>& map_to_base);

// Canned fault injection: three mutations per checker family, applied to an
// honest trace.  A mutation returns nothing when the trace cannot host it
// (too short, never decides, value space exhausted).
struct TraceMutation {
  std::string checker;
  int variant = 0;
};

std::vector<TraceMutation> canned_mutations();
std::optional<RunTrace> apply_mutation(const Topology& topo, const RunTrace& t,
                                       const TraceMutation& m);

}  // namespace tokcol
