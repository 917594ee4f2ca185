#pragma once

#include <cstdint>
#include <vector>

#include "tokcol/bits.hpp"
#include "tokcol/topology.hpp"

namespace tokcol {

// Token inputs per node in input order.  A node may hold any number of
// tokens, including none.
struct TokenAssignment {
  int L = 0;
  std::vector<std::vector<Token>> at;

  int total() const {
    int k = 0;
    for (const auto& v : at) k += static_cast<int>(v.size());
    return k;
  }

  std::vector<Token> all() const {
    std::vector<Token> out;
    for (const auto& v : at) out.insert(out.end(), v.begin(), v.end());
    return out;
  }
};

enum class AssignMode {
  Distinct,           // k distinct values; requires 2^L >= k
  WithDuplicates,     // exactly dup_pairs values appear twice, rest distinct
  AdversarialMinFar,  // distinct, unique minimum placed at a node of maximum
                      // eccentricity (lowest index on ties)
};

TokenAssignment assign_tokens(const Topology& t, int k, int L, AssignMode mode,
                              int dup_pairs, std::uint64_t seed);

// A ring instance and its connected double cover.  Every cover node has the
// same degree, port orientation, and token as its base image, so no local
// algorithm can tell the two apart.
struct CoverPair {
  Topology base;
  TokenAssignment base_tokens;
  Topology cover;
  TokenAssignment cover_tokens;
  std::vector<int> map_to_base;  // cover node -> base node
};

// Base: ring of n nodes, node i holding token value i+1, port 0 toward the
// ring successor everywhere.  Cover: the 2n-node ring traversing two copies.
// flip_cover_ports reverses the cover's port orientation, which breaks the
// correspondence on purpose (negative control).
CoverPair make_double_cover_pair(int n, bool flip_cover_ports = false);

}  // namespace tokcol
