#include "tokcol/assignment.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "tokcol/errors.hpp"
#include "tokcol/rng.hpp"

namespace tokcol {

namespace {

// k distinct L-bit values.  Feasibility was checked by the caller.
std::vector<Token> draw_distinct(int k, int L, Rng& rng) {
  std::set<Token> got;
  while (static_cast<int>(got.size()) < k) got.insert(rng.bits(L));
  return {got.begin(), got.end()};
}

bool feasible_distinct(int k, int L) {
  if (L >= 31) return true;  // 2^31 values dwarf any supported k
  return (1LL << L) >= k;
}

}  // namespace

TokenAssignment assign_tokens(const Topology& t, int k, int L, AssignMode mode,
                              int dup_pairs, std::uint64_t seed) {
  if (k < 1) throw InvalidParameterError("assign: k must be >= 1");
  if (L < 1) throw InvalidParameterError("assign: L must be >= 1");
  if (mode != AssignMode::WithDuplicates && dup_pairs != 0)
    throw InvalidParameterError("assign: dup_pairs only applies to the duplicate mode");
  if (dup_pairs < 0 || 2 * dup_pairs > k)
    throw InvalidParameterError("assign: need 0 <= dup_pairs and k >= 2*dup_pairs");

  Rng rng = Rng(seed).derive(0x746f6b656e73);
  auto place_rng = rng.derive(0x706c616365);

  TokenAssignment a;
  a.L = L;
  a.at.assign(t.n, {});

  std::vector<Token> vals;
  switch (mode) {
    case AssignMode::Distinct:
    case AssignMode::AdversarialMinFar: {
      if (!feasible_distinct(k, L))
        throw InfeasibleAssignmentError("assign: cannot draw " + std::to_string(k) +
                                        " distinct values of " + std::to_string(L) + " bits");
      vals = draw_distinct(k, L, rng);
      break;
    }
    case AssignMode::WithDuplicates: {
      int base = k - dup_pairs;
      if (!feasible_distinct(base, L))
        throw InfeasibleAssignmentError("assign: cannot draw " + std::to_string(base) +
                                        " distinct values of " + std::to_string(L) + " bits");
      vals = draw_distinct(base, L, rng);
      break;
    }
  }

  if (mode == AssignMode::AdversarialMinFar) {
    auto ecc = eccentricities(t);
    int max_ecc = *std::max_element(ecc.begin(), ecc.end());
    int far = 0;
    while (ecc[far] != max_ecc) ++far;
    // vals is sorted, so vals[0] is the unique minimum.
    a.at[far].push_back(vals[0]);
    for (int i = 1; i < static_cast<int>(vals.size()); ++i)
      a.at[place_rng.below(t.n)].push_back(vals[i]);
    return a;
  }

  std::vector<int> home(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) {
    home[i] = static_cast<int>(place_rng.below(t.n));
    a.at[home[i]].push_back(vals[i]);
  }

  if (mode == AssignMode::WithDuplicates && dup_pairs > 0) {
    // Duplicate dup_pairs of the drawn values, chosen at random; each second
    // copy lands on a different node than the first when one exists.
    std::vector<int> idx(vals.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
    place_rng.shuffle(idx);
    for (int d = 0; d < dup_pairs; ++d) {
      int i = idx[d];
      int node = static_cast<int>(place_rng.below(t.n));
      while (t.n > 1 && node == home[i]) node = static_cast<int>(place_rng.below(t.n));
      a.at[node].push_back(vals[i]);
    }
  }
  return a;
}

CoverPair make_double_cover_pair(int n, bool flip_cover_ports) {
  if (n < 3) throw InvalidParameterError("cover pair: n must be >= 3");
  int L = 1;
  while ((1 << L) < n + 1) ++L;

  auto ring_with_oriented_ports = [](int m, bool flip) {
    std::vector<std::array<int, 4>> es;
    es.reserve(m);
    for (int i = 0; i < m; ++i) {
      int j = (i + 1) % m;
      // Unflipped: everyone's port 0 faces the successor, port 1 the
      // predecessor.  Flipped swaps the two roles.
      if (!flip)
        es.push_back({i, j, 0, 1});
      else
        es.push_back({i, j, 1, 0});
    }
    return from_edges_with_ports(m, es);
  };

  CoverPair p;
  p.base = ring_with_oriented_ports(n, false);
  p.cover = ring_with_oriented_ports(2 * n, flip_cover_ports);
  p.base_tokens.L = L;
  p.base_tokens.at.assign(n, {});
  for (int i = 0; i < n; ++i)
    p.base_tokens.at[i].push_back(BitString::from_u64(i + 1, L));
  p.cover_tokens.L = L;
  p.cover_tokens.at.assign(2 * n, {});
  p.map_to_base.assign(2 * n, 0);
  for (int j = 0; j < 2 * n; ++j) {
    p.map_to_base[j] = j % n;
    p.cover_tokens.at[j].push_back(BitString::from_u64(j % n + 1, L));
  }
  return p;
}

}  // namespace tokcol
