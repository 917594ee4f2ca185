#include "tokcol/verify.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <sstream>

namespace tokcol {

Verdict oracle_collision(const TokenAssignment& tokens) {
  std::vector<Token> all = tokens.all();
  std::sort(all.begin(), all.end());
  for (std::size_t i = 1; i < all.size(); ++i)
    if (all[i - 1] == all[i]) return Verdict::Collision;
  return Verdict::AllDistinct;
}

const char* const kCheckerFamilies[8] = {
    "identifier-monotone", "parent-forest",      "parent-path-nonincrease",
    "child-links",         "halt-discipline",    "token-conservation",
    "count-at-decision",   "collect-exactly-once"};

std::string InvariantReport::to_string() const {
  std::ostringstream os;
  for (const auto& v : violations) {
    os << v.checker << " row " << v.round;
    if (v.node >= 0) os << " node " << v.node;
    os << ": " << v.detail << "\n";
  }
  return os.str();
}

std::vector<std::optional<int>> parent_nodes(const Topology& topo,
                                             const std::vector<NodeSnapshot>& row) {
  std::vector<std::optional<int>> pn(topo.n);
  for (int v = 0; v < topo.n; ++v) {
    if (!row[v].parent) continue;
    int port = *row[v].parent;
    if (port < 0 || port >= topo.degree(v)) continue;  // left unresolved
    pn[v] = topo.ports[v][port].node;
  }
  return pn;
}

namespace {

using Multiset = std::map<std::string, long long>;

Multiset to_multiset(const std::vector<Token>& xs) {
  Multiset m;
  for (const Token& t : xs) ++m[t.to_hex()];
  return m;
}

std::optional<int> port_of(const Topology& topo, int u, int v) {
  for (int i = 0; i < topo.degree(u); ++i)
    if (topo.ports[u][i].node == v) return i;
  return std::nullopt;
}

// Streamed-identifier piece count for the algorithm's election space; the
// one-shot algorithm carries whole identifiers and skips stream conditions.
std::optional<int> elect_pieces(const RunTrace& t) {
  if (t.algorithm == Algorithm::DetLarge) return t.M;
  if (t.algorithm == Algorithm::Rand) return piece_count(std::max(1, t.id_bits), t.B);
  return std::nullopt;
}

// The ports v must list as children at row s, when that row is steady enough
// to pin them down exactly; nullopt when the conditions do not hold.  The
// gate is the whole closed neighborhood done building one row earlier: v's
// receive then rebuilds chi from exactly the fields below, while a node that
// left the election this very row may still carry the link set it saw on the
// way out.
std::optional<std::vector<int>> expected_children(const Topology& topo, const RunTrace& t,
                                                  long long s, int v) {
  if (s < 1 || s >= static_cast<long long>(t.rounds.size())) return std::nullopt;
  const auto& prev = t.rounds[s - 1];
  const auto& cur = t.rounds[s];
  if (prev[v].build) return std::nullopt;
  long long hv = t.halt_round[v];
  if (hv != -1 && hv <= s) return std::nullopt;
  std::optional<int> pieces = elect_pieces(t);
  std::vector<int> exp;
  for (int i = 0; i < topo.degree(v); ++i) {
    int u = topo.ports[v][i].node;
    long long hu = t.halt_round[u];
    if (hu != -1 && hu <= s) return std::nullopt;
    if (prev[u].build) return std::nullopt;
    if (!prev[u].parent || *prev[u].parent != topo.ports[v][i].port) continue;
    if (pieces && cur[u].sent != *pieces) continue;
    if (!Ident::equal(cur[u].rid, cur[v].rid)) continue;
    exp.push_back(i);
  }
  return exp;
}

struct DecisionEvent {
  long long row;
  int node;
};

std::vector<DecisionEvent> decision_events(const Topology& topo, const RunTrace& t) {
  std::vector<DecisionEvent> ev;
  for (long long s = 1; s < static_cast<long long>(t.rounds.size()); ++s) {
    for (int v = 0; v < t.n; ++v) {
      if (!t.rounds[s][v].res || t.rounds[s - 1][v].res) continue;
      bool from_neighbor = false;
      for (int u : topo.neighbors(v))
        if (t.rounds[s - 1][u].res) { from_neighbor = true; break; }
      if (!from_neighbor) ev.push_back({s, v});
    }
  }
  return ev;
}

// Root of v's parent chain at one row; nullopt on a cycle or dangling port.
std::optional<int> chain_root(const std::vector<std::optional<int>>& pn, int v, int n) {
  int cur = v;
  for (int steps = 0; steps <= n; ++steps) {
    if (!pn[cur]) return cur;
    cur = *pn[cur];
  }
  return std::nullopt;
}

void check_identifier_monotone(const RunTrace& t, InvariantReport& rep) {
  for (long long s = 1; s < static_cast<long long>(t.rounds.size()); ++s)
    for (int v = 0; v < t.n; ++v)
      if (Ident::less(t.rounds[s - 1][v].rid, t.rounds[s][v].rid))
        rep.violations.push_back({"identifier-monotone", s, v,
                                  "identifier grew from " + t.rounds[s - 1][v].rid.to_string() +
                                      " to " + t.rounds[s][v].rid.to_string()});
}

void check_parent_forest(const Topology& topo, const RunTrace& t, InvariantReport& rep) {
  for (long long s = 0; s < static_cast<long long>(t.rounds.size()); ++s) {
    auto pn = parent_nodes(topo, t.rounds[s]);
    std::vector<int> color(t.n, 0);  // 0 fresh, 1 on stack, 2 done
    for (int v = 0; v < t.n; ++v) {
      if (color[v]) continue;
      std::vector<int> stack;
      int cur = v;
      while (color[cur] == 0) {
        color[cur] = 1;
        stack.push_back(cur);
        if (!pn[cur]) break;
        cur = *pn[cur];
      }
      if (color[cur] == 1 && pn[cur]) {
        rep.violations.push_back(
            {"parent-forest", s, cur, "parent pointers form a cycle"});
      }
      for (int w : stack) color[w] = 2;
    }
  }
}

void check_parent_path(const Topology& topo, const RunTrace& t, InvariantReport& rep) {
  for (long long s = 0; s < static_cast<long long>(t.rounds.size()); ++s) {
    auto pn = parent_nodes(topo, t.rounds[s]);
    for (int v = 0; v < t.n; ++v) {
      if (!pn[v]) continue;
      const Ident& child = t.rounds[s][v].rid;
      const Ident& parent = t.rounds[s][*pn[v]].rid;
      if (Ident::less(child, parent))
        rep.violations.push_back({"parent-path-nonincrease", s, v,
                                  "parent " + std::to_string(*pn[v]) + " holds " +
                                      parent.to_string() + ", above child's " +
                                      child.to_string()});
    }
  }
}

void check_child_links(const Topology& topo, const RunTrace& t, InvariantReport& rep) {
  for (long long s = 1; s < static_cast<long long>(t.rounds.size()); ++s) {
    for (int v = 0; v < t.n; ++v) {
      auto exp = expected_children(topo, t, s, v);
      if (!exp) continue;
      if (t.rounds[s][v].chi != *exp) {
        std::string d = "chi {";
        for (int i : t.rounds[s][v].chi) d += std::to_string(i) + " ";
        d += "} does not mirror the neighbors' parent links {";
        for (int i : *exp) d += std::to_string(i) + " ";
        d += "}";
        rep.violations.push_back({"child-links", s, v, d});
      }
    }
  }
}

void check_halt_discipline(const Topology& topo, const RunTrace& t, InvariantReport& rep) {
  for (const auto& [eu, ev] : topo.edges) {
    long long hu = t.halt_round[eu], hv = t.halt_round[ev];
    if (hu >= 1 && hv >= 1 && (hu - hv > 1 || hv - hu > 1))
      rep.violations.push_back({"halt-discipline", std::max(hu, hv), eu,
                                "neighbors halted " + std::to_string(hu) + " and " +
                                    std::to_string(hv)});
  }
  if (t.outcome == Outcome::Decided)
    for (int v = 0; v < t.n; ++v)
      if (t.halt_round[v] < 1)
        rep.violations.push_back(
            {"halt-discipline", 0, v, "run decided but this node never halted"});
}

void check_token_conservation(const RunTrace& t, InvariantReport& rep) {
  if (t.algorithm == Algorithm::Rand) return;  // tokens never move
  long long cap = t.algorithm == Algorithm::DetSmall && t.packing ? t.pack_cap : 1;
  std::map<std::string, std::vector<long long>> inflight;  // value -> birth rows
  std::vector<Multiset> prev(t.n);
  for (int v = 0; v < t.n; ++v) prev[v] = to_multiset(t.rounds[0][v].x);

  for (long long s = 1; s < static_cast<long long>(t.rounds.size()); ++s) {
    std::vector<Multiset> cur(t.n);
    for (int v = 0; v < t.n; ++v) cur[v] = to_multiset(t.rounds[s][v].x);

    for (int v = 0; v < t.n; ++v) {
      long long removed = 0;
      for (const auto& [hex, cnt] : prev[v]) {
        auto it = cur[v].find(hex);
        long long now = it == cur[v].end() ? 0 : it->second;
        for (long long i = now; i < cnt; ++i) {
          inflight[hex].push_back(s);
          ++removed;
        }
      }
      if (removed > cap)
        rep.violations.push_back({"token-conservation", s, v,
                                  "ejected " + std::to_string(removed) +
                                      " tokens in one superstep, cap " +
                                      std::to_string(cap)});
    }
    for (int v = 0; v < t.n; ++v) {
      for (const auto& [hex, cnt] : cur[v]) {
        auto it = prev[v].find(hex);
        long long before = it == prev[v].end() ? 0 : it->second;
        for (long long i = before; i < cnt; ++i) {
          auto fit = inflight.find(hex);
          if (fit == inflight.end() || fit->second.empty() || fit->second.front() > s - 1) {
            rep.violations.push_back({"token-conservation", s, v,
                                      "token " + hex +
                                          " appeared without a matching departure"});
          } else {
            fit->second.erase(fit->second.begin());
          }
        }
      }
    }
    prev = std::move(cur);
  }
}

void check_decisions(const Topology& topo, const RunTrace& t, InvariantReport& rep) {
  for (const DecisionEvent& ev : decision_events(topo, t)) {
    const NodeSnapshot& ns = t.rounds[ev.row][ev.node];
    auto pn = parent_nodes(topo, t.rounds[ev.row]);
    if (pn[ev.node]) {
      rep.violations.push_back(
          {"count-at-decision", ev.row, ev.node, "deciding node has a parent"});
      continue;
    }
    long long size = 0;
    std::vector<int> members;
    bool walk_ok = true;
    for (int u = 0; u < t.n; ++u) {
      auto root = chain_root(pn, u, t.n);
      if (!root) { walk_ok = false; break; }
      if (*root == ev.node) {
        ++size;
        members.push_back(u);
      }
    }
    if (!walk_ok) continue;  // cycles are the forest checker's finding
    if (!ns.cnt || *ns.cnt != size)
      rep.violations.push_back({"count-at-decision", ev.row, ev.node,
                                "count " + (ns.cnt ? std::to_string(*ns.cnt) : "-") +
                                    " of a subtree of " + std::to_string(size)});
    if (t.algorithm != Algorithm::Rand) {
      Multiset expect;
      for (int u : members)
        for (const Token& tok : t.rounds[0][u].x) ++expect[tok.to_hex()];
      if (to_multiset(ns.x) != expect)
        rep.violations.push_back({"collect-exactly-once", ev.row, ev.node,
                                  "collected tokens differ from the subtree's initial "
                                  "tokens"});
    }
  }
}

}  // namespace

InvariantReport check_trace(const Topology& topo, const RunTrace& t) {
  InvariantReport rep;
  if (t.rounds.empty()) {
    rep.violations.push_back({"trace-shape", 0, -1, "no snapshot rows"});
    return rep;
  }
  for (const auto& row : t.rounds)
    if (static_cast<int>(row.size()) != topo.n) {
      rep.violations.push_back({"trace-shape", 0, -1, "row width does not match n"});
      return rep;
    }
  if (static_cast<int>(t.halt_round.size()) != topo.n) {
    rep.violations.push_back({"trace-shape", 0, -1, "halt vector does not match n"});
    return rep;
  }

  check_identifier_monotone(t, rep);
  check_parent_forest(topo, t, rep);
  check_parent_path(topo, t, rep);
  check_child_links(topo, t, rep);
  check_halt_discipline(topo, t, rep);
  check_token_conservation(t, rep);
  check_decisions(topo, t, rep);
  return rep;
}

std::optional<std::string> check_single_tree_on_distinct(const Topology& topo,
                                                         const RunTrace& t) {
  if (t.algorithm == Algorithm::Rand) return std::nullopt;
  std::vector<Token> all;
  for (int v = 0; v < t.n; ++v)
    for (const Token& tok : t.rounds[0][v].x) all.push_back(tok);
  std::vector<Token> sorted = all;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i - 1] == sorted[i]) return std::nullopt;  // needs distinct inputs
  if (sorted.empty()) return "no tokens in the trace";

  long long gate = -1;
  for (long long s = 0; s < static_cast<long long>(t.rounds.size()); ++s) {
    bool all_off = true;
    for (int v = 0; v < t.n && all_off; ++v) all_off = !t.rounds[s][v].build;
    if (all_off) { gate = s; break; }
  }
  if (gate < 0) return "the build flags never all cleared";

  const Token& min_tok = sorted[0];
  int holder = -1;
  for (int v = 0; v < t.n && holder < 0; ++v)
    for (const Token& tok : t.rounds[0][v].x)
      if (tok == min_tok) { holder = v; break; }

  auto pn = parent_nodes(topo, t.rounds[gate]);
  std::vector<int> roots;
  for (int v = 0; v < t.n; ++v)
    if (!pn[v]) roots.push_back(v);
  if (roots.size() != 1)
    return "expected one root at row " + std::to_string(gate) + ", found " +
           std::to_string(roots.size());
  if (roots[0] != holder)
    return "the root does not hold the minimum token";
  Ident want(min_tok);
  for (int v = 0; v < t.n; ++v)
    if (!Ident::equal(t.rounds[gate][v].rid, want))
      return "node " + std::to_string(v) + " settled on a different identifier";
  return std::nullopt;
}

long long equivalent_prefix_rows(const RunTrace& cover, const RunTrace& base,
                                 const std::vector<int>& map_to_base) {
  assert(static_cast<int>(map_to_base.size()) == cover.n);
  long long rows = std::min(cover.rounds.size(), base.rounds.size());
  for (long long s = 0; s < rows; ++s) {
    for (int v = 0; v < cover.n; ++v) {
      if (cover.rounds[s][v].state_line != base.rounds[s][map_to_base[v]].state_line)
        return s;
    }
  }
  return rows;
}

std::vector<TraceMutation> canned_mutations() {
  std::vector<TraceMutation> all;
  for (const char* fam : kCheckerFamilies)
    for (int v = 0; v < 3; ++v) all.push_back({fam, v});
  return all;
}

namespace {

int rid_width(const RunTrace& t) {
  return t.algorithm == Algorithm::Rand ? std::max(1, t.id_bits) : t.L;
}

std::optional<RunTrace> mutate_identifier(const RunTrace& t, int variant) {
  RunTrace c = t;
  int W = rid_width(t);
  if (variant == 2) {
    for (long long s = 1; s < static_cast<long long>(c.rounds.size()); ++s)
      for (int v = 0; v < c.n; ++v)
        if (Ident::less(c.rounds[s][v].rid, c.rounds[s - 1][v].rid)) {
          std::swap(c.rounds[s][v].rid, c.rounds[s - 1][v].rid);
          return c;
        }
    return std::nullopt;
  }
  for (long long s = 1; s < static_cast<long long>(c.rounds.size()); ++s)
    for (int v = 0; v < c.n; ++v) {
      const Ident& prev = c.rounds[s - 1][v].rid;
      if (!prev.is_token()) continue;
      if (variant == 0) {
        c.rounds[s][v].rid = Ident();
        return c;
      }
      if (prev.token() == BitString::all_ones(W)) continue;
      c.rounds[s][v].rid = Ident(BitString::all_ones(W));
      return c;
    }
  return std::nullopt;
}

std::optional<RunTrace> mutate_forest(const Topology& topo, const RunTrace& t, int variant) {
  if (topo.edges.empty() || t.rounds.size() < 2) return std::nullopt;
  RunTrace c = t;
  long long rows = static_cast<long long>(c.rounds.size());
  long long s = variant == 0 ? 1 : (variant == 1 ? rows - 1 : std::max<long long>(1, rows / 2));
  auto [eu, ev] = variant == 2 ? topo.edges.back() : topo.edges.front();
  auto pu = port_of(topo, eu, ev), pv = port_of(topo, ev, eu);
  assert(pu && pv);
  c.rounds[s][eu].parent = *pu;
  c.rounds[s][ev].parent = *pv;
  return c;
}

std::optional<RunTrace> mutate_path(const Topology& topo, const RunTrace& t, int variant) {
  RunTrace c = t;
  int W = rid_width(t);
  long long rows = static_cast<long long>(c.rounds.size());
  auto try_row = [&](long long s) -> bool {
    auto pn = parent_nodes(topo, c.rounds[s]);
    for (int v = 0; v < c.n; ++v) {
      if (!pn[v]) continue;
      const Ident& parent = c.rounds[s][*pn[v]].rid;
      const Ident& child = c.rounds[s][v].rid;
      if (variant == 1) {
        // push the parent above the child
        if (child.is_token() && !(child.token() == BitString::all_ones(W))) {
          c.rounds[s][*pn[v]].rid = Ident(BitString::all_ones(W));
          return true;
        }
      } else {
        // drop the child below the parent
        if (parent.is_token() && !(parent.token() == BitString(W))) {
          c.rounds[s][v].rid = Ident(BitString(W));
          return true;
        }
      }
    }
    return false;
  };
  if (variant == 2) {
    for (long long s = rows - 1; s >= 1; --s)
      if (try_row(s)) return c;
  } else {
    for (long long s = 1; s < rows; ++s)
      if (try_row(s)) return c;
  }
  return std::nullopt;
}

std::optional<RunTrace> mutate_child_links(const Topology& topo, const RunTrace& t,
                                           int variant) {
  RunTrace c = t;
  for (long long s = 1; s < static_cast<long long>(c.rounds.size()); ++s) {
    for (int v = 0; v < c.n; ++v) {
      auto exp = expected_children(topo, c, s, v);
      if (!exp) continue;
      std::vector<int>& chi = c.rounds[s][v].chi;
      if (chi != *exp) continue;  // malformed input trace, keep scanning
      if (variant == 0) {
        if (chi.empty()) continue;
        chi.erase(chi.begin());
        return c;
      }
      std::optional<int> absent;
      for (int i = 0; i < topo.degree(v); ++i)
        if (std::find(chi.begin(), chi.end(), i) == chi.end()) { absent = i; break; }
      if (!absent) continue;
      if (variant == 1) {
        chi.insert(std::lower_bound(chi.begin(), chi.end(), *absent), *absent);
        return c;
      }
      if (chi.empty()) continue;
      chi.erase(chi.begin());
      chi.insert(std::lower_bound(chi.begin(), chi.end(), *absent), *absent);
      return c;
    }
  }
  return std::nullopt;
}

std::optional<RunTrace> mutate_halt(const Topology& topo, const RunTrace& t, int variant) {
  if (t.outcome != Outcome::Decided) return std::nullopt;
  RunTrace c = t;
  if (variant == 1) {
    c.halt_round[0] = -1;
    return c;
  }
  if (topo.edges.empty()) return std::nullopt;
  int v = topo.edges.front().first;
  c.halt_round[v] += variant == 0 ? 5 : 11;
  return c;
}

std::optional<Token> fresh_token(const RunTrace& t) {
  std::map<std::string, bool> seen;
  std::vector<Token> pool;
  for (int v = 0; v < t.n; ++v)
    for (const Token& tok : t.rounds[0][v].x) {
      seen[tok.to_hex()] = true;
      pool.push_back(tok);
    }
  std::vector<Token> candidates = {BitString::all_ones(t.L), BitString(t.L)};
  if (!pool.empty())
    for (int b = 0; b < t.L; ++b) {
      Token flip = pool[0];
      flip.set_bit(b, !flip.bit(b));
      candidates.push_back(flip);
    }
  for (const Token& cand : candidates)
    if (!seen.count(cand.to_hex())) return cand;
  return std::nullopt;
}

std::optional<RunTrace> mutate_conservation(const RunTrace& t, int variant) {
  if (t.algorithm == Algorithm::Rand || t.rounds.size() < 2) return std::nullopt;
  RunTrace c = t;
  if (variant == 1) {
    auto cand = fresh_token(t);
    if (!cand) return std::nullopt;
    c.rounds[1][0].x.push_back(*cand);
    return c;
  }
  for (int v = 0; v < c.n; ++v) {
    if (c.rounds[1][v].x.empty()) continue;
    if (variant == 0) {
      c.rounds[1][0].x.push_back(c.rounds[1][v].x.back());
      return c;
    }
    int w = v == 0 ? 1 : 0;
    if (c.n < 2) return std::nullopt;
    c.rounds[1][w].x.push_back(c.rounds[1][v].x.back());
    c.rounds[1][v].x.pop_back();
    return c;
  }
  return std::nullopt;
}

std::optional<RunTrace> mutate_count(const Topology& topo, const RunTrace& t, int variant) {
  auto ev = decision_events(topo, t);
  if (ev.empty()) return std::nullopt;
  RunTrace c = t;
  NodeSnapshot& ns = c.rounds[ev[0].row][ev[0].node];
  if (!ns.cnt) return std::nullopt;
  if (variant == 0) *ns.cnt += 1;
  if (variant == 1) *ns.cnt = *ns.cnt > 1 ? *ns.cnt - 1 : *ns.cnt + 2;
  if (variant == 2) *ns.cnt += 100;
  return c;
}

std::optional<RunTrace> mutate_collect(const Topology& topo, const RunTrace& t, int variant) {
  if (t.algorithm == Algorithm::Rand) return std::nullopt;
  auto ev = decision_events(topo, t);
  if (ev.empty()) return std::nullopt;
  RunTrace c = t;
  NodeSnapshot& ns = c.rounds[ev[0].row][ev[0].node];
  if (ns.x.empty()) return std::nullopt;
  if (variant == 0) {
    ns.x.pop_back();
  } else if (variant == 1) {
    ns.x.push_back(ns.x.front());
  } else {
    ns.x.front().set_bit(0, !ns.x.front().bit(0));
  }
  return c;
}

}  // namespace

std::optional<RunTrace> apply_mutation(const Topology& topo, const RunTrace& t,
                                       const TraceMutation& m) {
  if (t.rounds.empty()) return std::nullopt;
  if (m.checker == std::string("identifier-monotone")) return mutate_identifier(t, m.variant);
  if (m.checker == std::string("parent-forest")) return mutate_forest(topo, t, m.variant);
  if (m.checker == std::string("parent-path-nonincrease")) return mutate_path(topo, t, m.variant);
  if (m.checker == std::string("child-links")) return mutate_child_links(topo, t, m.variant);
  if (m.checker == std::string("halt-discipline")) return mutate_halt(topo, t, m.variant);
  if (m.checker == std::string("token-conservation")) return mutate_conservation(t, m.variant);
  if (m.checker == std::string("count-at-decision")) return mutate_count(topo, t, m.variant);
  if (m.checker == std::string("collect-exactly-once")) return mutate_collect(topo, t, m.variant);
  return std::nullopt;
}

}  // namespace tokcol
