#include "tokcol/topology.hpp"

#include <algorithm>
#include <array>
#include <queue>
#include <set>
#include <string>

#include "tokcol/errors.hpp"
#include "tokcol/rng.hpp"

namespace tokcol {

bool Topology::connected() const {
  if (n <= 0) return false;
  std::vector<char> seen(n, 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int cnt = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (const auto& pp : ports[v]) {
      if (!seen[pp.node]) {
        seen[pp.node] = 1;
        ++cnt;
        q.push(pp.node);
      }
    }
  }
  return cnt == n;
}

void Topology::validate() const {
  if (n < 1) throw InvalidParameterError("topology: n must be >= 1");
  if (static_cast<int>(ports.size()) != n)
    throw InvalidParameterError("topology: port table size != n");
  std::set<std::pair<int, int>> eset;
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw InvalidParameterError("topology: edge endpoint out of range");
    if (u >= v) throw InvalidParameterError("topology: edges must satisfy u < v");
    if (!eset.insert({u, v}).second)
      throw InvalidParameterError("topology: duplicate edge");
  }
  std::size_t port_pairs = 0;
  for (int v = 0; v < n; ++v) {
    for (int i = 0; i < degree(v); ++i) {
      const PortPeer& pp = ports[v][i];
      if (pp.node < 0 || pp.node >= n || pp.node == v)
        throw InvalidParameterError("topology: bad port peer");
      if (pp.port < 0 || pp.port >= degree(pp.node))
        throw InvalidParameterError("topology: peer port out of range");
      const PortPeer& back = ports[pp.node][pp.port];
      if (back.node != v || back.port != i)
        throw InvalidParameterError("topology: port map not involutive");
      auto key = std::minmax(v, pp.node);
      if (!eset.count({key.first, key.second}))
        throw InvalidParameterError("topology: port references a non-edge");
      ++port_pairs;
    }
  }
  if (port_pairs != 2 * edges.size())
    throw InvalidParameterError("topology: port map does not cover every edge exactly once");
  if (!connected()) throw InvalidParameterError("topology: graph not connected");
}

Topology from_edges(int n, std::vector<std::pair<int, int>> edges, std::uint64_t seed) {
  for (auto& [u, v] : edges) {
    if (u > v) std::swap(u, v);
    if (u < 0 || v >= n) throw InvalidParameterError("topology: edge endpoint out of range");
    if (u == v) throw InvalidParameterError("topology: self loop");
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  Topology t;
  t.n = n;
  t.edges = edges;
  t.ports.assign(n, {});

  std::vector<std::vector<int>> incident(n);  // edge indices
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    incident[edges[e].first].push_back(e);
    incident[edges[e].second].push_back(e);
  }
  Rng rng(seed);
  std::vector<std::array<int, 2>> slot(edges.size(), {-1, -1});  // port at u, at v
  for (int v = 0; v < n; ++v) {
    auto order = incident[v];
    auto r = rng.derive(0x706f7274, v);
    r.shuffle(order);
    t.ports[v].resize(order.size());
    for (int i = 0; i < static_cast<int>(order.size()); ++i) {
      int e = order[i];
      slot[e][edges[e].first == v ? 0 : 1] = i;
    }
  }
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    auto [u, v] = edges[e];
    t.ports[u][slot[e][0]] = {v, slot[e][1]};
    t.ports[v][slot[e][1]] = {u, slot[e][0]};
  }
  t.validate();
  return t;
}

Topology from_edges_with_ports(int n, const std::vector<std::array<int, 4>>& spec) {
  Topology t;
  t.n = n;
  t.ports.assign(n, {});
  for (const auto& e : spec) {
    auto [u, v, pu, pv] = e;
    int a = std::min(u, v), b = std::max(u, v);
    t.edges.emplace_back(a, b);
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw InvalidParameterError("edge endpoint out of range");
    for (auto [w, p] : {std::pair{u, pu}, std::pair{v, pv}})
      if (p < 0) throw InvalidParameterError("negative port");
    if (static_cast<int>(t.ports[u].size()) <= pu) t.ports[u].resize(pu + 1);
    if (static_cast<int>(t.ports[v].size()) <= pv) t.ports[v].resize(pv + 1);
    t.ports[u][pu] = {v, pv};
    t.ports[v][pv] = {u, pu};
  }
  std::sort(t.edges.begin(), t.edges.end());
  t.validate();
  return t;
}

Topology make_ring(int n, std::uint64_t seed) {
  if (n < 3) throw InvalidParameterError("ring: n must be >= 3");
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return from_edges(n, std::move(edges), seed);
}

Topology make_path(int n, std::uint64_t seed) {
  if (n < 1) throw InvalidParameterError("path: n must be >= 1");
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return from_edges(n, std::move(edges), seed);
}

Topology make_random_connected(int n, double edge_prob, std::uint64_t seed) {
  if (n < 1) throw InvalidParameterError("random: n must be >= 1");
  if (edge_prob < 0.0 || edge_prob > 1.0)
    throw InvalidParameterError("random: edge_prob must be in [0, 1]");
  Rng rng(seed);
  auto tree_rng = rng.derive(0x74726565);
  std::vector<std::pair<int, int>> edges;
  std::set<std::pair<int, int>> have;
  for (int v = 1; v < n; ++v) {
    int u = static_cast<int>(tree_rng.below(v));
    edges.emplace_back(u, v);
    have.insert({u, v});
  }
  auto extra_rng = rng.derive(0x6578747261);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (!have.count({u, v}) && extra_rng.coin(edge_prob)) edges.emplace_back(u, v);
  return from_edges(n, std::move(edges), seed);
}

Topology make_dumbbell(int n_half, int bridge_len, std::uint64_t seed) {
  if (n_half < 2) throw InvalidParameterError("dumbbell: n_half must be >= 2");
  if (bridge_len < 1) throw InvalidParameterError("dumbbell: bridge_len must be >= 1");
  int n = 2 * n_half + bridge_len;
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n_half; ++u)
    for (int v = u + 1; v < n_half; ++v) edges.emplace_back(u, v);
  for (int u = n_half; u < 2 * n_half; ++u)
    for (int v = u + 1; v < 2 * n_half; ++v) edges.emplace_back(u, v);
  int b0 = 2 * n_half;
  edges.emplace_back(0, b0);
  for (int i = 0; i + 1 < bridge_len; ++i) edges.emplace_back(b0 + i, b0 + i + 1);
  edges.emplace_back(n_half, b0 + bridge_len - 1);
  return from_edges(n, std::move(edges), seed);
}

std::vector<int> bfs_distances(const Topology& t, int src) {
  std::vector<int> d(t.n, -1);
  std::queue<int> q;
  d[src] = 0;
  q.push(src);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (const auto& pp : t.ports[v]) {
      if (d[pp.node] < 0) {
        d[pp.node] = d[v] + 1;
        q.push(pp.node);
      }
    }
  }
  return d;
}

std::vector<int> eccentricities(const Topology& t) {
  std::vector<int> ecc(t.n, 0);
  for (int v = 0; v < t.n; ++v) {
    auto d = bfs_distances(t, v);
    for (int u = 0; u < t.n; ++u) {
      if (d[u] < 0) throw InvalidParameterError("eccentricities: graph not connected");
      ecc[v] = std::max(ecc[v], d[u]);
    }
  }
  return ecc;
}

int diameter(const Topology& t) {
  auto ecc = eccentricities(t);
  return *std::max_element(ecc.begin(), ecc.end());
}

}  // namespace tokcol
