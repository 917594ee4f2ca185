#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

namespace tokcol {

struct PortPeer {
  int node = -1;
  int port = -1;  // peer's port index, 0-based
  friend bool operator==(const PortPeer&, const PortPeer&) = default;
};

// Undirected simple connected graph with a per-node port numbering.  Nodes
// address neighbors only through port indices; the peer map is resolution
// data for the scheduler and the checkers, never shown to a node.
struct Topology {
  int n = 0;
  std::vector<std::pair<int, int>> edges;       // u < v, sorted, unique
  std::vector<std::vector<PortPeer>> ports;     // ports[v][i] = peer of v's port i

  int degree(int v) const { return static_cast<int>(ports[v].size()); }

  std::vector<int> neighbors(int v) const {
    std::vector<int> out;
    out.reserve(ports[v].size());
    for (const auto& pp : ports[v]) out.push_back(pp.node);
    return out;
  }

  bool connected() const;
  // Throws InvalidParameterError on a malformed graph or port map.
  void validate() const;
};

// Build a port map over the given edges: each node's incident edges land on
// ports in seeded random order.
Topology from_edges(int n, std::vector<std::pair<int, int>> edges, std::uint64_t seed);

// Explicit ports, one tuple (u, v, port_u, port_v) per edge, 0-based.
Topology from_edges_with_ports(int n, const std::vector<std::array<int, 4>>& edges);

Topology make_ring(int n, std::uint64_t seed);
Topology make_path(int n, std::uint64_t seed);
// Seeded spanning tree plus each remaining pair independently with
// probability edge_prob.
Topology make_random_connected(int n, double edge_prob, std::uint64_t seed);
// Two cliques of n_half nodes joined by a path of bridge_len nodes; min cut 1.
Topology make_dumbbell(int n_half, int bridge_len, std::uint64_t seed);

std::vector<int> bfs_distances(const Topology& t, int src);
std::vector<int> eccentricities(const Topology& t);
int diameter(const Topology& t);

}  // namespace tokcol
