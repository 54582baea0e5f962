#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <queue>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "srep/error.hpp"
#include "srep/rng.hpp"

namespace srep {

using NodeId = std::uint32_t;

/// Undirected simple graph stored as sorted adjacency lists.
///
/// Instances are immutable once built; every factory validates symmetry and
/// rejects self-loops and parallel edges.
class Topology {
 public:
  Topology() = default;

  /// Builds a graph on `n` nodes from an undirected edge list.
  static Topology from_edges(std::size_t n,
                             std::span<const std::pair<NodeId, NodeId>> edges) {
    std::vector<std::vector<NodeId>> adj(n);
    for (auto [u, v] : edges) {
      if (u >= n || v >= n) throw ModelError("edge endpoint out of range");
      if (u == v) throw ModelError("self-loop at node " + std::to_string(u));
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
    return from_adjacency(std::move(adj));
  }

  /// Takes ownership of adjacency lists; they must already be symmetric.
  static Topology from_adjacency(std::vector<std::vector<NodeId>> adj) {
    Topology g;
    std::size_t half_edges = 0;
    for (std::size_t u = 0; u < adj.size(); ++u) {
      auto& nb = adj[u];
      std::sort(nb.begin(), nb.end());
      if (std::adjacent_find(nb.begin(), nb.end()) != nb.end())
        throw ModelError("parallel edge at node " + std::to_string(u));
      for (NodeId v : nb) {
        if (v >= adj.size()) throw ModelError("neighbor out of range");
        if (v == u) throw ModelError("self-loop at node " + std::to_string(u));
      }
      half_edges += nb.size();
    }
    for (std::size_t u = 0; u < adj.size(); ++u)
      for (NodeId v : adj[u])
        if (!std::binary_search(adj[v].begin(), adj[v].end(), static_cast<NodeId>(u)))
          throw ModelError("asymmetric adjacency between " + std::to_string(u) + " and " +
                           std::to_string(v));
    g.adj_ = std::move(adj);
    g.edges_ = half_edges / 2;
    return g;
  }

  std::size_t node_count() const noexcept { return adj_.size(); }
  std::size_t edge_count() const noexcept { return edges_; }

  std::span<const NodeId> neighbors(NodeId u) const { return adj_[u]; }
  std::size_t degree(NodeId u) const { return adj_[u].size(); }

  bool has_edge(NodeId u, NodeId v) const {
    return std::binary_search(adj_[u].begin(), adj_[u].end(), v);
  }

  /// Edges as (i, j) with i < j, in lexicographic order.
  std::vector<std::pair<NodeId, NodeId>> edges() const {
    std::vector<std::pair<NodeId, NodeId>> out;
    out.reserve(edges_);
    for (NodeId u = 0; u < adj_.size(); ++u)
      for (NodeId v : adj_[u])
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  friend bool operator==(const Topology&, const Topology&) = default;

 private:
  std::vector<std::vector<NodeId>> adj_;
  std::size_t edges_ = 0;
};

inline double mean_degree(const Topology& g) {
  if (g.node_count() == 0) return 0.0;
  return 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(g.node_count());
}

inline constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

/// Hop distances from `source`; unreachable nodes get kUnreachable.
inline std::vector<std::size_t> bfs_distances(const Topology& g, NodeId source) {
  std::vector<std::size_t> dist(g.node_count(), kUnreachable);
  std::queue<NodeId> q;
  dist[source] = 0;
  q.push(source);
  while (!q.empty()) {
    NodeId u = q.front();
    q.pop();
    for (NodeId v : g.neighbors(u)) {
      if (dist[v] == kUnreachable) {
        dist[v] = dist[u] + 1;
        q.push(v);
      }
    }
  }
  return dist;
}

inline bool is_connected(const Topology& g) {
  if (g.node_count() == 0) return true;
  auto dist = bfs_distances(g, 0);
  return std::none_of(dist.begin(), dist.end(),
                      [](std::size_t d) { return d == kUnreachable; });
}

/// Exact diameter.
///
/// Runs 64 breadth-first searches at once, one per bit lane: frontier[v]
/// holds the set of sources whose search reached v at the current level.
/// Throws StructuralError if the graph is disconnected.
inline std::size_t diameter(const Topology& g) {
  const std::size_t n = g.node_count();
  if (n == 0) throw StructuralError("diameter of empty graph");
  std::vector<std::uint64_t> visited(n), frontier(n), next(n);
  std::size_t best = 0;
  for (std::size_t base = 0; base < n; base += 64) {
    const std::size_t lanes = std::min<std::size_t>(64, n - base);
    const std::uint64_t full = lanes == 64 ? ~0ULL : ((1ULL << lanes) - 1);
    std::fill(visited.begin(), visited.end(), 0);
    std::fill(frontier.begin(), frontier.end(), 0);
    for (std::size_t b = 0; b < lanes; ++b) {
      visited[base + b] = 1ULL << b;
      frontier[base + b] = 1ULL << b;
    }
    std::size_t level = 0;
    for (;;) {
      bool advanced = false;
      for (NodeId v = 0; v < n; ++v) {
        std::uint64_t acc = 0;
        for (NodeId u : g.neighbors(v)) acc |= frontier[u];
        acc &= ~visited[v];
        next[v] = acc;
        advanced |= acc != 0;
      }
      if (!advanced) break;
      for (std::size_t v = 0; v < n; ++v) visited[v] |= next[v];
      frontier.swap(next);
      ++level;
    }
    for (std::size_t v = 0; v < n; ++v)
      if (visited[v] != full) throw StructuralError("graph is disconnected");
    best = std::max(best, level);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Builders

inline Topology complete_graph(std::size_t n) {
  std::vector<std::vector<NodeId>> adj(n);
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = 0; v < n; ++v)
      if (u != v) adj[u].push_back(v);
  return Topology::from_adjacency(std::move(adj));
}

inline Topology path_graph(std::size_t n) {
  std::vector<std::pair<NodeId, NodeId>> e;
  for (NodeId u = 0; u + 1 < n; ++u) e.emplace_back(u, u + 1);
  return Topology::from_edges(n, e);
}

inline Topology cycle_graph(std::size_t n) {
  if (n < 3) throw ParameterError("cycle needs at least 3 nodes");
  std::vector<std::pair<NodeId, NodeId>> e;
  for (NodeId u = 0; u < n; ++u) e.emplace_back(u, static_cast<NodeId>((u + 1) % n));
  return Topology::from_edges(n, e);
}

inline Topology star_graph(std::size_t n) {
  std::vector<std::pair<NodeId, NodeId>> e;
  for (NodeId u = 1; u < n; ++u) e.emplace_back(0, u);
  return Topology::from_edges(n, e);
}

/// Uniform random recursive tree: node k attaches to a uniform earlier node.
inline Topology random_tree(std::size_t n, std::uint64_t seed) {
  Rng r(seed);
  std::vector<std::pair<NodeId, NodeId>> e;
  for (NodeId u = 1; u < n; ++u) e.emplace_back(static_cast<NodeId>(r.below(u)), u);
  return Topology::from_edges(n, e);
}

/// Watts-Strogatz small-world graph.
///
/// Starts from a ring lattice where each node links to mean_degree/2
/// neighbors on each side, then visits lattice edges (u, u+j) for
/// j = 1..mean_degree/2 and u = 0..n-1, moving the far endpoint to a
/// uniformly chosen node with probability p. Moves that would create a
/// self-loop or a parallel edge are redrawn; nodes already adjacent to
/// everyone are skipped. The edge count stays n*mean_degree/2.
///
/// A disconnected result is discarded and regenerated from a derived seed,
/// up to `max_attempts` times.
inline Topology watts_strogatz(std::size_t n, std::size_t mean_degree, double p,
                               std::uint64_t seed, int max_attempts = 100) {
  if (n < 3) throw ParameterError("watts_strogatz: need n >= 3");
  if (mean_degree == 0 || mean_degree % 2 != 0)
    throw ParameterError("watts_strogatz: mean degree must be even and positive");
  if (mean_degree >= n) throw ParameterError("watts_strogatz: mean degree must be < n");
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("watts_strogatz: p must lie in [0, 1]");

  const std::size_t half = mean_degree / 2;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Rng r(attempt == 0 ? seed : derive_seed(seed, {static_cast<std::uint64_t>(attempt)}));
    std::vector<std::vector<NodeId>> adj(n);
    for (NodeId u = 0; u < n; ++u) {
      for (std::size_t j = 1; j <= half; ++j) {
        auto v = static_cast<NodeId>((u + j) % n);
        adj[u].push_back(v);
        adj[v].push_back(u);
      }
    }
    auto linked = [&](NodeId a, NodeId b) {
      return std::find(adj[a].begin(), adj[a].end(), b) != adj[a].end();
    };
    auto unlink = [&](NodeId a, NodeId b) {
      adj[a].erase(std::find(adj[a].begin(), adj[a].end(), b));
      adj[b].erase(std::find(adj[b].begin(), adj[b].end(), a));
    };
    if (p > 0.0) {
      for (std::size_t j = 1; j <= half; ++j) {
        for (NodeId u = 0; u < n; ++u) {
          if (!r.bernoulli(p)) continue;
          if (adj[u].size() >= n - 1) continue;
          auto v = static_cast<NodeId>((u + j) % n);
          NodeId w;
          do {
            w = static_cast<NodeId>(r.below(n));
          } while (w == u || linked(u, w));
          unlink(u, v);
          adj[u].push_back(w);
          adj[w].push_back(u);
        }
      }
    }
    auto g = Topology::from_adjacency(std::move(adj));
    if (is_connected(g)) return g;
  }
  throw GenerationError("watts_strogatz: no connected graph within " +
                        std::to_string(max_attempts) + " attempts");
}

// ---------------------------------------------------------------------------
// Text format: one line per node, "id: n1 n2 ...".

inline void write_adjacency(std::ostream& os, const Topology& g) {
  for (NodeId u = 0; u < g.node_count(); ++u) {
    os << u << ':';
    for (NodeId v : g.neighbors(u)) os << ' ' << v;
    os << '\n';
  }
}

inline Topology read_adjacency(std::istream& is) {
  std::vector<std::vector<NodeId>> adj;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) throw ParseError("missing ':'", lineno);
    std::istringstream head(line.substr(0, colon));
    std::uint64_t id;
    if (!(head >> id)) throw ParseError("bad node id", lineno);
    if (id != adj.size()) throw ParseError("node ids must be consecutive from 0", lineno);
    std::istringstream rest(line.substr(colon + 1));
    std::vector<NodeId> nb;
    std::int64_t v;
    while (rest >> v) {
      if (v < 0) throw ParseError("negative neighbor id", lineno);
      nb.push_back(static_cast<NodeId>(v));
    }
    if (!rest.eof()) throw ParseError("bad neighbor list", lineno);
    adj.push_back(std::move(nb));
  }
  return Topology::from_adjacency(std::move(adj));
}

}  // namespace srep
