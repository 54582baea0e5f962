#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "srep/core.hpp"
#include "srep/dense.hpp"
#include "srep/error.hpp"
#include "srep/topology.hpp"

namespace srep {

/// One round of neighborhood union: every node's next pool is its own pool
/// together with all of its neighbors' current pools.
inline DenseAssignment g_step(const Topology& g, const DenseAssignment& a) {
  if (a.node_count() != g.node_count()) throw ModelError("assignment does not match graph");
  DenseAssignment next = a;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    auto out = next.row(u);
    for (NodeId v : g.neighbors(u)) {
      auto in = a.row(v);
      for (std::size_t k = 0; k < out.size(); ++k) out[k] |= in[k];
    }
  }
  return next;
}

inline PoolAssignment g_step(const Topology& g, const PoolAssignment& a) {
  check_assignment(g, a);
  PoolAssignment next(a.size());
  for (NodeId u = 0; u < g.node_count(); ++u) {
    Pool p = a[u];
    for (NodeId v : g.neighbors(u)) p.merge(a[v]);
    next[u] = std::move(p);
  }
  return next;
}

struct AnalyticResult {
  std::uint64_t c_total_elements = 0;
  std::uint64_t c_total_bytes = 0;
  std::uint64_t i_total = 0;
  std::vector<std::uint64_t> per_iteration_f;
};

struct AnalyticOptions {
  std::optional<std::size_t> diameter;
  /// Recompute edge differences only where an endpoint's pool grew.
  bool incremental = true;
};

/// C and I by iterating g until f vanishes; C is the sum of f before each step.
inline AnalyticResult analytic_run(const Topology& g, DenseAssignment a,
                                   const AnalyticOptions& opt = {}) {
  if (a.node_count() != g.node_count()) throw ModelError("assignment does not match graph");
  const std::size_t diam = opt.diameter ? *opt.diameter : diameter(g);
  const auto edges = g.edges();
  std::vector<std::uint64_t> m(edges.size());
  std::uint64_t f = 0;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    m[e] = xor_count(a.row(edges[e].first), a.row(edges[e].second));
    f += m[e];
  }

  AnalyticResult res;
  std::vector<std::size_t> sizes(g.node_count());
  std::vector<char> grew(g.node_count());
  while (f > 0) {
    if (res.i_total >= diam)
      throw AssertionError("analytic run exceeded diameter (" + std::to_string(diam) + ") steps");
    res.per_iteration_f.push_back(f);
    res.c_total_elements += f;
    ++res.i_total;
    for (std::size_t v = 0; v < sizes.size(); ++v) sizes[v] = a.pool_size(v);
    a = g_step(g, a);
    for (std::size_t v = 0; v < sizes.size(); ++v) grew[v] = a.pool_size(v) != sizes[v];
    f = 0;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const auto [i, j] = edges[e];
      if (!opt.incremental || grew[i] || grew[j]) m[e] = xor_count(a.row(i), a.row(j));
      f += m[e];
    }
  }
  res.c_total_bytes = res.c_total_elements * kTxIdWireBytes;
  return res;
}

inline AnalyticResult analytic_run(const Topology& g, const PoolAssignment& a,
                                   const AnalyticOptions& opt = {}) {
  check_assignment(g, a);
  return analytic_run(g, DenseAssignment::from_pools(a), opt);
}

/// Closed-form communication bounds for unit-pool EP-SREP and the predicted
/// iteration count (the diameter).
struct EpSrepBounds {
  std::uint64_t lower_c = 0;     // n(n-1)
  std::uint64_t upper_c = 0;     // n(n^2-1), strict
  std::uint64_t ws_upper_c = 0;  // n(n*deg + n - 1) = n(2|E| + n - 1), strict
  std::uint64_t i_equals_diameter = 0;
};

inline EpSrepBounds ep_srep_bounds(const Topology& g) {
  const std::uint64_t n = g.node_count();
  EpSrepBounds b;
  b.lower_c = n * (n - 1);
  b.upper_c = n * (n * n - 1);
  b.ws_upper_c = n * (2 * g.edge_count() + n - 1);
  b.i_equals_diameter = diameter(g);
  return b;
}

}  // namespace srep
