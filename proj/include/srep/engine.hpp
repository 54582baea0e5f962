#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "srep/core.hpp"
#include "srep/dense.hpp"
#include "srep/error.hpp"
#include "srep/reconcile.hpp"
#include "srep/topology.hpp"

namespace srep {

/// e_srep: nodes take turns in ascending id order and sync their edges
///   one after another on live pools.
/// ep_srep / srep: every edge syncs at once against a snapshot taken at the
///   start of the iteration; deliveries merge at the end. srep is the same
///   procedure over multi-element pools.
enum class SrepMode { e_srep, ep_srep, srep };

inline std::string to_string(SrepMode m) {
  switch (m) {
    case SrepMode::e_srep: return "e_srep";
    case SrepMode::ep_srep: return "ep_srep";
    case SrepMode::srep: return "srep";
  }
  return "?";
}

/// Run until at least `fraction` of the nodes hold the global union.
struct StopCondition {
  double fraction = 1.0;

  static StopCondition full() { return {1.0}; }
  static StopCondition at(double x) {
    if (!(x > 0.0 && x <= 1.0)) throw ParameterError("stop fraction must lie in (0, 1]");
    return {x};
  }
  bool is_full() const { return fraction >= 1.0; }
};

struct IterationTrace {
  std::uint64_t f_total_before = 0;
  std::vector<std::uint64_t> edge_costs;  // in sync order; empty if not kept
  std::uint64_t sum_edge_cost = 0;        // elements (oracle) or cells (iblt)
  std::uint64_t sum_edge_bytes = 0;
  std::uint64_t max_edge_cost = 0;
  std::uint64_t max_edge_diff = 0;  // largest two-way difference synced
  std::uint64_t iteration_time = 0;
  std::uint64_t redundant = 0;
  double sync_fraction_after = 0.0;
};

struct RunMetrics {
  std::uint64_t c_total_elements = 0;
  std::uint64_t c_total_bytes = 0;
  std::uint64_t t_total = 0;
  std::uint64_t i_max = 0;
  std::uint64_t sigma_syncs = 0;
  std::uint64_t redundant_transmissions = 0;
  double final_sync_fraction = 0.0;
  std::vector<IterationTrace> per_iteration;
};

struct RunOptions {
  StopCondition stop = StopCondition::full();
  /// Precomputed diameter of the graph, if the caller has one.
  std::optional<std::size_t> diameter;
  bool keep_edge_costs = true;
};

/// Total elapsed time: each iteration lasts as long as its slowest
/// primal sync, whose duration equals the difference it reconciles.
/// (For e_srep the iteration time is the sum, since syncs never overlap.)
inline std::uint64_t time_accounting(std::span<const IterationTrace> iterations) {
  std::uint64_t t = 0;
  for (const auto& it : iterations) t += it.iteration_time;
  return t;
}

/// Redundant copies received by one node in one iteration: for every element
/// delivered, copies beyond the first, plus every copy of an element the
/// node already held when the iteration started.
inline std::uint64_t redundancy_accounting(const Pool& start, std::span<const Pool> deliveries) {
  std::map<TxId, std::uint64_t> copies;
  for (const auto& d : deliveries)
    for (TxId x : d) ++copies[x];
  std::uint64_t r = 0;
  for (const auto& [x, c] : copies) r += start.contains(x) ? c : c - 1;
  return r;
}

namespace detail {

inline std::uint64_t sync_salt(std::uint64_t iteration, NodeId i, NodeId j) {
  return derive_seed(iteration, {i, j});
}

/// Bitset of `p` over the dense universe of `a`.
inline void pool_to_bits(const DenseAssignment& a, const Pool& p, std::span<Word> bits) {
  const auto& ids = a.universe();
  for (TxId x : p) {
    auto it = std::lower_bound(ids.begin(), ids.end(), x);
    if (it == ids.end() || *it != x) throw ModelError("delivered element outside universe");
    const auto k = static_cast<std::size_t>(it - ids.begin());
    bits[k / 64] |= Word{1} << (k % 64);
  }
}

/// One synchronous iteration (ep_srep / srep) against a frozen snapshot.
inline void parallel_iteration(const Topology& g, DenseAssignment& live,
                               const PrimalSyncBackend& backend, std::uint64_t iteration,
                               IterationTrace& tr, bool keep_edge_costs) {
  const DenseAssignment snap = live;
  const std::size_t n = g.node_count();
  std::vector<std::uint64_t> delivered(n, 0);
  const bool oracle = std::holds_alternative<OracleBackend>(backend);
  std::vector<Pool> snap_pools;
  if (!oracle) snap_pools = snap.to_pools();

  for (auto [i, j] : g.edges()) {
    auto si = snap.row(i);
    auto sj = snap.row(j);
    const std::uint64_t to_i = andnot_count(sj, si);
    const std::uint64_t to_j = andnot_count(si, sj);
    const std::uint64_t diff = to_i + to_j;
    std::uint64_t cost = diff, bytes = diff * kTxIdWireBytes;
    if (oracle) {
      auto li = live.row(i);
      auto lj = live.row(j);
      for (std::size_t k = 0; k < li.size(); ++k) {
        li[k] |= sj[k];
        lj[k] |= si[k];
      }
    } else {
      auto out = sync(backend, snap_pools[i], snap_pools[j], sync_salt(iteration, i, j));
      if (out.d_ba.size() != to_i || out.d_ab.size() != to_j)
        throw AssertionError("iblt delivered a difference of the wrong size");
      pool_to_bits(live, out.d_ba, live.row(i));
      pool_to_bits(live, out.d_ab, live.row(j));
      cost = out.cost_elements;
      bytes = out.cost_bytes;
    }
    delivered[i] += to_i;
    delivered[j] += to_j;
    if (keep_edge_costs) tr.edge_costs.push_back(cost);
    tr.sum_edge_cost += cost;
    tr.sum_edge_bytes += bytes;
    tr.max_edge_cost = std::max(tr.max_edge_cost, cost);
    tr.max_edge_diff = std::max(tr.max_edge_diff, diff);
  }
  // Deliveries are computed against the snapshot, so none duplicates an
  // element already held; every copy past the first is redundant.
  for (std::size_t v = 0; v < n; ++v) {
    const std::uint64_t gained = live.pool_size(v) - snap.pool_size(v);
    tr.redundant += delivered[v] - gained;
  }
  tr.iteration_time = tr.max_edge_diff;
}

/// One elementary iteration: node order ascending, each edge once, driven
/// by its lower endpoint, on live pools.
inline void sequential_iteration(const Topology& g, DenseAssignment& live,
                                 const PrimalSyncBackend& backend, std::uint64_t iteration,
                                 IterationTrace& tr, bool keep_edge_costs) {
  const bool oracle = std::holds_alternative<OracleBackend>(backend);
  for (NodeId u = 0; u < g.node_count(); ++u) {
    for (NodeId v : g.neighbors(u)) {
      if (v < u) continue;
      auto ru = live.row(u);
      auto rv = live.row(v);
      const std::uint64_t diff = xor_count(ru, rv);
      std::uint64_t cost = diff, bytes = diff * kTxIdWireBytes;
      if (oracle) {
        for (std::size_t k = 0; k < ru.size(); ++k) ru[k] = rv[k] = ru[k] | rv[k];
      } else {
        auto out = sync(backend, live.pool(u), live.pool(v), sync_salt(iteration, u, v));
        if (out.d_ba.size() + out.d_ab.size() != diff)
          throw AssertionError("iblt delivered a difference of the wrong size");
        pool_to_bits(live, out.d_ba, ru);
        pool_to_bits(live, out.d_ab, rv);
        cost = out.cost_elements;
        bytes = out.cost_bytes;
      }
      if (keep_edge_costs) tr.edge_costs.push_back(cost);
      tr.sum_edge_cost += cost;
      tr.sum_edge_bytes += bytes;
      tr.max_edge_cost = std::max(tr.max_edge_cost, cost);
      tr.max_edge_diff = std::max(tr.max_edge_diff, diff);
      tr.iteration_time += diff;
    }
  }
}

}  // namespace detail

/// Runs SREP on (g, a) until the stop condition holds.
///
/// The run is capped at diameter(g) iterations: every element advances at
/// least one hop per iteration, so exceeding the diameter means a bug and
/// raises AssertionError.
inline RunMetrics run(const Topology& g, DenseAssignment a, SrepMode mode,
                      const PrimalSyncBackend& backend, const RunOptions& opt = {}) {
  if (a.node_count() != g.node_count()) throw ModelError("assignment does not match graph");
  validate(backend);
  const std::size_t diam = opt.diameter ? *opt.diameter : diameter(g);
  const std::size_t n = g.node_count();
  const std::size_t target = popcount(union_row(a));
  auto fraction = [&] {
    std::size_t c = 0;
    for (std::size_t v = 0; v < n; ++v) c += a.pool_size(v) == target;
    return n == 0 ? 1.0 : static_cast<double>(c) / static_cast<double>(n);
  };

  RunMetrics m;
  double frac = fraction();
  std::uint64_t f = f_total(g, a);
  while (opt.stop.is_full() ? f > 0 : frac < opt.stop.fraction) {
    if (m.i_max >= diam)
      throw AssertionError("run exceeded diameter (" + std::to_string(diam) + ") iterations");
    IterationTrace tr;
    tr.f_total_before = f;
    if (mode == SrepMode::e_srep)
      detail::sequential_iteration(g, a, backend, m.i_max, tr, opt.keep_edge_costs);
    else
      detail::parallel_iteration(g, a, backend, m.i_max, tr, opt.keep_edge_costs);
    ++m.i_max;
    m.sigma_syncs += g.edge_count();
    m.c_total_elements += tr.sum_edge_cost;
    m.c_total_bytes += tr.sum_edge_bytes;
    m.redundant_transmissions += tr.redundant;
    const double next = fraction();
    if (next < frac) throw AssertionError("sync fraction decreased");
    frac = next;
    tr.sync_fraction_after = frac;
    f = f_total(g, a);
    m.per_iteration.push_back(std::move(tr));
  }
  m.t_total = time_accounting(m.per_iteration);
  m.final_sync_fraction = frac;
  if (m.sigma_syncs > m.i_max * g.edge_count()) throw AssertionError("sigma exceeds I*|E|");
  return m;
}

inline RunMetrics run(const Topology& g, const PoolAssignment& a, SrepMode mode,
                      const PrimalSyncBackend& backend, const RunOptions& opt = {}) {
  check_assignment(g, a);
  return run(g, DenseAssignment::from_pools(a), mode, backend, opt);
}

/// Per-iteration trace as CSV.
inline void write_trace_csv(std::ostream& os, const RunMetrics& m) {
  os << "iteration,f_total_before,sum_edge_cost,max_edge_cost,sync_fraction_after,redundant_cum\n";
  std::uint64_t cum = 0;
  for (std::size_t k = 0; k < m.per_iteration.size(); ++k) {
    const auto& it = m.per_iteration[k];
    cum += it.redundant;
    os << k + 1 << ',' << it.f_total_before << ',' << it.sum_edge_cost << ','
       << it.max_edge_cost << ',' << it.sync_fraction_after << ',' << cum << '\n';
  }
}

}  // namespace srep
