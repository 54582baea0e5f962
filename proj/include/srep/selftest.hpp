#pragma once

// Invariant suite on small graphs, run by `srep selftest`.

#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "srep/analytic.hpp"
#include "srep/baseline.hpp"
#include "srep/engine.hpp"
#include "srep/pools.hpp"
#include "srep/scenario.hpp"

namespace srep {

struct SelftestCheck {
  std::string name;
  bool ok = false;
  std::string detail;
};

namespace detail {

inline std::vector<Topology> small_corpus() {
  std::vector<Topology> out;
  for (std::size_t n = 3; n <= 12; ++n) {
    out.push_back(path_graph(n));
    out.push_back(cycle_graph(n));
    out.push_back(star_graph(n));
  }
  for (std::uint64_t s = 0; s < 20; ++s) {
    out.push_back(random_tree(10 + s, s));
    out.push_back(watts_strogatz(20 + s, 2 + 2 * (s % 3), 0.3, s));
  }
  return out;
}

}  // namespace detail

inline std::vector<SelftestCheck> run_selftest() {
  std::vector<SelftestCheck> out;
  auto check = [&](std::string name, const std::function<std::string()>& body) {
    SelftestCheck c{std::move(name), false, {}};
    try {
      c.detail = body();
      c.ok = c.detail.empty();
    } catch (const std::exception& e) {
      c.detail = std::string("exception: ") + e.what();
    }
    out.push_back(std::move(c));
  };
  const auto oracle = PrimalSyncBackend{OracleBackend{}};

  check("sequential mode on complete graphs costs n(n-1)", [&]() -> std::string {
    for (std::size_t n = 3; n <= 15; ++n) {
      auto m = run(complete_graph(n), unit_pools(n), SrepMode::e_srep, oracle);
      if (m.c_total_elements != n * (n - 1)) return "n=" + std::to_string(n);
    }
    return {};
  });

  check("parallel mode on complete graphs: one iteration, n(n-1)", [&]() -> std::string {
    for (std::size_t n = 3; n <= 15; ++n) {
      auto m = run(complete_graph(n), unit_pools(n), SrepMode::ep_srep, oracle);
      if (m.i_max != 1 || m.c_total_elements != n * (n - 1)) return "n=" + std::to_string(n);
    }
    return {};
  });

  check("unit pools: iterations equal diameter, cost within bounds", [&]() -> std::string {
    for (const auto& g : detail::small_corpus()) {
      auto m = run(g, unit_pools(g.node_count()), SrepMode::ep_srep, oracle);
      auto b = ep_srep_bounds(g);
      if (m.i_max != b.i_equals_diameter || m.c_total_elements < b.lower_c ||
          m.c_total_elements >= b.upper_c || m.c_total_elements >= b.ws_upper_c)
        return "n=" + std::to_string(g.node_count()) + " |E|=" + std::to_string(g.edge_count());
    }
    return {};
  });

  check("cost equals first arrivals plus redundancy", [&]() -> std::string {
    for (std::uint64_t s = 0; s < 20; ++s) {
      auto g = watts_strogatz(40, 4, 0.24, s);
      auto a = generate_assignment(g, PoolGenParams{0.8, SizesDistribution::maxwell(30.0), s});
      auto m = run(g, a, SrepMode::srep, oracle);
      const Pool all = global_union(a);
      std::uint64_t missing = 0;
      for (const auto& p : a) missing += all.size() - p.size();
      if (m.c_total_elements != missing + m.redundant_transmissions) return "seed " + std::to_string(s);
    }
    return {};
  });

  check("generated pools: iterations at most diameter, sync fraction monotone", [&]() -> std::string {
    for (std::uint64_t s = 0; s < 20; ++s) {
      auto g = watts_strogatz(80, 4 + 2 * (s % 3), 0.24, s);
      for (auto mode : {Sampling::without_replacement, Sampling::with_replacement}) {
        auto a = generate_dense_assignment(80, PoolGenParams{0.5, SizesDistribution::maxwell(60.0), s, mode});
        auto m = run(g, a, SrepMode::srep, oracle);
        if (m.i_max > diameter(g)) return "seed " + std::to_string(s);
        double prev = 0;
        for (const auto& it : m.per_iteration) {
          if (it.sync_fraction_after < prev) return "fraction fell, seed " + std::to_string(s);
          prev = it.sync_fraction_after;
        }
      }
    }
    return {};
  });

  check("analytic fixed point matches the engine", [&]() -> std::string {
    for (std::uint64_t s = 0; s < 20; ++s) {
      auto g = watts_strogatz(60, 6, 0.24, s);
      auto a = generate_dense_assignment(60, PoolGenParams{0.6, SizesDistribution::maxwell(40.0), s});
      auto an = analytic_run(g, a);
      auto m = run(g, a, SrepMode::srep, oracle);
      if (an.c_total_elements != m.c_total_elements || an.i_total != m.i_max) return "seed " + std::to_string(s);
    }
    return {};
  });

  check("sketch backend reaches the same state as the oracle", [&]() -> std::string {
    for (std::uint64_t s = 0; s < 5; ++s) {
      auto g = watts_strogatz(20, 4, 0.24, s);
      auto a = generate_assignment(g, PoolGenParams{1.0, SizesDistribution::maxwell(30.0), s});
      auto x = run(g, a, SrepMode::srep, oracle);
      auto y = run(g, a, SrepMode::srep, IbltBackend{1.5, 4, s, 8, 16});
      if (x.i_max != y.i_max || x.redundant_transmissions != y.redundant_transmissions)
        return "seed " + std::to_string(s);
    }
    return {};
  });

  check("push baseline never lowers the sync fraction", [&]() -> std::string {
    auto g = watts_strogatz(40, 4, 0.24, 3);
    auto a = generate_dense_assignment(40, PoolGenParams{0.8, SizesDistribution::maxwell(50.0), 3});
    double prev = sync_fraction(a);
    for (std::int64_t r = 1; r <= 4; ++r) {
      auto res = run_mempoolsync(g, a, MempoolSyncParams{10, 0.5, 2.0}, r, 1);
      if (res.final_sync_fraction < prev) return "round " + std::to_string(r);
      prev = res.final_sync_fraction;
    }
    return {};
  });

  check("scenario output is deterministic", [&]() -> std::string {
    std::istringstream text(
        "[experiment]\nkind = comm_and_time\nseeds = 0..2\n"
        "[topology]\nn = 60\ndeg = 4, 8\n"
        "[pools]\nsizes = maxwell(40)\npsi = 0.5\n");
    auto sc = parse_scenario(text);
    auto a = run_experiment(sc);
    auto b = run_experiment(sc);
    if (a.summary.str() != b.summary.str() || a.runs.str() != b.runs.str()) return "outputs differ";
    return {};
  });

  check("trace CSV for the 4-cycle", [&]() -> std::string {
    std::ostringstream os;
    write_trace_csv(os, run(cycle_graph(4), unit_pools(4), SrepMode::ep_srep, oracle));
    const std::string want =
        "iteration,f_total_before,sum_edge_cost,max_edge_cost,sync_fraction_after,redundant_cum\n"
        "1,8,8,2,0,0\n2,8,8,2,1,4\n";
    return os.str() == want ? std::string{} : "got " + os.str();
  });
  return out;
}

}  // namespace srep
