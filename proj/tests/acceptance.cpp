// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance [--only N[,N...]] [--expect-red N[,N...]]
//
// Criteria listed in --expect-red still print their real verdict; their
// failure just does not change the exit status.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "srep/analytic.hpp"
#include "srep/baseline.hpp"
#include "srep/engine.hpp"
#include "srep/iblt.hpp"
#include "srep/pools.hpp"
#include "srep/reconcile.hpp"
#include "srep/scenario.hpp"

#ifndef SREP_SCENARIO_DIR
#define SREP_SCENARIO_DIR "scenarios"
#endif

using namespace srep;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  std::function<Verdict()> body;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

// Plain queue BFS over adjacency lists; kept apart from the library's
// bit-parallel diameter so the two can be compared.
std::size_t bfs_diameter(const Topology& g) {
  const std::size_t n = g.node_count();
  std::size_t best = 0;
  std::vector<std::int64_t> dist(n);
  for (NodeId s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    std::queue<NodeId> q;
    dist[s] = 0;
    q.push(s);
    std::size_t seen = 1;
    while (!q.empty()) {
      auto u = q.front();
      q.pop();
      for (NodeId v : g.neighbors(u))
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          best = std::max(best, static_cast<std::size_t>(dist[v]));
          q.push(v);
          ++seen;
        }
    }
    if (seen != n) throw StructuralError("corpus graph is disconnected");
  }
  return best;
}

struct CorpusGraph {
  std::string label;
  Topology g;
  bool ws = false;
};

// 200 connected graphs with n <= 300: paths, cycles, random trees and
// small-world graphs across degree and rewiring probability.
const std::vector<CorpusGraph>& corpus() {
  static const std::vector<CorpusGraph> c = [] {
    std::vector<CorpusGraph> out;
    Rng r(20240601);
    for (int k = 0; k < 25; ++k) {
      const auto n = 3 + r.below(298);
      out.push_back({"path(" + std::to_string(n) + ")", path_graph(n), false});
    }
    for (int k = 0; k < 25; ++k) {
      const auto n = 3 + r.below(298);
      out.push_back({"cycle(" + std::to_string(n) + ")", cycle_graph(n), false});
    }
    for (int k = 0; k < 50; ++k) {
      const auto n = 3 + r.below(298);
      out.push_back({"tree(" + std::to_string(n) + ")", random_tree(n, r.next()), false});
    }
    const double ps[] = {0.0, 0.05, 0.1, 0.24, 0.5, 1.0};
    for (int k = 0; k < 100; ++k) {
      const std::size_t deg = 2 * (1 + r.below(6));
      const auto n = std::max<std::uint64_t>(deg + 2, 20 + r.below(281));
      const double p = ps[r.below(6)];
      out.push_back({"ws(" + std::to_string(n) + "," + std::to_string(deg) + "," + fmt("%g", p) + ")",
                     watts_strogatz(n, deg, deg == 2 ? std::min(p, 0.05) : p, r.next()), true});
    }
    return out;
  }();
  return c;
}

Scenario load(const std::string& name) {
  return load_scenario(std::filesystem::path(SREP_SCENARIO_DIR) / name);
}

std::vector<double> col(const CsvTable& t, const std::string& name) {
  std::size_t k = 0;
  while (k < t.columns.size() && t.columns[k].name != name) ++k;
  if (k == t.columns.size()) throw UsageError("missing column " + name);
  std::vector<double> out;
  for (const auto& row : t.rows) out.push_back(std::stod(row[k]));
  return out;
}

// ---------------------------------------------------------------------------

Verdict sequential_complete() {
  for (std::size_t n = 3; n <= 40; ++n) {
    auto m = run(complete_graph(n), unit_pools(n), SrepMode::e_srep, OracleBackend{});
    if (m.c_total_elements != n * (n - 1))
      return {false, "n=" + std::to_string(n) + " C=" + std::to_string(m.c_total_elements)};
  }
  return {true, "n = 3..40, C = n(n-1) exactly"};
}

Verdict parallel_complete() {
  for (std::size_t n = 3; n <= 40; ++n) {
    auto m = run(complete_graph(n), unit_pools(n), SrepMode::ep_srep, OracleBackend{});
    if (m.i_max != 1 || m.c_total_elements != n * (n - 1))
      return {false, "n=" + std::to_string(n) + " I=" + std::to_string(m.i_max) +
                         " C=" + std::to_string(m.c_total_elements)};
  }
  return {true, "n = 3..40, I = 1 and C = n(n-1) exactly"};
}

Verdict iterations_equal_diameter() {
  std::size_t checked = 0;
  for (const auto& cg : corpus()) {
    const auto d = bfs_diameter(cg.g);
    auto m = run(cg.g, unit_pools(cg.g.node_count()), SrepMode::ep_srep, OracleBackend{},
                 RunOptions{StopCondition::full(), std::nullopt, false});
    if (m.i_max != d)
      return {false, cg.label + ": I=" + std::to_string(m.i_max) + " diameter=" + std::to_string(d)};
    ++checked;
  }
  return {true, std::to_string(checked) + " graphs, I == BFS diameter on all"};
}

Verdict cost_bounds() {
  std::size_t ws = 0;
  for (const auto& cg : corpus()) {
    const std::uint64_t n = cg.g.node_count();
    auto m = run(cg.g, unit_pools(n), SrepMode::ep_srep, OracleBackend{},
                 RunOptions{StopCondition::full(), std::nullopt, false});
    const auto c = m.c_total_elements;
    if (c < n * (n - 1) || c >= n * (n * n - 1)) return {false, cg.label + ": C=" + std::to_string(c)};
    if (cg.ws) {
      ++ws;
      const std::uint64_t deg = 2 * cg.g.edge_count() / n;
      if (c >= n * (n * deg + n - 1)) return {false, cg.label + ": C=" + std::to_string(c) + " >= WS bound"};
    }
  }
  return {true, std::to_string(corpus().size()) + " graphs within [n(n-1), n(n^2-1)); " + std::to_string(ws) +
                    " small-world graphs below n(n*deg+n-1)"};
}

Verdict multi_element_iterations() {
  std::size_t runs = 0, above_one = 0, worst_gap = 1000;
  for (std::size_t deg : {4, 8, 12, 16, 20})
    for (std::uint64_t s = 0; s < 20; ++s) {
      const auto g = watts_strogatz(1000, deg, 0.24, derive_seed(55, {deg, s}));
      const auto diam = diameter(g);
      if (diam != bfs_diameter(g)) return {false, "diameter routines disagree"};
      for (double psi : {0.355, 0.5, 0.6})
        for (auto mode : {Sampling::without_replacement, Sampling::with_replacement}) {
          PoolGenParams p{psi, SizesDistribution::maxwell(), derive_seed(g.edge_count(), {s, double_key(psi)}), mode};
          // No diameter hint: the engine computes its own backstop.
          auto m = run(g, generate_dense_assignment(1000, p), SrepMode::srep, OracleBackend{},
                       RunOptions{StopCondition::full(), std::nullopt, false});
          ++runs;
          if (m.i_max > diam)
            return {false, "deg=" + std::to_string(deg) + " I=" + std::to_string(m.i_max) +
                               " > diameter " + std::to_string(diam)};
          above_one += m.i_max > 1;
          worst_gap = std::min<std::size_t>(worst_gap, diam - m.i_max);
        }
    }
  return {true, "100 graphs x 3 psi x 2 sampling modes = " + std::to_string(runs) + " runs, " +
                    std::to_string(above_one) + " needing > 1 iteration, smallest slack " +
                    std::to_string(worst_gap)};
}

Verdict analytic_engine_equivalence() {
  Rng r(77);
  for (int k = 0; k < 50; ++k) {
    const auto n = 20 + r.below(181);
    Topology g = k % 5 == 0 ? random_tree(n, r.next()) : watts_strogatz(n, 2 + 2 * r.below(5), 0.24, r.next());
    const double psi = 0.2 + r.uniform();
    const auto mode = k % 2 ? Sampling::with_replacement : Sampling::without_replacement;
    auto a = generate_dense_assignment(n, PoolGenParams{psi, SizesDistribution::maxwell(100.0), r.next(), mode});
    auto an = analytic_run(g, a);
    auto m = run(g, a, SrepMode::srep, OracleBackend{});
    if (an.c_total_elements != m.c_total_elements || an.i_total != m.i_max)
      return {false, "pair " + std::to_string(k) + ": analytic C=" + std::to_string(an.c_total_elements) +
                         " I=" + std::to_string(an.i_total) + ", engine C=" + std::to_string(m.c_total_elements) +
                         " I=" + std::to_string(m.i_max)};
  }
  return {true, "50 pairs, n <= 200, C and I identical"};
}

Verdict redundancy_shape() {
  auto sc = load("redundancy_sweep.ini");
  auto res = run_experiment(sc);
  const auto deg = col(res.summary, "deg");
  const auto red = col(res.summary, "redundant_mean");
  const auto peak = static_cast<std::size_t>(std::max_element(red.begin(), red.end()) - red.begin());
  std::ostringstream os;
  os << "deg " << deg.front() << ": " << red.front() << ", peak at deg " << deg[peak] << ": " << red[peak]
     << ", deg " << deg.back() << ": " << red.back();
  const bool ok = deg.back() == 99 && red.back() == 0.0 && peak != 0 && peak != red.size() - 1 &&
                  red[peak] > red.front();
  return {ok, os.str()};
}

Verdict iterations_vs_diameter_sweep() {
  auto sc = load("iter_vs_diameter.ini");
  auto res = run_experiment(sc);
  const auto deg = col(res.summary, "deg");
  const auto dm = col(res.summary, "diameter_mean"), dci = col(res.summary, "diameter_ci");
  const auto im = col(res.summary, "i100_mean"), ici = col(res.summary, "i100_ci");
  std::ostringstream os;
  bool ok = res.violations == 0;
  for (std::size_t k = 0; k < deg.size(); ++k) {
    if (im[k] > dm[k] || im[k] - ici[k] > dm[k] + dci[k]) {
      ok = false;
      os << "deg " << deg[k] << " violates; ";
    }
  }
  os << deg.size() << " degrees; at deg " << deg.front() << " I " << fmt("%.2f", im.front()) << " vs diameter "
     << fmt("%.2f", dm.front()) << ", at deg " << deg.back() << " I " << fmt("%.2f", im.back())
     << " vs diameter " << fmt("%.2f", dm.back());
  return {ok, os.str()};
}

// Reference averages for the 10,000-node table, GB; rows deg 4..28, columns
// psi 0.355, 0.5, 0.6.
constexpr double kReferenceGb[7][3] = {
    {1.214397, 3.165879, 4.801665},   {2.428649, 6.317304, 9.569259},   {3.642738, 9.485572, 14.347242},
    {4.876714, 12.649385, 19.135943}, {6.065679, 15.804836, 23.886079}, {7.294909, 18.966694, 28.672272},
    {8.465624, 22.156316, 33.446278}};

struct TableCheck {
  bool inc_deg = true, inc_psi = true, i_nonincreasing = true, in_window = true;
  double lo_ratio = 1e300, hi_ratio = 0;
  std::string cells_out;
};

TableCheck check_table(const ExperimentResult& res) {
  TableCheck t;
  const auto deg = col(res.summary, "deg"), psi = col(res.summary, "psi");
  const auto c = col(res.summary, "c_gb_mean"), it = col(res.summary, "i100_mean");
  auto at = [&](int di, int pi) { return static_cast<std::size_t>(di * 3 + pi); };
  for (int di = 0; di < 7; ++di)
    for (int pi = 0; pi < 3; ++pi) {
      const auto k = at(di, pi);
      if (deg[k] != 4 + 4 * di) throw UsageError("unexpected table layout");
      const double ratio = c[k] / kReferenceGb[di][pi];
      t.lo_ratio = std::min(t.lo_ratio, ratio);
      t.hi_ratio = std::max(t.hi_ratio, ratio);
      if (ratio < 0.1 || ratio > 10.0) {
        t.in_window = false;
        t.cells_out += " (" + fmt("%g", deg[k]) + "," + fmt("%g", psi[k]) + ")";
      }
      if (pi > 0 && !(c[k] > c[at(di, pi - 1)])) t.inc_psi = false;
      if (di > 0 && !(c[k] > c[at(di - 1, pi)])) t.inc_deg = false;
      if (di > 0 && it[k] > it[at(di - 1, pi)]) t.i_nonincreasing = false;
    }
  return t;
}

std::string describe_table(const TableCheck& t) {
  std::ostringstream os;
  os << "C up in deg " << (t.inc_deg ? "yes" : "NO") << ", C up in psi " << (t.inc_psi ? "yes" : "NO")
     << ", I non-increasing " << (t.i_nonincreasing ? "yes" : "NO") << ", C / reference in ["
     << fmt("%.3f", t.lo_ratio) << ", " << fmt("%.3f", t.hi_ratio) << "]";
  if (!t.in_window) os << ", outside x10 at" << t.cells_out;
  return os.str();
}

Verdict large_scale_trends() {
  auto sc = load("large_scale.ini");
  sc.seeds = {0, 1, 2, 3, 4};
  const auto t = check_table(run_experiment(sc));
  auto clamped = load("large_scale_clamped.ini");
  clamped.seeds = {0, 1, 2};
  const auto u = check_table(run_experiment(clamped));
  const bool ok = t.inc_deg && t.inc_psi && t.i_nonincreasing && t.in_window;
  return {ok, "with-replacement pools: " + describe_table(t) + ". [info] clamped pools: " + describe_table(u)};
}

Verdict mempoolsync_trend() {
  auto sc = load("mempoolsync_compare.ini");
  sc.seeds = {0, 1, 2};
  auto res = run_experiment(sc);
  const auto n = col(res.summary, "n"), y = col(res.summary, "y");
  const auto sn = col(res.summary, "srep_norm"), mn = col(res.summary, "mempoolsync_norm");
  const auto nmax = *std::max_element(n.begin(), n.end());
  bool slower = true;
  std::ostringstream os;
  for (std::size_t k = 0; k < n.size(); ++k)
    if (n[k] == nmax) {
      slower &= sn[k] < mn[k];
      os << "y=" << y[k] << ": SREP x" << fmt("%.2f", sn[k]) << " vs MempoolSync x" << fmt("%.2f", mn[k]) << "; ";
    }
  const auto frac = col(res.runs, "mempoolsync_final_fraction");
  const auto short_of_full = std::count_if(frac.begin(), frac.end(), [](double f) { return f < 1.0; });
  const double share = static_cast<double>(short_of_full) / static_cast<double>(frac.size());
  os << "growth from n=" << *std::min_element(n.begin(), n.end()) << " to " << nmax << "; MempoolSync short of full sync on "
     << short_of_full << "/" << frac.size() << " runs";
  return {slower && share >= 0.95, os.str()};
}

// Pairs with exactly d differing ids, split at random between the sides.
std::pair<Pool, Pool> iblt_pair(std::size_t d, std::uint64_t seed) {
  Rng r(seed);
  std::vector<TxId> a, b;
  for (int k = 0; k < 20; ++k) {
    TxId x{r.next()};
    a.push_back(x);
    b.push_back(x);
  }
  for (std::size_t k = 0; k < d; ++k) (r.below(2) ? a : b).push_back(TxId{r.next()});
  return {Pool(std::move(a)), Pool(std::move(b))};
}

struct IbltSweep {
  double worst = 1.0;
  std::size_t worst_d = 0;
  std::size_t wrong = 0;
  std::vector<std::pair<std::size_t, double>> below;
};

IbltSweep iblt_sweep(const std::function<std::size_t(std::size_t)>& cells, std::size_t hashes) {
  IbltSweep s;
  for (std::size_t d = 1; d <= 64; ++d) {
    const auto m = cells(d);
    const auto k = std::min(hashes, m);
    int ok = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
      auto [a, b] = iblt_pair(d, derive_seed(d, {seed}));
      const auto sk = derive_seed(seed, {d, 1});
      auto res = iblt_subtract_decode(iblt_encode(a, m, k, sk), iblt_encode(b, m, k, sk));
      if (!res.success) continue;
      ++ok;
      if (res.a_minus_b != set_difference(a, b) || res.b_minus_a != set_difference(b, a)) ++s.wrong;
    }
    const double rate = ok / 1000.0;
    if (rate < s.worst) {
      s.worst = rate;
      s.worst_d = d;
    }
    if (rate < 0.95) s.below.emplace_back(d, rate);
  }
  return s;
}

Verdict iblt_properties() {
  // Literal sizing: ceil(1.5 d) cells, 3 hashes (capped at the cell count).
  const auto lit = iblt_sweep([](std::size_t d) { return static_cast<std::size_t>(std::ceil(1.5 * d)); }, 3);
  // Backend sizing: ceil(1.5 d) + 16 cells, 4 hashes.
  const IbltBackend ib;
  const auto be = iblt_sweep([&](std::size_t d) { return iblt_cells_for(ib, d); }, ib.hash_count);

  bool zero_ok = true;
  for (std::uint64_t seed = 0; seed < 1000 && zero_ok; ++seed) {
    auto [a, b] = iblt_pair(0, seed);
    for (std::size_t m : {2UL, 3UL, 24UL}) {
      auto res = iblt_subtract_decode(iblt_encode(a, m, std::min<std::size_t>(3, m), seed),
                                      iblt_encode(b, m, std::min<std::size_t>(3, m), seed));
      zero_ok &= res.success && res.a_minus_b.empty() && res.b_minus_a.empty();
    }
  }

  std::ostringstream os;
  os << "cells = ceil(1.5 d): worst " << fmt("%.1f%%", 100 * lit.worst) << " at d=" << lit.worst_d << ", "
     << lit.below.size() << "/64 sizes under 95%";
  if (!lit.below.empty()) {
    os << " (";
    for (std::size_t k = 0; k < std::min<std::size_t>(4, lit.below.size()); ++k)
      os << (k ? ", " : "") << "d=" << lit.below[k].first << ": " << fmt("%.1f%%", 100 * lit.below[k].second);
    os << (lit.below.size() > 4 ? ", ..." : "") << ")";
  }
  os << "; wrong decodes " << lit.wrong + be.wrong << "; zero difference always empty: " << (zero_ok ? "yes" : "NO")
     << ". [info] backend sizing ceil(1.5 d)+16, 4 hashes: worst " << fmt("%.1f%%", 100 * be.worst) << " at d="
     << be.worst_d;
  return {lit.below.empty() && lit.wrong == 0 && be.wrong == 0 && zero_ok, os.str()};
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) h = (h ^ c) * 1099511628211ULL;
  return h;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Verdict determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "srep_acceptance_determinism";
  fs::remove_all(dir);
  // Every experiment kind, shrunk so the check stays quick.
  std::vector<std::pair<std::string, std::function<void(Scenario&)>>> cases = {
      {"k5_bounds.ini", [](Scenario&) {}},
      {"bounds_sweep.ini", [](Scenario& s) { s.seeds = {0, 1}; }},
      {"redundancy_sweep.ini", [](Scenario& s) { s.seeds = {0, 1}; s.deg = {4, 16, 99}; }},
      {"psi_calibration.ini", [](Scenario& s) { s.seeds = {0, 1}; s.psi = {0.3, 0.6}; }},
      {"iter_vs_diameter.ini", [](Scenario& s) { s.seeds = {0, 1}; s.n = {300}; s.deg = {4, 8}; }},
      {"comm_and_time.ini", [](Scenario& s) { s.seeds = {0, 1}; s.n = {300}; s.deg = {4, 8}; }},
      {"mempoolsync_compare.ini", [](Scenario& s) { s.seeds = {0, 1}; s.n = {200, 400}; }},
      {"large_scale.ini", [](Scenario& s) { s.seeds = {0, 1}; s.n = {500}; s.deg = {4, 8}; }},
  };
  std::size_t files = 0;
  for (const auto& [name, shrink] : cases) {
    auto sc = load(name);
    shrink(sc);
    std::uint64_t first[2] = {0, 0};
    for (int pass = 0; pass < 2; ++pass) {
      const auto out = dir / ("pass" + std::to_string(pass)) / (name + ".csv");
      auto res = run_experiment(sc);
      write_text(out, res.summary.str());
      write_text(runs_path(out), res.runs.str());
      const auto h1 = fnv1a(slurp(out)), h2 = fnv1a(slurp(runs_path(out)));
      if (pass == 0) {
        first[0] = h1;
        first[1] = h2;
      } else if (h1 != first[0] || h2 != first[1]) {
        return {false, name + ": CSV hash differs between runs"};
      }
    }
    files += 2;
  }
  fs::remove_all(dir);
  return {true, std::to_string(cases.size()) + " scenarios (all kinds), " + std::to_string(files) +
                    " CSV files hash-identical across re-runs"};
}

std::vector<int> int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> only, expect_red;
  for (int k = 1; k < argc; ++k) {
    const std::string a = argv[k];
    if (a == "--only" && k + 1 < argc) {
      only = int_list(argv[++k]);
    } else if (a == "--expect-red" && k + 1 < argc) {
      expect_red = int_list(argv[++k]);
    } else {
      std::cerr << "usage: acceptance [--only N,...] [--expect-red N,...]\n";
      return 2;
    }
  }

  const std::vector<Criterion> criteria = {
      {1, "sequential mode, complete graphs, unit pools: C = n(n-1)", sequential_complete},
      {2, "parallel mode, complete graphs, unit pools: I = 1, C = n(n-1)", parallel_complete},
      {3, "parallel mode, unit pools: I equals BFS diameter on 200 graphs", iterations_equal_diameter},
      {4, "unit-pool cost bounds on the same 200 graphs", cost_bounds},
      {5, "generated pools, 1000-node small-world graphs: I <= diameter", multi_element_iterations},
      {6, "analytic fixed point equals engine on 50 pairs", analytic_engine_equivalence},
      {7, "redundant transmissions over degree: interior peak, zero on the complete graph", redundancy_shape},
      {8, "iterations vs diameter sweep, 1000 nodes: I <= diameter with CIs", iterations_vs_diameter_sweep},
      {9, "10,000-node analytic table: trends and order of magnitude", large_scale_trends},
      {10, "SREP cost grows slower than MempoolSync; MempoolSync short of full sync", mempoolsync_trend},
      {11, "IBLT: >= 95% decode at 1.5 cells per difference, exact decodes, empty zero diff", iblt_properties},
      {12, "scenario re-runs are byte-identical", determinism},
  };

  int unexpected = 0, passed = 0, ran = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.body();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool known = std::find(expect_red.begin(), expect_red.end(), c.id) != expect_red.end();
    std::printf("%s  %02d  %s: %s (%.1f s)%s\n", v.pass ? "PASS" : "FAIL", c.id, c.title.c_str(), v.detail.c_str(),
                secs, !v.pass && known ? " [expected red]" : "");
    std::fflush(stdout);
    passed += v.pass;
    if (!v.pass && !known) ++unexpected;
  }
  std::printf("%d/%d criteria pass\n", passed, ran);
  return unexpected == 0 ? 0 : 1;
}
