#pragma once

// Scenario files and the experiment runners behind `srep run`.
//
// Format: `[section]` headers followed by `key = value` lines; `#` starts a
// comment. Numeric lists accept comma-separated items, each either a value
// or a range `a..b` with an optional `step s`.
//
//   [experiment]  kind, output, master_seed, seeds
//   [topology]    family, n, deg, p
//   [pools]       sizes, psi, sampling, target_mean_diff
//   [engine]      mode, backend, stop
//   [mempoolsync] def_tx_to_sync, y, large_pool_multiplier

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "srep/analytic.hpp"
#include "srep/baseline.hpp"
#include "srep/engine.hpp"
#include "srep/error.hpp"
#include "srep/pools.hpp"
#include "srep/reconcile.hpp"
#include "srep/rng.hpp"
#include "srep/stats.hpp"
#include "srep/topology.hpp"

namespace srep {

enum class ExperimentKind {
  validate_bounds,
  redundancy_sweep,
  psi_calibration,
  iter_vs_diameter,
  comm_and_time,
  mempoolsync_compare,
  large_scale,
};

inline const char* to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::validate_bounds: return "validate_bounds";
    case ExperimentKind::redundancy_sweep: return "redundancy_sweep";
    case ExperimentKind::psi_calibration: return "psi_calibration";
    case ExperimentKind::iter_vs_diameter: return "iter_vs_diameter";
    case ExperimentKind::comm_and_time: return "comm_and_time";
    case ExperimentKind::mempoolsync_compare: return "mempoolsync_compare";
    case ExperimentKind::large_scale: return "large_scale";
  }
  return "?";
}

enum class TopologyFamily { watts_strogatz, complete, path, cycle, star, tree };

inline const char* to_string(TopologyFamily f) {
  switch (f) {
    case TopologyFamily::watts_strogatz: return "watts_strogatz";
    case TopologyFamily::complete: return "complete";
    case TopologyFamily::path: return "path";
    case TopologyFamily::cycle: return "cycle";
    case TopologyFamily::star: return "star";
    case TopologyFamily::tree: return "tree";
  }
  return "?";
}

struct Scenario {
  ExperimentKind kind = ExperimentKind::validate_bounds;
  std::string output;
  std::uint64_t master_seed = 1;
  std::vector<std::uint64_t> seeds;

  TopologyFamily family = TopologyFamily::watts_strogatz;
  std::vector<std::uint64_t> n;
  std::vector<std::uint64_t> deg;
  double p = 0.24;

  bool unit_pools = false;
  std::optional<SizesDistribution> sizes;
  std::vector<double> psi;
  Sampling sampling = Sampling::without_replacement;
  std::optional<double> target_mean_diff;

  SrepMode mode = SrepMode::srep;
  PrimalSyncBackend backend = OracleBackend{};
  double stop = 1.0;

  MempoolSyncParams mempoolsync;
  std::vector<double> y{0.5};

  std::size_t degree_points() const { return family == TopologyFamily::watts_strogatz ? deg.size() : 1; }
  std::size_t psi_points() const { return unit_pools ? 1 : psi.size(); }
  std::size_t run_count() const { return n.size() * degree_points() * psi_points() * seeds.size(); }
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

inline double to_double(const std::string& s, int line) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ParseError("expected a number, got '" + s + "'", line);
  }
  if (pos != s.size() || !std::isfinite(v)) throw ParseError("expected a number, got '" + s + "'", line);
  return v;
}

inline std::uint64_t to_uint(const std::string& s, int line) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw ParseError("expected a non-negative integer, got '" + s + "'", line);
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw ParseError("integer out of range: '" + s + "'", line);
  }
}

// "a..b step s" -> {a, b, s}; plain values -> {a}.
inline std::vector<std::string> range_parts(const std::string& item, int line) {
  const auto dots = item.find("..");
  if (dots == std::string::npos) return {item};
  std::string lo = trim(item.substr(0, dots));
  std::string rest = trim(item.substr(dots + 2));
  std::string step = "1";
  if (auto k = rest.find("step"); k != std::string::npos) {
    step = trim(rest.substr(k + 4));
    rest = trim(rest.substr(0, k));
  }
  if (lo.empty() || rest.empty() || step.empty()) throw ParseError("malformed range '" + item + "'", line);
  return {lo, rest, step};
}

inline std::vector<std::uint64_t> uint_list(const std::string& value, int line) {
  std::vector<std::uint64_t> out;
  if (value.empty()) return out;
  for (const auto& item : split(value, ',')) {
    auto parts = range_parts(item, line);
    if (parts.size() == 1) {
      out.push_back(to_uint(parts[0], line));
      continue;
    }
    const auto lo = to_uint(parts[0], line), hi = to_uint(parts[1], line), st = to_uint(parts[2], line);
    if (st == 0) throw ParseError("range step must be positive", line);
    if (hi < lo) throw ParseError("empty range '" + item + "'", line);
    for (auto v = lo; v <= hi; v += st) out.push_back(v);
  }
  return out;
}

inline std::vector<double> double_list(const std::string& value, int line) {
  std::vector<double> out;
  if (value.empty()) return out;
  for (const auto& item : split(value, ',')) {
    auto parts = range_parts(item, line);
    if (parts.size() == 1) {
      out.push_back(to_double(parts[0], line));
      continue;
    }
    const double lo = to_double(parts[0], line), hi = to_double(parts[1], line),
                 st = to_double(parts[2], line);
    if (!(st > 0)) throw ParseError("range step must be positive", line);
    if (hi < lo) throw ParseError("empty range '" + item + "'", line);
    const auto count = static_cast<std::uint64_t>(std::floor((hi - lo) / st + 1e-9)) + 1;
    if (count > 1000000) throw ParseError("range too long", line);
    for (std::uint64_t k = 0; k < count; ++k) out.push_back(lo + static_cast<double>(k) * st);
  }
  return out;
}

// "name(a, b)" -> {"name", {"a", "b"}}; "name" -> {"name", {}}.
inline std::pair<std::string, std::vector<std::string>> call_form(const std::string& v, int line) {
  const auto open = v.find('(');
  if (open == std::string::npos) return {v, {}};
  if (v.back() != ')') throw ParseError("missing ')' in '" + v + "'", line);
  auto args = trim(v.substr(open + 1, v.size() - open - 2));
  return {trim(v.substr(0, open)), args.empty() ? std::vector<std::string>{} : split(args, ',')};
}

struct Entry {
  std::string value;
  int line = 0;
};

using Sections = std::map<std::string, std::map<std::string, Entry>>;

inline const std::map<std::string, std::vector<std::string>>& known_keys() {
  static const std::map<std::string, std::vector<std::string>> k{
      {"experiment", {"kind", "output", "master_seed", "seeds"}},
      {"topology", {"family", "n", "deg", "p"}},
      {"pools", {"sizes", "psi", "sampling", "target_mean_diff"}},
      {"engine", {"mode", "backend", "stop"}},
      {"mempoolsync", {"def_tx_to_sync", "y", "large_pool_multiplier"}},
  };
  return k;
}

inline Sections read_sections(std::istream& in) {
  Sections out;
  std::string raw, section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    const auto text = trim(raw);
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') throw ParseError("malformed section header", line);
      section = trim(text.substr(1, text.size() - 2));
      if (!known_keys().count(section)) throw ParseError("unknown section [" + section + "]", line);
      out[section];
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", line);
    if (section.empty()) throw ParseError("key outside of any section", line);
    const auto key = trim(text.substr(0, eq));
    const auto& allowed = known_keys().at(section);
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ParseError("unknown key '" + key + "' in [" + section + "]", line);
    if (out[section].count(key)) throw ParseError("duplicate key '" + key + "'", line);
    out[section][key] = Entry{trim(text.substr(eq + 1)), line};
  }
  return out;
}

}  // namespace detail

/// Parses and validates a scenario. Relative sizes-file paths resolve
/// against `base_dir`.
inline Scenario parse_scenario(std::istream& in, const std::filesystem::path& base_dir = {}) {
  using namespace detail;
  const Sections sec = read_sections(in);
  auto get = [&](const std::string& s, const std::string& k) -> const Entry* {
    auto it = sec.find(s);
    if (it == sec.end()) return nullptr;
    auto jt = it->second.find(k);
    return jt == it->second.end() ? nullptr : &jt->second;
  };

  Scenario sc;
  const Entry* kind = get("experiment", "kind");
  if (!kind) throw ParseError("missing [experiment] kind", 0);
  {
    bool found = false;
    for (auto k : {ExperimentKind::validate_bounds, ExperimentKind::redundancy_sweep,
                   ExperimentKind::psi_calibration, ExperimentKind::iter_vs_diameter,
                   ExperimentKind::comm_and_time, ExperimentKind::mempoolsync_compare,
                   ExperimentKind::large_scale}) {
      if (kind->value == to_string(k)) {
        sc.kind = k;
        found = true;
      }
    }
    if (!found) throw ParseError("unknown experiment kind '" + kind->value + "'", kind->line);
  }
  if (auto e = get("experiment", "output")) sc.output = e->value;
  if (auto e = get("experiment", "master_seed")) sc.master_seed = to_uint(e->value, e->line);
  if (auto e = get("experiment", "seeds"))
    sc.seeds = uint_list(e->value, e->line);
  else
    sc.seeds = uint_list("0..9", 0);

  if (auto e = get("topology", "family")) {
    bool found = false;
    for (auto f : {TopologyFamily::watts_strogatz, TopologyFamily::complete, TopologyFamily::path,
                   TopologyFamily::cycle, TopologyFamily::star, TopologyFamily::tree}) {
      if (e->value == to_string(f)) {
        sc.family = f;
        found = true;
      }
    }
    if (!found) throw ParseError("unknown topology family '" + e->value + "'", e->line);
  }
  if (auto e = get("topology", "n")) sc.n = uint_list(e->value, e->line);
  if (auto e = get("topology", "deg")) sc.deg = uint_list(e->value, e->line);
  if (auto e = get("topology", "p")) sc.p = to_double(e->value, e->line);

  if (auto e = get("pools", "sizes")) {
    auto [name, args] = call_form(e->value, e->line);
    if (name == "unit" && args.empty()) {
      sc.unit_pools = true;
    } else if (name == "constant" && args.size() == 1) {
      sc.sizes = SizesDistribution::constant(to_uint(args[0], e->line));
    } else if (name == "maxwell" && args.size() <= 1) {
      sc.sizes = SizesDistribution::maxwell(args.empty() ? kDefaultMaxwellScale : to_double(args[0], e->line));
    } else if (name == "empirical" && args.size() == 1) {
      std::filesystem::path path(args[0]);
      if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
      sc.sizes = SizesDistribution::from_file(path.string());
    } else {
      throw ParseError("sizes must be unit, constant(k), maxwell[(scale)] or empirical(path)", e->line);
    }
  } else {
    sc.unit_pools = true;
  }
  if (auto e = get("pools", "psi")) sc.psi = double_list(e->value, e->line);
  if (auto e = get("pools", "sampling")) {
    if (e->value == "without_replacement")
      sc.sampling = Sampling::without_replacement;
    else if (e->value == "with_replacement")
      sc.sampling = Sampling::with_replacement;
    else
      throw ParseError("sampling must be without_replacement or with_replacement", e->line);
  }
  if (auto e = get("pools", "target_mean_diff")) sc.target_mean_diff = to_double(e->value, e->line);

  if (auto e = get("engine", "mode")) {
    if (e->value == "e_srep")
      sc.mode = SrepMode::e_srep;
    else if (e->value == "ep_srep")
      sc.mode = SrepMode::ep_srep;
    else if (e->value == "srep")
      sc.mode = SrepMode::srep;
    else
      throw ParseError("mode must be e_srep, ep_srep or srep", e->line);
  }
  if (auto e = get("engine", "backend")) {
    auto [name, args] = call_form(e->value, e->line);
    if (name == "oracle" && args.empty()) {
      sc.backend = OracleBackend{};
    } else if (name == "iblt" && args.size() <= 3) {
      IbltBackend ib;
      if (args.size() > 0) ib.cells_per_diff = to_double(args[0], e->line);
      if (args.size() > 1) ib.hash_count = to_uint(args[1], e->line);
      if (args.size() > 2) ib.extra_cells = to_uint(args[2], e->line);
      sc.backend = ib;
    } else {
      throw ParseError("backend must be oracle or iblt[(cells_per_diff[, hash_count[, extra_cells]])]",
                       e->line);
    }
  }
  if (auto e = get("engine", "stop")) sc.stop = to_double(e->value, e->line);

  if (auto e = get("mempoolsync", "def_tx_to_sync"))
    sc.mempoolsync.def_tx_to_sync = to_uint(e->value, e->line);
  if (auto e = get("mempoolsync", "large_pool_multiplier"))
    sc.mempoolsync.large_pool_multiplier = to_double(e->value, e->line);
  if (auto e = get("mempoolsync", "y")) sc.y = double_list(e->value, e->line);
  return sc;
}

/// Semantic checks; throws ParameterError naming the offending field.
inline void validate(const Scenario& sc) {
  if (sc.seeds.empty()) throw ParameterError("seeds list is empty");
  if (sc.n.empty()) throw ParameterError("topology n is empty");
  for (auto n : sc.n)
    if (n < 3) throw ParameterError("topology n must be >= 3");
  if (sc.family == TopologyFamily::watts_strogatz) {
    if (sc.deg.empty()) throw ParameterError("topology deg is empty");
    for (auto n : sc.n)
      for (auto d : sc.deg) {
        if (d == n - 1) continue;  // complete graph
        if (d == 0 || d % 2 != 0 || d >= n)
          throw ParameterError("deg " + std::to_string(d) + " invalid for n " + std::to_string(n) +
                               " (even, < n, or n-1 for the complete graph)");
      }
    if (!(sc.p >= 0.0 && sc.p <= 1.0)) throw ParameterError("topology p must lie in [0, 1]");
  }
  if (!sc.unit_pools) {
    if (!sc.sizes) throw ParameterError("pools sizes missing");
    if (sc.psi.empty()) throw ParameterError("pools psi is empty");
    for (double x : sc.psi) universe_size(x, sc.sizes->mean());
  }
  if (sc.kind == ExperimentKind::psi_calibration && sc.unit_pools)
    throw ParameterError("psi_calibration needs a sizes distribution");
  if (sc.target_mean_diff && !(*sc.target_mean_diff >= 0))
    throw ParameterError("target_mean_diff must be non-negative");
  validate(sc.backend);
  StopCondition::at(sc.stop);
  if (sc.kind == ExperimentKind::mempoolsync_compare) {
    sc.mempoolsync.validate();
    if (sc.y.empty()) throw ParameterError("mempoolsync y is empty");
    for (double y : sc.y) MempoolSyncParams{sc.mempoolsync.def_tx_to_sync, y, sc.mempoolsync.large_pool_multiplier}.validate();
  }
  if (sc.kind == ExperimentKind::large_scale && sc.unit_pools == false && sc.stop < 1.0)
    throw ParameterError("large_scale runs to full sync; stop must be 1");
}

inline Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario '" + path.string() + "'");
  auto sc = parse_scenario(in, path.parent_path());
  validate(sc);
  return sc;
}

// ---------------------------------------------------------------------------
// Seeds. Every key names a grid coordinate rather than a position in the
// sweep, so adding sweep points leaves existing rows unchanged.

inline std::uint64_t double_key(double x) { return std::bit_cast<std::uint64_t>(x); }

inline std::uint64_t topology_seed(const Scenario& sc, std::uint64_t n, std::uint64_t deg,
                                   std::uint64_t seed) {
  return derive_seed(sc.master_seed, {n, deg, seed});
}

inline std::uint64_t pool_seed(std::uint64_t topo_seed, double psi) {
  return derive_seed(topo_seed, {double_key(psi)});
}

inline std::uint64_t score_seed(std::uint64_t pools, double y) {
  return derive_seed(pools, {double_key(y), 0x4d53ULL});
}

inline Topology build_topology(const Scenario& sc, std::uint64_t n, std::uint64_t deg,
                               std::uint64_t seed) {
  switch (sc.family) {
    case TopologyFamily::complete: return complete_graph(n);
    case TopologyFamily::path: return path_graph(n);
    case TopologyFamily::cycle: return cycle_graph(n);
    case TopologyFamily::star: return star_graph(n);
    case TopologyFamily::tree: return random_tree(n, seed);
    case TopologyFamily::watts_strogatz:
      if (deg == n - 1) return complete_graph(n);
      return watts_strogatz(n, deg, sc.p, seed);
  }
  throw UsageError("unknown topology family");
}

inline DenseAssignment build_pools(const Scenario& sc, std::uint64_t n, double psi, std::uint64_t seed) {
  if (sc.unit_pools) return DenseAssignment::from_pools(unit_pools(n));
  return generate_dense_assignment(n, PoolGenParams{psi, *sc.sizes, seed, sc.sampling});
}

// ---------------------------------------------------------------------------
// CSV tables.

struct Column {
  std::string name;
  std::string doc;
};

struct CsvTable {
  std::vector<std::string> notes;
  std::vector<Column> columns;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) {
    if (row.size() != columns.size()) throw UsageError("csv row width mismatch");
    rows.push_back(std::move(row));
  }

  std::string str() const {
    std::ostringstream os;
    for (const auto& n : notes) os << "# " << n << '\n';
    for (const auto& c : columns) os << "# " << c.name << ": " << c.doc << '\n';
    for (std::size_t k = 0; k < columns.size(); ++k) os << (k ? "," : "") << columns[k].name;
    os << '\n';
    for (const auto& r : rows) {
      for (std::size_t k = 0; k < r.size(); ++k) os << (k ? "," : "") << r[k];
      os << '\n';
    }
    return os.str();
  }
};

inline std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

inline std::string num(std::uint64_t x) { return std::to_string(x); }
inline std::string num(int x) { return std::to_string(x); }
inline std::string num(std::int64_t x) { return std::to_string(x); }

struct ExperimentResult {
  CsvTable summary;
  CsvTable runs;
  std::vector<std::string> messages;  // printed by the CLI
  std::size_t violations = 0;
};

/// Path of the per-run table next to `summary_path`.
inline std::filesystem::path runs_path(const std::filesystem::path& summary_path) {
  auto p = summary_path;
  p.replace_extension();
  p += ".runs.csv";
  return p;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory '" + path.parent_path().string() + "'");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

// ---------------------------------------------------------------------------
// Runners.

namespace detail {

struct Sample {
  std::vector<double> xs;
  void add(double x) { xs.push_back(x); }
  double mean() const { return stats::mean(xs); }
  double ci() const { return stats::ci95(xs); }
};

inline std::vector<double> psi_axis(const Scenario& sc) {
  return sc.unit_pools ? std::vector<double>{0.0} : sc.psi;
}

inline std::vector<std::uint64_t> deg_axis(const Scenario& sc) {
  return sc.family == TopologyFamily::watts_strogatz ? sc.deg : std::vector<std::uint64_t>{0};
}

inline std::string psi_cell(const Scenario& sc, double psi) { return sc.unit_pools ? "unit" : num(psi); }

// Reported degree: the WS parameter, or the realized mean degree otherwise.
inline std::string deg_cell(const Scenario& sc, std::uint64_t deg, const Topology& g) {
  if (sc.family == TopologyFamily::watts_strogatz) return num(deg);
  return num(mean_degree(g));
}

inline std::vector<std::string> base_notes(const Scenario& sc) {
  std::vector<std::string> out{
      std::string("experiment: ") + to_string(sc.kind),
      "master_seed: " + num(sc.master_seed) + "; seeds per grid point: " + num(sc.seeds.size()),
      std::string("topology: ") + to_string(sc.family) +
          (sc.family == TopologyFamily::watts_strogatz ? " p=" + num(sc.p) : ""),
      "pools: " + (sc.unit_pools ? std::string("unit") : sc.sizes->describe() + " sampling=" + to_string(sc.sampling)),
  };
  return out;
}

inline RunMetrics engine_run(const Scenario& sc, const Topology& g, DenseAssignment a, std::size_t diam) {
  RunOptions opt;
  opt.stop = StopCondition::at(sc.stop);
  opt.diameter = diam;
  opt.keep_edge_costs = false;
  return run(g, std::move(a), sc.mode, sc.backend, opt);
}

// Visits every (n, deg, psi) grid point with its seed loop, in file order.
template <class F>
void for_grid(const Scenario& sc, F&& f) {
  for (auto n : sc.n)
    for (auto deg : deg_axis(sc))
      for (double psi : psi_axis(sc)) f(n, deg, psi);
}

}  // namespace detail

inline ExperimentResult run_validate_bounds(const Scenario& sc) {
  using namespace detail;
  ExperimentResult res;
  res.summary.notes = base_notes(sc);
  res.summary.notes.push_back("mode: " + to_string(sc.mode) + "; backend: " + describe(sc.backend));
  res.summary.columns = {{"n", "node count"},
                         {"deg", "mean degree"},
                         {"psi", "universe scaling (unit = one element per node)"},
                         {"runs", "runs at this grid point"},
                         {"violations", "runs breaking a bound"},
                         {"diameter_mean", "mean BFS diameter"},
                         {"i100_mean", "mean iterations to full sync"},
                         {"c_mean", "mean communication (elements or cells)"},
                         {"master_seed", "scenario master seed"}};
  res.runs.notes = res.summary.notes;
  res.runs.columns = {{"n", "node count"},
                      {"deg", "mean degree"},
                      {"psi", "universe scaling"},
                      {"seed", "seed index"},
                      {"topology_seed", "derived topology seed"},
                      {"diameter", "BFS diameter"},
                      {"i100", "iterations"},
                      {"c_elements", "communication"},
                      {"lower_c", "n(n-1)"},
                      {"upper_c", "n(n^2-1), strict"},
                      {"ws_upper_c", "n(2|E|+n-1), strict"},
                      {"redundant", "redundant transmissions"},
                      {"ok", "1 if every applicable bound holds"}};

  const bool exact = std::holds_alternative<OracleBackend>(sc.backend) && sc.stop >= 1.0;
  for_grid(sc, [&](std::uint64_t n, std::uint64_t deg, double psi) {
    Sample diam_s, i_s, c_s;
    std::size_t bad = 0;
    std::string deg_text;
    for (auto seed : sc.seeds) {
      const auto ts = topology_seed(sc, n, deg, seed);
      const auto g = build_topology(sc, n, deg, ts);
      deg_text = deg_cell(sc, deg, g);
      const auto diam = diameter(g);
      auto a = build_pools(sc, n, psi, pool_seed(ts, psi));
      const auto m = engine_run(sc, g, a, diam);
      const auto b = ep_srep_bounds(g);
      const bool complete = g.edge_count() == n * (n - 1) / 2;
      std::vector<std::string> why;
      if (m.i_max > diam) why.push_back("I > diameter");
      if (sc.unit_pools && exact) {
        if (sc.mode != SrepMode::e_srep) {
          if (m.i_max != diam) why.push_back("I != diameter");
          if (m.c_total_elements < b.lower_c) why.push_back("C < n(n-1)");
          if (m.c_total_elements >= b.upper_c) why.push_back("C >= n(n^2-1)");
          if (sc.family == TopologyFamily::watts_strogatz && m.c_total_elements >= b.ws_upper_c)
            why.push_back("C >= n(n*deg+n-1)");
          if (complete && m.c_total_elements != n * (n - 1)) why.push_back("complete graph C != n(n-1)");
        } else if (complete && m.c_total_elements != n * (n - 1)) {
          why.push_back("sequential complete graph C != n(n-1)");
        }
      }
      if (exact && sc.mode != SrepMode::e_srep) {
        AnalyticOptions ao;
        ao.diameter = diam;
        const auto an = analytic_run(g, std::move(a), ao);
        if (an.c_total_elements != m.c_total_elements || an.i_total != m.i_max)
          why.push_back("analytic and engine disagree");
      }
      if (!why.empty()) {
        ++bad;
        std::string msg = "violation n=" + num(n) + " deg=" + deg_text + " psi=" + psi_cell(sc, psi) +
                          " seed=" + num(seed) + ":";
        for (const auto& w : why) msg += " " + w + ";";
        res.messages.push_back(msg);
      }
      res.runs.add({num(n), deg_text, psi_cell(sc, psi), num(seed), num(ts), num(diam), num(m.i_max),
                    num(m.c_total_elements), num(b.lower_c), num(b.upper_c), num(b.ws_upper_c),
                    num(m.redundant_transmissions), why.empty() ? "1" : "0"});
      diam_s.add(static_cast<double>(diam));
      i_s.add(static_cast<double>(m.i_max));
      c_s.add(static_cast<double>(m.c_total_elements));
    }
    res.violations += bad;
    res.summary.add({num(n), deg_text, psi_cell(sc, psi), num(sc.seeds.size()), num(bad),
                     num(diam_s.mean()), num(i_s.mean()), num(c_s.mean()), num(sc.master_seed)});
  });
  return res;
}

inline ExperimentResult run_redundancy_sweep(const Scenario& sc) {
  using namespace detail;
  ExperimentResult res;
  res.summary.notes = base_notes(sc);
  res.summary.notes.push_back("mode: " + to_string(sc.mode) + "; backend: " + describe(sc.backend));
  res.summary.columns = {{"n", "node count"},
                         {"deg", "mean degree (n-1 = complete graph)"},
                         {"psi", "universe scaling"},
                         {"redundant_mean", "mean redundant transmissions until full sync"},
                         {"redundant_ci", "95% CI half-width"},
                         {"c_mean", "mean communication"},
                         {"c_ci", "95% CI half-width"},
                         {"i100_mean", "mean iterations"},
                         {"diameter_mean", "mean diameter"},
                         {"runs", "seeds averaged"},
                         {"master_seed", "scenario master seed"}};
  res.runs.notes = res.summary.notes;
  res.runs.columns = {{"n", "node count"},     {"deg", "mean degree"},   {"psi", "universe scaling"},
                      {"seed", "seed index"},  {"diameter", "diameter"}, {"i100", "iterations"},
                      {"c", "communication"},  {"redundant", "redundant transmissions"}};
  for_grid(sc, [&](std::uint64_t n, std::uint64_t deg, double psi) {
    Sample red, c, it, dm;
    std::string deg_text;
    for (auto seed : sc.seeds) {
      const auto ts = topology_seed(sc, n, deg, seed);
      const auto g = build_topology(sc, n, deg, ts);
      deg_text = deg_cell(sc, deg, g);
      const auto diam = diameter(g);
      const auto m = engine_run(sc, g, build_pools(sc, n, psi, pool_seed(ts, psi)), diam);
      red.add(static_cast<double>(m.redundant_transmissions));
      c.add(static_cast<double>(m.c_total_elements));
      it.add(static_cast<double>(m.i_max));
      dm.add(static_cast<double>(diam));
      res.runs.add({num(n), deg_text, psi_cell(sc, psi), num(seed), num(diam), num(m.i_max),
                    num(m.c_total_elements), num(m.redundant_transmissions)});
    }
    res.summary.add({num(n), deg_text, psi_cell(sc, psi), num(red.mean()), num(red.ci()), num(c.mean()),
                     num(c.ci()), num(it.mean()), num(dm.mean()), num(sc.seeds.size()), num(sc.master_seed)});
  });
  return res;
}

inline ExperimentResult run_psi_calibration(const Scenario& sc) {
  using namespace detail;
  ExperimentResult res;
  res.summary.notes = base_notes(sc);
  res.summary.columns = {{"n", "node count"},
                         {"deg", "mean degree"},
                         {"psi", "universe scaling"},
                         {"universe", "u = ceil(psi * E[size])"},
                         {"diff_mean", "mean edge symmetric difference, averaged over seeds"},
                         {"diff_ci", "95% CI half-width over seeds"},
                         {"diff_median", "median over seeds of the per-assignment median"},
                         {"diff_q1", "mean over seeds of the first quartile"},
                         {"diff_q3", "mean over seeds of the third quartile"},
                         {"runs", "seeds averaged"},
                         {"master_seed", "scenario master seed"}};
  res.runs.notes = res.summary.notes;
  res.runs.columns = {{"n", "node count"},       {"deg", "mean degree"},       {"psi", "universe scaling"},
                      {"seed", "seed index"},    {"pool_seed", "derived seed"}, {"diff_mean", "mean"},
                      {"diff_median", "median"}, {"diff_q1", "first quartile"}, {"diff_q3", "third quartile"}};
  for_grid(sc, [&](std::uint64_t n, std::uint64_t deg, double psi) {
    Sample mean, med, q1, q3;
    std::string deg_text;
    for (auto seed : sc.seeds) {
      const auto ts = topology_seed(sc, n, deg, seed);
      const auto g = build_topology(sc, n, deg, ts);
      deg_text = deg_cell(sc, deg, g);
      const auto ps = pool_seed(ts, psi);
      const auto s = empirical_diff_distribution(g, build_pools(sc, n, psi, ps)).summary();
      mean.add(s.mean);
      med.add(s.median);
      q1.add(s.q1);
      q3.add(s.q3);
      res.runs.add({num(n), deg_text, num(psi), num(seed), num(ps), num(s.mean), num(s.median), num(s.q1),
                    num(s.q3)});
    }
    res.summary.add({num(n), deg_text, num(psi), num(universe_size(psi, sc.sizes->mean())), num(mean.mean()),
                     num(mean.ci()), num(stats::quantile(med.xs, 0.5)), num(q1.mean()), num(q3.mean()),
                     num(sc.seeds.size()), num(sc.master_seed)});
  });
  if (sc.target_mean_diff) {
    for (auto n : sc.n)
      for (auto deg : deg_axis(sc)) {
        const auto ts = topology_seed(sc, n, deg, sc.seeds.front());
        const auto g = build_topology(sc, n, deg, ts);
        CalibrationOptions opt;
        opt.sampling = sc.sampling;
        const auto cal = calibrate_psi(g, *sc.sizes, *sc.target_mean_diff, derive_seed(ts, {0xca1ULL}), opt);
        const auto line = "calibrated psi for target " + num(*sc.target_mean_diff) + " (n=" + num(n) +
                          ", deg=" + deg_cell(sc, deg, g) + "): " + num(cal.psi) + " -> mean diff " +
                          num(cal.mean_diff) + " after " + num(cal.probes) + " probes";
        res.summary.notes.push_back(line);
        res.messages.push_back(line);
      }
  }
  return res;
}

inline ExperimentResult run_iter_vs_diameter(const Scenario& sc) {
  using namespace detail;
  ExperimentResult res;
  res.summary.notes = base_notes(sc);
  res.summary.notes.push_back("mode: " + to_string(sc.mode) + "; backend: " + describe(sc.backend));
  res.summary.columns = {{"deg", "mean degree"},
                         {"diameter_mean", "mean BFS diameter"},
                         {"diameter_ci", "95% CI half-width"},
                         {"i100_mean", "mean iterations to full sync"},
                         {"i100_ci", "95% CI half-width"},
                         {"n", "node count"},
                         {"psi", "universe scaling"},
                         {"runs", "seeds averaged"},
                         {"violations", "runs with iterations > diameter"},
                         {"master_seed", "scenario master seed"}};
  res.runs.notes = res.summary.notes;
  res.runs.columns = {{"n", "node count"},        {"deg", "mean degree"},   {"psi", "universe scaling"},
                      {"seed", "seed index"},     {"diameter", "diameter"}, {"i100", "iterations"},
                      {"c", "communication"}};
  for_grid(sc, [&](std::uint64_t n, std::uint64_t deg, double psi) {
    Sample dm, it;
    std::size_t bad = 0;
    std::string deg_text;
    for (auto seed : sc.seeds) {
      const auto ts = topology_seed(sc, n, deg, seed);
      const auto g = build_topology(sc, n, deg, ts);
      deg_text = deg_cell(sc, deg, g);
      const auto diam = diameter(g);
      const auto m = engine_run(sc, g, build_pools(sc, n, psi, pool_seed(ts, psi)), diam);
      bad += m.i_max > diam;
      dm.add(static_cast<double>(diam));
      it.add(static_cast<double>(m.i_max));
      res.runs.add({num(n), deg_text, psi_cell(sc, psi), num(seed), num(diam), num(m.i_max),
                    num(m.c_total_elements)});
    }
    res.violations += bad;
    res.summary.add({deg_text, num(dm.mean()), num(dm.ci()), num(it.mean()), num(it.ci()), num(n),
                     psi_cell(sc, psi), num(sc.seeds.size()), num(bad), num(sc.master_seed)});
  });
  return res;
}

inline ExperimentResult run_comm_and_time(const Scenario& sc) {
  using namespace detail;
  ExperimentResult res;
  res.summary.notes = base_notes(sc);
  res.summary.notes.push_back("mode: " + to_string(sc.mode) + "; backend: " + describe(sc.backend));
  res.summary.notes.push_back("c_rel and t_rel divide by the value at the smallest deg of the same (n, psi)");
  res.summary.columns = {{"n", "node count"},
                         {"deg", "mean degree"},
                         {"psi", "universe scaling"},
                         {"c_mean", "mean communication until full sync"},
                         {"c_ci", "95% CI half-width"},
                         {"t_mean", "mean time (sum of per-iteration largest difference)"},
                         {"t_ci", "95% CI half-width"},
                         {"c_rel", "c_mean relative to the smallest deg"},
                         {"t_rel", "t_mean relative to the smallest deg"},
                         {"i100_mean", "mean iterations"},
                         {"sigma_mean", "mean primal sync count"},
                         {"redundant_mean", "mean redundant transmissions"},
                         {"runs", "seeds averaged"},
                         {"master_seed", "scenario master seed"}};
  res.runs.notes = res.summary.notes;
  res.runs.columns = {{"n", "node count"},  {"deg", "mean degree"},       {"psi", "universe scaling"},
                      {"seed", "seed index"}, {"c", "communication"},   {"c_bytes", "bytes"},
                      {"t", "time"},          {"i100", "iterations"},   {"sigma", "primal syncs"},
                      {"redundant", "redundant transmissions"}};
  // Baseline per (n, psi): first deg in sweep order is not necessarily the
  // smallest, so collect rows then normalize.
  struct Row {
    std::uint64_t n;
    std::uint64_t deg;
    double psi;
    std::string deg_text;
    Sample c, t, i, s, r;
  };
  std::vector<Row> rows;
  for_grid(sc, [&](std::uint64_t n, std::uint64_t deg, double psi) {
    Row row{n, deg, psi, {}, {}, {}, {}, {}, {}};
    for (auto seed : sc.seeds) {
      const auto ts = topology_seed(sc, n, deg, seed);
      const auto g = build_topology(sc, n, deg, ts);
      row.deg_text = deg_cell(sc, deg, g);
      const auto m = engine_run(sc, g, build_pools(sc, n, psi, pool_seed(ts, psi)), diameter(g));
      row.c.add(static_cast<double>(m.c_total_elements));
      row.t.add(static_cast<double>(m.t_total));
      row.i.add(static_cast<double>(m.i_max));
      row.s.add(static_cast<double>(m.sigma_syncs));
      row.r.add(static_cast<double>(m.redundant_transmissions));
      res.runs.add({num(n), row.deg_text, psi_cell(sc, psi), num(seed), num(m.c_total_elements),
                    num(m.c_total_bytes), num(m.t_total), num(m.i_max), num(m.sigma_syncs),
                    num(m.redundant_transmissions)});
    }
    rows.push_back(std::move(row));
  });
  for (const auto& row : rows) {
    const Row* base = &row;
    for (const auto& o : rows)
      if (o.n == row.n && o.psi == row.psi && o.deg < base->deg) base = &o;
    auto rel = [](double x, double b) { return b > 0 ? x / b : 0.0; };
    res.summary.add({num(row.n), row.deg_text, psi_cell(sc, row.psi), num(row.c.mean()), num(row.c.ci()),
                     num(row.t.mean()), num(row.t.ci()), num(rel(row.c.mean(), base->c.mean())),
                     num(rel(row.t.mean(), base->t.mean())), num(row.i.mean()), num(row.s.mean()),
                     num(row.r.mean()), num(sc.seeds.size()), num(sc.master_seed)});
  }
  return res;
}

inline ExperimentResult run_mempoolsync_compare(const Scenario& sc) {
  using namespace detail;
  ExperimentResult res;
  res.summary.notes = base_notes(sc);
  res.summary.notes.push_back("mode: " + to_string(sc.mode) + "; backend: " + describe(sc.backend));
  res.summary.notes.push_back("mempoolsync: def_tx_to_sync=" + num(sc.mempoolsync.def_tx_to_sync) +
                              " large_pool_multiplier=" + num(sc.mempoolsync.large_pool_multiplier) +
                              "; rounds = SREP iterations to full sync (at least 1)");
  res.summary.notes.push_back("*_norm columns divide by the value at the smallest n of the same (deg, psi, y)");
  res.summary.columns = {{"n", "node count"},
                         {"deg", "mean degree"},
                         {"psi", "universe scaling"},
                         {"y", "MempoolSync large-pool fraction"},
                         {"srep_c_bytes", "mean SREP bytes until full sync"},
                         {"srep_c_bytes_ci", "95% CI half-width"},
                         {"mempoolsync_c_bytes", "mean MempoolSync bytes over the same rounds"},
                         {"mempoolsync_c_bytes_ci", "95% CI half-width"},
                         {"mempoolsync_final_fraction", "mean fraction of nodes holding the union"},
                         {"srep_norm", "srep_c_bytes relative to the smallest n"},
                         {"mempoolsync_norm", "mempoolsync_c_bytes relative to the smallest n"},
                         {"rounds_mean", "mean rounds"},
                         {"runs", "seeds averaged"},
                         {"master_seed", "scenario master seed"}};
  res.runs.notes = res.summary.notes;
  res.runs.columns = {{"n", "node count"},
                      {"deg", "mean degree"},
                      {"psi", "universe scaling"},
                      {"y", "MempoolSync fraction"},
                      {"seed", "seed index"},
                      {"score_seed", "derived score seed"},
                      {"rounds", "rounds"},
                      {"srep_c_bytes", "SREP bytes"},
                      {"mempoolsync_c_bytes", "MempoolSync bytes"},
                      {"mempoolsync_final_fraction", "fraction of nodes holding the union"}};
  struct Row {
    std::uint64_t n, deg;
    double psi, y;
    std::string deg_text;
    Sample srep, ms, frac, rounds;
  };
  std::vector<Row> rows;
  const bool analytic_ok = std::holds_alternative<OracleBackend>(sc.backend) && sc.mode != SrepMode::e_srep;
  for_grid(sc, [&](std::uint64_t n, std::uint64_t deg, double psi) {
    const std::size_t first = rows.size();
    for (double y : sc.y) rows.push_back(Row{n, deg, psi, y, {}, {}, {}, {}, {}});
    for (auto seed : sc.seeds) {
      const auto ts = topology_seed(sc, n, deg, seed);
      const auto g = build_topology(sc, n, deg, ts);
      const auto diam = diameter(g);
      const auto ps = pool_seed(ts, psi);
      const auto a = build_pools(sc, n, psi, ps);
      std::uint64_t srep_bytes = 0, iters = 0;
      if (analytic_ok) {
        AnalyticOptions ao;
        ao.diameter = diam;
        const auto an = analytic_run(g, a, ao);
        srep_bytes = an.c_total_bytes;
        iters = an.i_total;
      } else {
        const auto m = engine_run(sc, g, a, diam);
        srep_bytes = m.c_total_bytes;
        iters = m.i_max;
      }
      const auto rounds = static_cast<std::int64_t>(std::max<std::uint64_t>(iters, 1));
      for (std::size_t k = 0; k < sc.y.size(); ++k) {
        Row& row = rows[first + k];
        row.deg_text = deg_cell(sc, deg, g);
        MempoolSyncParams mp{sc.mempoolsync.def_tx_to_sync, row.y, sc.mempoolsync.large_pool_multiplier};
        const auto ss = score_seed(ps, row.y);
        const auto ms = run_mempoolsync(g, a, mp, rounds, ss);
        row.srep.add(static_cast<double>(srep_bytes));
        row.ms.add(static_cast<double>(ms.c_bytes));
        row.frac.add(ms.final_sync_fraction);
        row.rounds.add(static_cast<double>(rounds));
        res.runs.add({num(n), row.deg_text, psi_cell(sc, psi), num(row.y), num(seed), num(ss), num(rounds),
                      num(srep_bytes), num(ms.c_bytes), num(ms.final_sync_fraction)});
      }
    }
  });
  for (const auto& row : rows) {
    const Row* base = &row;
    for (const auto& o : rows)
      if (o.deg == row.deg && o.psi == row.psi && o.y == row.y && o.n < base->n) base = &o;
    auto rel = [](double x, double b) { return b > 0 ? x / b : 0.0; };
    res.summary.add({num(row.n), row.deg_text, psi_cell(sc, row.psi), num(row.y), num(row.srep.mean()),
                     num(row.srep.ci()), num(row.ms.mean()), num(row.ms.ci()), num(row.frac.mean()),
                     num(rel(row.srep.mean(), base->srep.mean())), num(rel(row.ms.mean(), base->ms.mean())),
                     num(row.rounds.mean()), num(sc.seeds.size()), num(sc.master_seed)});
  }
  // Crossover: smallest n from which SREP's mean cost stays at or below
  // MempoolSync's for every larger n in the sweep.
  for (auto deg : deg_axis(sc))
    for (double psi : psi_axis(sc))
      for (double y : sc.y) {
        std::vector<const Row*> line;
        for (const auto& r : rows)
          if (r.deg == deg && r.psi == psi && r.y == y) line.push_back(&r);
        std::sort(line.begin(), line.end(), [](const Row* a, const Row* b) { return a->n < b->n; });
        std::optional<std::uint64_t> cross;
        for (auto it = line.rbegin(); it != line.rend(); ++it) {
          if ((*it)->srep.mean() <= (*it)->ms.mean())
            cross = (*it)->n;
          else
            break;
        }
        const auto text = "crossover n (deg=" + (line.empty() ? std::string("?") : line.front()->deg_text) +
                          ", psi=" + psi_cell(sc, psi) + ", y=" + num(y) +
                          "): " + (cross ? num(*cross) : std::string("none in sweep"));
        res.summary.notes.push_back(text);
        res.messages.push_back(text);
      }
  return res;
}

inline ExperimentResult run_large_scale(const Scenario& sc) {
  using namespace detail;
  ExperimentResult res;
  res.summary.notes = base_notes(sc);
  res.summary.notes.push_back("analytic module (union fixed point); event engine bypassed; 32-byte ids");
  res.summary.columns = {{"n", "node count"},
                         {"deg", "mean degree"},
                         {"psi", "universe scaling"},
                         {"diameter_mean", "mean BFS diameter"},
                         {"diameter_ci", "95% CI half-width"},
                         {"i100_mean", "mean iterations to full sync"},
                         {"i100_ci", "95% CI half-width"},
                         {"c_gb_mean", "mean communication, 1e9 bytes"},
                         {"c_gb_ci", "95% CI half-width"},
                         {"runs", "seeds averaged"},
                         {"master_seed", "scenario master seed"}};
  res.runs.notes = res.summary.notes;
  res.runs.columns = {{"n", "node count"},         {"deg", "mean degree"},     {"psi", "universe scaling"},
                      {"seed", "seed index"},      {"diameter", "diameter"},   {"i_total", "iterations"},
                      {"c_elements", "elements"},  {"c_bytes", "bytes"}};
  for_grid(sc, [&](std::uint64_t n, std::uint64_t deg, double psi) {
    Sample dm, it, gb;
    std::string deg_text;
    for (auto seed : sc.seeds) {
      const auto ts = topology_seed(sc, n, deg, seed);
      const auto g = build_topology(sc, n, deg, ts);
      deg_text = deg_cell(sc, deg, g);
      const auto diam = diameter(g);
      AnalyticOptions ao;
      ao.diameter = diam;
      const auto an = analytic_run(g, build_pools(sc, n, psi, pool_seed(ts, psi)), ao);
      dm.add(static_cast<double>(diam));
      it.add(static_cast<double>(an.i_total));
      gb.add(static_cast<double>(an.c_total_bytes) / 1e9);
      res.runs.add({num(n), deg_text, psi_cell(sc, psi), num(seed), num(diam), num(an.i_total),
                    num(an.c_total_elements), num(an.c_total_bytes)});
    }
    res.summary.add({num(n), deg_text, psi_cell(sc, psi), num(dm.mean()), num(dm.ci()), num(it.mean()),
                     num(it.ci()), num(gb.mean()), num(gb.ci()), num(sc.seeds.size()), num(sc.master_seed)});
  });
  return res;
}

inline ExperimentResult run_experiment(const Scenario& sc) {
  validate(sc);
  switch (sc.kind) {
    case ExperimentKind::validate_bounds: return run_validate_bounds(sc);
    case ExperimentKind::redundancy_sweep: return run_redundancy_sweep(sc);
    case ExperimentKind::psi_calibration: return run_psi_calibration(sc);
    case ExperimentKind::iter_vs_diameter: return run_iter_vs_diameter(sc);
    case ExperimentKind::comm_and_time: return run_comm_and_time(sc);
    case ExperimentKind::mempoolsync_compare: return run_mempoolsync_compare(sc);
    case ExperimentKind::large_scale: return run_large_scale(sc);
  }
  throw UsageError("unknown experiment kind");
}

/// Human-readable plan: grid, run count, seed derivation. No side effects.
inline std::string describe(const Scenario& sc) {
  auto list = [](const auto& xs) {
    std::string s = "[";
    for (std::size_t k = 0; k < xs.size(); ++k) s += (k ? ", " : "") + num(xs[k]);
    return s + "]";
  };
  std::ostringstream os;
  os << "experiment: " << to_string(sc.kind) << '\n';
  os << "topology: " << to_string(sc.family) << " n=" << list(sc.n);
  if (sc.family == TopologyFamily::watts_strogatz) os << " deg=" << list(sc.deg) << " p=" << num(sc.p);
  os << '\n';
  if (sc.unit_pools) {
    os << "pools: unit (node i holds {i})\n";
  } else {
    os << "pools: sizes " << sc.sizes->describe() << " (mean " << num(sc.sizes->mean())
       << "), psi=" << list(sc.psi) << ", sampling " << to_string(sc.sampling) << '\n';
    std::string us;
    for (double x : sc.psi) us += (us.empty() ? "" : ", ") + num(universe_size(x, sc.sizes->mean()));
    os << "universe sizes: [" << us << "]\n";
  }
  if (sc.kind == ExperimentKind::large_scale) {
    os << "engine: bypassed; the analytic module computes C and I from the union fixed point\n";
  } else if (sc.kind == ExperimentKind::psi_calibration) {
    os << "engine: not used; difference distributions only\n";
  } else {
    os << "engine: mode " << to_string(sc.mode) << ", backend " << describe(sc.backend);
    if (sc.stop < 1.0) os << ", stop at " << num(sc.stop);
    os << '\n';
  }
  if (sc.kind == ExperimentKind::mempoolsync_compare)
    os << "mempoolsync: def_tx_to_sync=" << sc.mempoolsync.def_tx_to_sync << " y=" << list(sc.y)
       << " large_pool_multiplier=" << num(sc.mempoolsync.large_pool_multiplier) << '\n';

  std::vector<std::string> dims;
  dims.push_back(num(sc.n.size()) + " n");
  if (sc.family == TopologyFamily::watts_strogatz) dims.push_back(num(sc.deg.size()) + " deg");
  if (!sc.unit_pools) dims.push_back(num(sc.psi.size()) + " psi");
  dims.push_back(num(sc.seeds.size()) + " seeds");
  os << "grid: ";
  for (std::size_t k = 0; k < dims.size(); ++k) os << (k ? " x " : "") << dims[k];
  os << " = " << sc.run_count() << (sc.run_count() == 1 ? " run" : " runs");
  if (sc.kind == ExperimentKind::mempoolsync_compare)
    os << " (each followed by " << sc.y.size() << " MempoolSync run" << (sc.y.size() == 1 ? "" : "s") << ")";
  os << '\n';
  os << "seeds: master " << sc.master_seed << ", indices " << list(sc.seeds) << '\n';
  os << "seed derivation: topology = derive(master, n, deg, index); pools = derive(topology, psi)";
  if (sc.kind == ExperimentKind::mempoolsync_compare) os << "; scores = derive(pools, y)";
  os << '\n';
  if (!sc.output.empty())
    os << "output: " << sc.output << " and " << runs_path(sc.output).string() << '\n';
  return os.str();
}

}  // namespace srep
