#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "srep/core.hpp"
#include "srep/dense.hpp"
#include "srep/error.hpp"
#include "srep/rng.hpp"
#include "srep/stats.hpp"
#include "srep/topology.hpp"

namespace srep {

/// Maxwell scale giving a mean pool size of about 2e4, the order of
/// magnitude of live Bitcoin mempools. A stand-in, not a fitted value.
inline constexpr double kDefaultMaxwellScale = 1.0e4 * 1.2533141373155003;  // 1e4 * sqrt(pi/2)

struct ConstantSizes {
  std::uint64_t k = 1;
};

/// Continuous Maxwell(scale), rounded to the nearest integer and floored at 1.
struct MaxwellSizes {
  double scale = kDefaultMaxwellScale;
};

/// Resamples uniformly from observed pool sizes.
struct EmpiricalSizes {
  std::vector<std::uint64_t> samples;
};

class SizesDistribution {
 public:
  using Variant = std::variant<ConstantSizes, MaxwellSizes, EmpiricalSizes>;

  SizesDistribution() : v_(ConstantSizes{1}) {}
  SizesDistribution(Variant v) : v_(std::move(v)) { validate(); }  // NOLINT(implicit)

  static SizesDistribution constant(std::uint64_t k) { return {ConstantSizes{k}}; }
  static SizesDistribution maxwell(double scale = kDefaultMaxwellScale) {
    return {MaxwellSizes{scale}};
  }
  static SizesDistribution empirical(std::vector<std::uint64_t> samples) {
    return {EmpiricalSizes{std::move(samples)}};
  }

  /// One size per line; blank lines and '#' comments are skipped.
  static SizesDistribution from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open sizes file '" + path + "'");
    std::vector<std::uint64_t> xs;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      auto hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      std::istringstream ss(line);
      long long v;
      if (!(ss >> v)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        throw ParseError("expected an integer in '" + path + "'", lineno);
      }
      std::string extra;
      if (ss >> extra) throw ParseError("trailing text in '" + path + "'", lineno);
      if (v < 1) throw ParseError("pool sizes must be >= 1", lineno);
      xs.push_back(static_cast<std::uint64_t>(v));
    }
    return empirical(std::move(xs));
  }

  const Variant& variant() const noexcept { return v_; }

  std::uint64_t sample(Rng& r) const {
    return std::visit(
        [&](const auto& d) -> std::uint64_t {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, ConstantSizes>) {
            return d.k;
          } else if constexpr (std::is_same_v<T, MaxwellSizes>) {
            const double x = r.normal(), y = r.normal(), z = r.normal();
            const double v = d.scale * std::sqrt(x * x + y * y + z * z);
            return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(v)));
          } else {
            return d.samples[r.below(d.samples.size())];
          }
        },
        v_);
  }

  double mean() const {
    return std::visit(
        [](const auto& d) -> double {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, ConstantSizes>) {
            return static_cast<double>(d.k);
          } else if constexpr (std::is_same_v<T, MaxwellSizes>) {
            return 2.0 * d.scale * std::sqrt(2.0 / std::numbers::pi);
          } else {
            double s = 0;
            for (auto x : d.samples) s += static_cast<double>(x);
            return s / static_cast<double>(d.samples.size());
          }
        },
        v_);
  }

  std::string describe() const {
    return std::visit(
        [](const auto& d) -> std::string {
          using T = std::decay_t<decltype(d)>;
          std::ostringstream os;
          if constexpr (std::is_same_v<T, ConstantSizes>) {
            os << "constant(" << d.k << ")";
          } else if constexpr (std::is_same_v<T, MaxwellSizes>) {
            os << "maxwell(" << d.scale << ")";
          } else {
            os << "empirical(" << d.samples.size() << " samples)";
          }
          return os.str();
        },
        v_);
  }

 private:
  void validate() const {
    std::visit(
        [](const auto& d) {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, ConstantSizes>) {
            if (d.k < 1) throw ParameterError("constant pool size must be >= 1");
          } else if constexpr (std::is_same_v<T, MaxwellSizes>) {
            if (!(d.scale > 0.0) || !std::isfinite(d.scale))
              throw ParameterError("maxwell scale must be positive");
          } else {
            if (d.samples.empty()) throw ParameterError("empirical sizes need at least one sample");
            for (auto x : d.samples)
              if (x < 1) throw ParameterError("empirical sizes must be >= 1");
          }
        },
        v_);
  }

  Variant v_;
};

/// How a node's sizes[i] draws from U{0, u-1} become a pool.
///   without_replacement: a uniform subset of size min(sizes[i], u).
///   with_replacement:    sizes[i] independent draws, duplicates collapse.
enum class Sampling { without_replacement, with_replacement };

inline const char* to_string(Sampling s) {
  return s == Sampling::with_replacement ? "with_replacement" : "without_replacement";
}

struct PoolGenParams {
  double psi = 0.35;
  SizesDistribution sizes;
  std::uint64_t seed = 0;
  Sampling sampling = Sampling::without_replacement;
};

/// u = ceil(psi * E[sizes]). Products within 1e-9 relative of an integer are
/// snapped to it so that e.g. 0.35 * 1000 gives 350, not 351.
inline std::uint64_t universe_size(double psi, double mean_size) {
  if (!(psi > 0.0) || !std::isfinite(psi)) throw ParameterError("psi must be positive");
  const double x = psi * mean_size;
  const double nearest = std::round(x);
  const double v = std::abs(x - nearest) <= 1e-9 * std::max(1.0, nearest) ? nearest : std::ceil(x);
  if (v < 1.0) throw ParameterError("universe size is 0 (psi * mean size too small)");
  return static_cast<std::uint64_t>(v);
}

/// Pool assignment generation, dense form: universe is {0..u-1}.
///
/// Draws all |V| target sizes first, then fills each node's pool. Without
/// replacement, subsets are drawn by rejection into a bitset, sampling the
/// complement when more than half the universe is requested.
inline DenseAssignment generate_dense_assignment(std::size_t node_count,
                                                 const PoolGenParams& params) {
  const std::uint64_t u = universe_size(params.psi, params.sizes.mean());
  Rng r(params.seed);
  std::vector<std::uint64_t> sizes(node_count);
  for (auto& s : sizes) s = params.sizes.sample(r);

  std::vector<TxId> ids(u);
  for (std::uint64_t k = 0; k < u; ++k) ids[k] = TxId{k};
  DenseAssignment a(node_count, std::move(ids));
  if (params.sampling == Sampling::with_replacement) {
    for (std::size_t i = 0; i < node_count; ++i) {
      auto row = a.row(i);
      for (std::uint64_t k = 0; k < sizes[i]; ++k) {
        const auto x = r.below(u);
        row[x / 64] |= Word{1} << (x % 64);
      }
    }
    return a;
  }
  for (auto& s : sizes) s = std::min(s, u);
  std::vector<Word> scratch(a.words());
  for (std::size_t i = 0; i < node_count; ++i) {
    const bool invert = sizes[i] * 2 > u;
    std::uint64_t want = invert ? u - sizes[i] : sizes[i];
    std::fill(scratch.begin(), scratch.end(), 0);
    while (want > 0) {
      const auto k = r.below(u);
      Word& w = scratch[k / 64];
      const Word bit = Word{1} << (k % 64);
      if (w & bit) continue;
      w |= bit;
      --want;
    }
    auto row = a.row(i);
    if (invert) {
      for (std::size_t w = 0; w < row.size(); ++w) row[w] = ~scratch[w];
      if (u % 64 != 0) row.back() &= (Word{1} << (u % 64)) - 1;
    } else {
      std::copy(scratch.begin(), scratch.end(), row.begin());
    }
  }
  return a;
}

inline PoolAssignment generate_assignment(const Topology& g, const PoolGenParams& params) {
  return generate_dense_assignment(g.node_count(), params).to_pools();
}

// ---------------------------------------------------------------------------
// Differences distribution

struct EdgeDiff {
  NodeId i;
  NodeId j;
  std::uint64_t diff;
};

struct DiffSummary {
  double mean = 0, median = 0, q1 = 0, q3 = 0, min = 0, max = 0;
};

struct DiffDistribution {
  std::vector<EdgeDiff> edges;  // (i, j) with i < j, lexicographic

  std::vector<double> values() const {
    std::vector<double> v;
    v.reserve(edges.size());
    for (const auto& e : edges) v.push_back(static_cast<double>(e.diff));
    return v;
  }

  DiffSummary summary() const {
    DiffSummary s;
    auto v = values();
    if (v.empty()) return s;
    s.mean = stats::mean(v);
    s.median = stats::quantile(v, 0.5);
    s.q1 = stats::quantile(v, 0.25);
    s.q3 = stats::quantile(v, 0.75);
    s.min = *std::min_element(v.begin(), v.end());
    s.max = *std::max_element(v.begin(), v.end());
    return s;
  }

  /// CSV with columns edge_i,edge_j,diff.
  void write_csv(std::ostream& os) const {
    os << "edge_i,edge_j,diff\n";
    for (const auto& e : edges) os << e.i << ',' << e.j << ',' << e.diff << '\n';
  }
};

inline DiffDistribution empirical_diff_distribution(const Topology& g, const DenseAssignment& a) {
  if (a.node_count() != g.node_count()) throw ModelError("assignment does not match graph");
  DiffDistribution d;
  d.edges.reserve(g.edge_count());
  for (auto [i, j] : g.edges()) d.edges.push_back({i, j, xor_count(a.row(i), a.row(j))});
  return d;
}

inline DiffDistribution empirical_diff_distribution(const Topology& g, const PoolAssignment& a) {
  check_assignment(g, a);
  DiffDistribution d;
  d.edges.reserve(g.edge_count());
  for (auto [i, j] : g.edges()) d.edges.push_back({i, j, symmetric_difference_size(a[i], a[j])});
  return d;
}

// ---------------------------------------------------------------------------
// psi calibration

struct CalibrationOptions {
  int seeds = 4;              // generation seeds averaged per psi probe
  double rel_tolerance = 0.05;
  double psi_min = 1e-3;
  double psi_max = 64.0;
  int max_steps = 60;
  Sampling sampling = Sampling::without_replacement;
};

struct CalibrationResult {
  double psi = 0;
  double mean_diff = 0;  // averaged over the calibration seeds
  int probes = 0;
};

/// Mean edge difference of Procedure-style assignments at `psi`, averaged
/// over `seeds` generation seeds derived from `seed`.
inline double mean_generated_diff(const Topology& g, const SizesDistribution& sizes, double psi,
                                  std::uint64_t seed, int seeds,
                                  Sampling sampling = Sampling::without_replacement) {
  double total = 0;
  for (int k = 0; k < seeds; ++k) {
    PoolGenParams p{psi, sizes, derive_seed(seed, {static_cast<std::uint64_t>(k)}), sampling};
    auto a = generate_dense_assignment(g.node_count(), p);
    total += empirical_diff_distribution(g, a).summary().mean;
  }
  return total / seeds;
}

/// Bisection over psi for a target mean pairwise difference. Relies on the
/// mean difference growing with psi; probes reuse the same seeds so the
/// relation is monotone up to sampling noise.
inline CalibrationResult calibrate_psi(const Topology& g, const SizesDistribution& sizes,
                                       double target_mean_diff, std::uint64_t seed,
                                       const CalibrationOptions& opt = {}) {
  if (!(target_mean_diff >= 0.0) || target_mean_diff >= 2.0 * sizes.mean())
    throw ParameterError("target mean difference must lie in [0, 2 * mean size)");
  if (g.edge_count() == 0) throw ParameterError("calibration needs at least one edge");

  CalibrationResult res;
  auto probe = [&](double psi) {
    ++res.probes;
    return mean_generated_diff(g, sizes, psi, seed, opt.seeds, opt.sampling);
  };
  auto close = [&](double m) {
    return std::abs(m - target_mean_diff) <= opt.rel_tolerance * target_mean_diff;
  };

  double lo = opt.psi_min, hi = opt.psi_max;
  const double m_lo = probe(lo);
  if (m_lo >= target_mean_diff || close(m_lo)) {
    res.psi = lo;
    res.mean_diff = m_lo;
    return res;
  }
  const double m_hi = probe(hi);
  if (close(m_hi)) {
    res.psi = hi;
    res.mean_diff = m_hi;
    return res;
  }
  if (m_hi < target_mean_diff)
    throw CalibrationError("target mean difference unreachable for psi <= " +
                           std::to_string(opt.psi_max));
  for (int step = 0; step < opt.max_steps; ++step) {
    const double mid = 0.5 * (lo + hi);
    const double m = probe(mid);
    if (close(m)) {
      res.psi = mid;
      res.mean_diff = m;
      return res;
    }
    (m < target_mean_diff ? lo : hi) = mid;
  }
  throw CalibrationError("psi bisection did not converge");
}

}  // namespace srep
