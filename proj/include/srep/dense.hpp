#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "srep/core.hpp"

namespace srep {

using Word = std::uint64_t;

inline std::size_t popcount(std::span<const Word> a) {
  std::size_t c = 0;
  for (Word w : a) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

inline std::size_t xor_count(std::span<const Word> a, std::span<const Word> b) {
  std::size_t c = 0;
  for (std::size_t k = 0; k < a.size(); ++k) c += static_cast<std::size_t>(std::popcount(a[k] ^ b[k]));
  return c;
}

/// |a \ b|
inline std::size_t andnot_count(std::span<const Word> a, std::span<const Word> b) {
  std::size_t c = 0;
  for (std::size_t k = 0; k < a.size(); ++k) c += static_cast<std::size_t>(std::popcount(a[k] & ~b[k]));
  return c;
}

/// Pool assignment as one bitset row per node over a compact universe.
///
/// The universe is a sorted id list (by default the union of all pools);
/// bit k of a row stands for the k-th smallest id, so iterating set bits
/// visits a pool in TxId order. Rows share one contiguous buffer.
class DenseAssignment {
 public:
  DenseAssignment() = default;

  static DenseAssignment from_pools(const PoolAssignment& a) {
    return from_pools(a, global_union(a).ids());
  }

  /// Uses `universe` (sorted, unique, a superset of every pool) as the index space.
  static DenseAssignment from_pools(const PoolAssignment& a, std::vector<TxId> universe) {
    DenseAssignment d(a.size(), std::move(universe));
    for (std::size_t i = 0; i < a.size(); ++i) {
      auto row = d.row(i);
      for (TxId x : a[i]) {
        auto it = std::lower_bound(d.ids_.begin(), d.ids_.end(), x);
        if (it == d.ids_.end() || *it != x) throw ModelError("pool element outside universe");
        auto k = static_cast<std::size_t>(it - d.ids_.begin());
        row[k / 64] |= Word{1} << (k % 64);
      }
    }
    return d;
  }

  DenseAssignment(std::size_t nodes, std::vector<TxId> universe)
      : nodes_(nodes), ids_(std::move(universe)), words_((ids_.size() + 63) / 64),
        bits_(nodes_ * words_, 0) {}

  std::size_t node_count() const noexcept { return nodes_; }
  std::size_t universe_size() const noexcept { return ids_.size(); }
  std::size_t words() const noexcept { return words_; }
  const std::vector<TxId>& universe() const noexcept { return ids_; }

  std::span<Word> row(std::size_t i) { return {bits_.data() + i * words_, words_}; }
  std::span<const Word> row(std::size_t i) const { return {bits_.data() + i * words_, words_}; }

  bool test(std::size_t i, std::size_t k) const { return (row(i)[k / 64] >> (k % 64)) & 1U; }
  void set(std::size_t i, std::size_t k) { row(i)[k / 64] |= Word{1} << (k % 64); }

  std::size_t pool_size(std::size_t i) const { return popcount(row(i)); }

  Pool pool(std::size_t i) const { return to_pool(row(i)); }

  /// Converts any row-shaped bitset over this universe into a Pool.
  Pool to_pool(std::span<const Word> bits) const {
    std::vector<TxId> out;
    for (std::size_t w = 0; w < bits.size(); ++w) {
      Word x = bits[w];
      while (x) {
        auto b = static_cast<std::size_t>(std::countr_zero(x));
        out.push_back(ids_[w * 64 + b]);
        x &= x - 1;
      }
    }
    return Pool::from_sorted(std::move(out));
  }

  PoolAssignment to_pools() const {
    PoolAssignment a(nodes_);
    for (std::size_t i = 0; i < nodes_; ++i) a[i] = pool(i);
    return a;
  }

  friend bool operator==(const DenseAssignment&, const DenseAssignment&) = default;

 private:
  std::size_t nodes_ = 0;
  std::vector<TxId> ids_;
  std::size_t words_ = 0;
  std::vector<Word> bits_;
};

/// f over a dense assignment; same value as f_total on the equivalent pools.
inline std::uint64_t f_total(const Topology& g, const DenseAssignment& a) {
  std::uint64_t total = 0;
  for (NodeId u = 0; u < g.node_count(); ++u)
    for (NodeId v : g.neighbors(u))
      if (u < v) total += xor_count(a.row(u), a.row(v));
  return total;
}

/// OR of every row: the global union.
inline std::vector<Word> union_row(const DenseAssignment& a) {
  std::vector<Word> u(a.words(), 0);
  for (std::size_t i = 0; i < a.node_count(); ++i) {
    auto r = a.row(i);
    for (std::size_t k = 0; k < u.size(); ++k) u[k] |= r[k];
  }
  return u;
}

/// Number of nodes whose pool equals the global union.
inline std::size_t synced_count(const DenseAssignment& a) {
  const auto all = union_row(a);
  const std::size_t target = popcount(all);
  std::size_t c = 0;
  for (std::size_t i = 0; i < a.node_count(); ++i) c += a.pool_size(i) == target;
  return c;
}

inline double sync_fraction(const DenseAssignment& a) {
  if (a.node_count() == 0) return 1.0;
  return static_cast<double>(synced_count(a)) / static_cast<double>(a.node_count());
}

}  // namespace srep
