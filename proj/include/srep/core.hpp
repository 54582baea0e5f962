#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <iterator>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "srep/error.hpp"
#include "srep/topology.hpp"

namespace srep {

/// Globally unique transaction identifier. Opaque 64-bit value in
/// simulation; costed as kTxIdWireBytes on the wire.
struct TxId {
  std::uint64_t value = 0;

  friend constexpr auto operator<=>(TxId, TxId) = default;
};

inline constexpr std::uint64_t kTxIdWireBytes = 32;

/// A transaction pool: a set of TxIds, kept as a sorted vector.
class Pool {
 public:
  using const_iterator = std::vector<TxId>::const_iterator;

  Pool() = default;
  Pool(std::initializer_list<std::uint64_t> ids) {
    elems_.reserve(ids.size());
    for (auto v : ids) elems_.push_back(TxId{v});
    normalize();
  }
  explicit Pool(std::vector<TxId> ids) : elems_(std::move(ids)) { normalize(); }

  /// Wraps ids already sorted ascending without duplicates.
  static Pool from_sorted(std::vector<TxId> ids) {
    Pool p;
    p.elems_ = std::move(ids);
    return p;
  }

  std::size_t size() const noexcept { return elems_.size(); }
  bool empty() const noexcept { return elems_.empty(); }
  const_iterator begin() const noexcept { return elems_.begin(); }
  const_iterator end() const noexcept { return elems_.end(); }
  const std::vector<TxId>& ids() const noexcept { return elems_; }

  bool contains(TxId x) const { return std::binary_search(elems_.begin(), elems_.end(), x); }

  void insert(TxId x) {
    auto it = std::lower_bound(elems_.begin(), elems_.end(), x);
    if (it == elems_.end() || *it != x) elems_.insert(it, x);
  }

  /// Set union in place.
  void merge(const Pool& other) {
    std::vector<TxId> out;
    out.reserve(elems_.size() + other.size());
    std::set_union(elems_.begin(), elems_.end(), other.begin(), other.end(),
                   std::back_inserter(out));
    elems_ = std::move(out);
  }

  friend bool operator==(const Pool&, const Pool&) = default;

 private:
  void normalize() {
    std::sort(elems_.begin(), elems_.end());
    elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
  }

  std::vector<TxId> elems_;
};

/// Per-node pools, indexed by node id.
using PoolAssignment = std::vector<Pool>;

inline Pool set_difference(const Pool& a, const Pool& b) {
  std::vector<TxId> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return Pool::from_sorted(std::move(out));
}

inline Pool set_union(const Pool& a, const Pool& b) {
  std::vector<TxId> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return Pool::from_sorted(std::move(out));
}

struct SymmetricDifference {
  Pool a_minus_b;  // elements only in a
  Pool b_minus_a;  // elements only in b

  std::size_t size() const { return a_minus_b.size() + b_minus_a.size(); }
};

inline SymmetricDifference symmetric_difference(const Pool& a, const Pool& b) {
  return {set_difference(a, b), set_difference(b, a)};
}

/// |a ⊕ b| without materializing either side.
inline std::size_t symmetric_difference_size(const Pool& a, const Pool& b) {
  std::size_t common = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++common;
      ++i;
      ++j;
    }
  }
  return a.size() + b.size() - 2 * common;
}

/// Mutual differences over edges: (i, j) -> |S_i ⊕ S_j| for (i, j) ∈ E, i < j.
/// Non-edges are absent; edges joining equal pools hold 0.
class DiffMatrix {
 public:
  using key_type = std::pair<NodeId, NodeId>;

  void set(NodeId i, NodeId j, std::uint64_t value) {
    if (i > j) std::swap(i, j);
    entries_[{i, j}] = value;
  }

  /// Entry for an edge, or nullopt for a non-edge.
  std::optional<std::uint64_t> at(NodeId i, NodeId j) const {
    if (i > j) std::swap(i, j);
    auto it = entries_.find({i, j});
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  const std::map<key_type, std::uint64_t>& entries() const noexcept { return entries_; }

  std::uint64_t sum() const {
    std::uint64_t s = 0;
    for (const auto& [k, v] : entries_) s += v;
    return s;
  }

 private:
  std::map<key_type, std::uint64_t> entries_;
};

inline void check_assignment(const Topology& g, const PoolAssignment& a) {
  if (a.size() != g.node_count())
    throw ModelError("assignment has " + std::to_string(a.size()) + " pools but graph has " +
                     std::to_string(g.node_count()) + " nodes");
}

inline DiffMatrix diff_matrix(const Topology& g, const PoolAssignment& a) {
  check_assignment(g, a);
  DiffMatrix m;
  for (auto [i, j] : g.edges()) m.set(i, j, symmetric_difference_size(a[i], a[j]));
  return m;
}

/// Sum of all mutual differences over edges.
inline std::uint64_t f_total(const Topology& g, const PoolAssignment& a) {
  check_assignment(g, a);
  std::uint64_t total = 0;
  for (auto [i, j] : g.edges()) total += symmetric_difference_size(a[i], a[j]);
  return total;
}

inline Pool global_union(const PoolAssignment& a) {
  std::vector<TxId> all;
  for (const auto& p : a) all.insert(all.end(), p.begin(), p.end());
  return Pool(std::move(all));
}

/// Fraction of nodes whose pool equals the union of all pools.
inline double sync_fraction(const PoolAssignment& a) {
  if (a.empty()) return 1.0;
  const Pool all = global_union(a);
  std::size_t synced = 0;
  for (const auto& p : a) synced += p.size() == all.size();
  return static_cast<double>(synced) / static_cast<double>(a.size());
}

inline double sync_fraction(const Topology& g, const PoolAssignment& a) {
  check_assignment(g, a);
  return sync_fraction(a);
}

/// Unit pools {0}, {1}, ..., {n-1}: the single-element starting state.
inline PoolAssignment unit_pools(std::size_t n) {
  PoolAssignment a(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = Pool{i};
  return a;
}

}  // namespace srep

template <>
struct std::hash<srep::TxId> {
  std::size_t operator()(srep::TxId x) const noexcept { return srep::mix64(x.value); }
};
