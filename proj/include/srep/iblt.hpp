#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "srep/core.hpp"
#include "srep/error.hpp"
#include "srep/rng.hpp"

namespace srep {

/// Wire size of one cell: 4 (count) + 8 (id_sum) + 4 (check_sum).
inline constexpr std::uint64_t kIbltCellBytes = 16;
inline constexpr std::size_t kIbltMaxHashes = 8;

struct IbltCell {
  std::int32_t count = 0;
  std::uint64_t id_sum = 0;
  std::uint32_t check_sum = 0;

  bool empty() const noexcept { return count == 0 && id_sum == 0 && check_sum == 0; }
  friend bool operator==(const IbltCell&, const IbltCell&) = default;
};

/// Invertible Bloom lookup table over TxIds.
///
/// Each element touches `hash_count` distinct cells drawn from the whole
/// table by seeded hashing. Sketches built with the same shape and seed
/// subtract cell-wise into a sketch of the symmetric difference.
class IbltSketch {
 public:
  IbltSketch(std::size_t cell_count, std::size_t hash_count, std::uint64_t seed)
      : cells_(cell_count), hash_count_(hash_count), seed_(seed) {
    if (hash_count == 0 || hash_count > kIbltMaxHashes)
      throw ParameterError("iblt: hash count must lie in [1, 8]");
    if (cell_count < hash_count) throw ParameterError("iblt: need cell_count >= hash_count");
  }

  std::size_t cell_count() const noexcept { return cells_.size(); }
  std::size_t hash_count() const noexcept { return hash_count_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const std::vector<IbltCell>& cells() const noexcept { return cells_; }

  void insert(TxId x) { apply(x, +1); }
  void erase(TxId x) { apply(x, -1); }

  bool is_zero() const {
    for (const auto& c : cells_)
      if (!c.empty()) return false;
    return true;
  }

  std::uint32_t check_hash(TxId x) const {
    return static_cast<std::uint32_t>(mix64(x.value ^ mix64(seed_ ^ 0x5bd1e9955bd1e995ULL)));
  }

  /// Distinct cell indices for x, written to `out`; returns how many (== hash_count).
  std::size_t cell_indices(TxId x, std::array<std::size_t, kIbltMaxHashes>& out) const {
    const std::uint64_t n = cells_.size();
    std::size_t filled = 0;
    std::uint64_t h = mix64(x.value ^ seed_);
    while (filled < hash_count_) {
      h = mix64(h);
      const auto idx = static_cast<std::size_t>(h % n);
      bool dup = false;
      for (std::size_t k = 0; k < filled; ++k) dup |= out[k] == idx;
      if (!dup) out[filled++] = idx;
    }
    return filled;
  }

  bool is_pure(std::size_t idx) const {
    const auto& c = cells_[idx];
    return (c.count == 1 || c.count == -1) && check_hash(TxId{c.id_sum}) == c.check_sum;
  }

  /// Cell-wise difference; both sketches must share shape and seed.
  friend IbltSketch operator-(const IbltSketch& a, const IbltSketch& b) {
    if (a.cell_count() != b.cell_count() || a.hash_count() != b.hash_count() ||
        a.seed() != b.seed())
      throw UsageError("iblt: cannot subtract sketches with different parameters");
    IbltSketch out = a;
    for (std::size_t i = 0; i < out.cells_.size(); ++i) {
      out.cells_[i].count -= b.cells_[i].count;
      out.cells_[i].id_sum ^= b.cells_[i].id_sum;
      out.cells_[i].check_sum ^= b.cells_[i].check_sum;
    }
    return out;
  }

  friend bool operator==(const IbltSketch&, const IbltSketch&) = default;

 private:
  friend struct IbltPeeler;

  void apply(TxId x, std::int32_t delta) {
    std::array<std::size_t, kIbltMaxHashes> idx{};
    const std::uint32_t chk = check_hash(x);
    for (std::size_t k = 0, n = cell_indices(x, idx); k < n; ++k) {
      auto& c = cells_[idx[k]];
      c.count += delta;
      c.id_sum ^= x.value;
      c.check_sum ^= chk;
    }
  }

  std::vector<IbltCell> cells_;
  std::size_t hash_count_;
  std::uint64_t seed_;
};

inline IbltSketch iblt_encode(const Pool& s, std::size_t cell_count, std::size_t hash_count,
                              std::uint64_t seed) {
  IbltSketch sk(cell_count, hash_count, seed);
  for (TxId x : s) sk.insert(x);
  return sk;
}

struct IbltDecodeResult {
  Pool a_minus_b;
  Pool b_minus_a;
  bool success = false;
};

struct IbltPeeler {
  /// Peels a difference sketch: count +1 cells yield elements of a \ b,
  /// count -1 cells elements of b \ a. Succeeds iff the sketch drains.
  static IbltDecodeResult peel(IbltSketch diff) {
    IbltDecodeResult res;
    std::vector<TxId> plus, minus;
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < diff.cells_.size(); ++i)
      if (diff.is_pure(i)) stack.push_back(i);
    // Each successful extraction removes one element, so the loop is
    // bounded by the number of elements; the cap only guards against
    // checksum collisions cycling forever.
    std::size_t budget = 4 * diff.cells_.size() * diff.hash_count() + 16;
    std::array<std::size_t, kIbltMaxHashes> idx{};
    while (!stack.empty() && budget-- > 0) {
      const std::size_t i = stack.back();
      stack.pop_back();
      if (!diff.is_pure(i)) continue;
      const IbltCell c = diff.cells_[i];
      const TxId x{c.id_sum};
      (c.count > 0 ? plus : minus).push_back(x);
      const std::uint32_t chk = diff.check_hash(x);
      for (std::size_t k = 0, n = diff.cell_indices(x, idx); k < n; ++k) {
        auto& cell = diff.cells_[idx[k]];
        cell.count -= c.count;
        cell.id_sum ^= x.value;
        cell.check_sum ^= chk;
        if (diff.is_pure(idx[k])) stack.push_back(idx[k]);
      }
    }
    res.a_minus_b = Pool(std::move(plus));
    res.b_minus_a = Pool(std::move(minus));
    res.success = diff.is_zero();
    // Checksum collisions can fabricate an element that lands on both sides.
    if (res.success) {
      for (TxId x : res.a_minus_b)
        if (res.b_minus_a.contains(x)) res.success = false;
    }
    return res;
  }
};

inline IbltDecodeResult iblt_subtract_decode(const IbltSketch& sa, const IbltSketch& sb) {
  return IbltPeeler::peel(sa - sb);
}

}  // namespace srep
