#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <unordered_map>
#include <vector>

#include "srep/core.hpp"
#include "srep/dense.hpp"
#include "srep/error.hpp"
#include "srep/rng.hpp"
#include "srep/topology.hpp"

namespace srep {

// MempoolSync: push a score-ranked batch of hashes to every neighbor each
// round, with the batch size keyed to the sender's pool size.

struct MempoolSyncParams {
  std::uint64_t def_tx_to_sync = 1000;
  double y = 0.5;
  double large_pool_multiplier = 10.0;

  void validate() const {
    if (def_tx_to_sync == 0) throw ParameterError("def_tx_to_sync must be positive");
    if (!(y > 0.0 && y < 1.0)) throw ParameterError("y must lie in (0, 1)");
    if (!(large_pool_multiplier > 0.0)) throw ParameterError("large_pool_multiplier must be positive");
  }
};

/// Number of hashes a node with `pool_size` transactions sends per neighbor.
inline std::uint64_t batch_quota(std::uint64_t pool_size, const MempoolSyncParams& p) {
  if (pool_size < p.def_tx_to_sync) return pool_size;
  if (static_cast<double>(pool_size) > p.large_pool_multiplier * static_cast<double>(p.def_tx_to_sync)) {
    const auto q = static_cast<std::uint64_t>(std::ceil(p.y * static_cast<double>(p.def_tx_to_sync)));
    return std::min(q, pool_size);
  }
  return p.def_tx_to_sync;
}

/// Stand-in for the ancestor score: a seeded uniform draw in [0, 1) per
/// transaction, the same at every node.
inline double tx_score(std::uint64_t seed, TxId x) {
  return static_cast<double>(mix64(x.value ^ mix64(seed)) >> 11) * 0x1.0p-53;
}

struct ScoredPool {
  Pool pool;
  std::unordered_map<TxId, double> score;

  static ScoredPool with_seeded_scores(Pool p, std::uint64_t seed) {
    ScoredPool sp{std::move(p), {}};
    for (TxId x : sp.pool) sp.score[x] = tx_score(seed, x);
    return sp;
  }
};

/// Ranking: higher score first, ties by ascending TxId.
inline bool ranks_before(double sa, TxId a, double sb, TxId b) {
  return sa != sb ? sa > sb : a < b;
}

inline std::vector<TxId> select_batch(const ScoredPool& p, const MempoolSyncParams& params) {
  params.validate();
  std::vector<std::pair<double, TxId>> items;
  items.reserve(p.pool.size());
  for (TxId x : p.pool) {
    auto it = p.score.find(x);
    if (it == p.score.end()) throw ModelError("element without a score");
    items.emplace_back(it->second, x);
  }
  const auto quota = static_cast<std::size_t>(batch_quota(items.size(), params));
  auto cmp = [](const auto& a, const auto& b) {
    return ranks_before(a.first, a.second, b.first, b.second);
  };
  std::partial_sort(items.begin(), items.begin() + static_cast<std::ptrdiff_t>(quota), items.end(), cmp);
  std::vector<TxId> out;
  out.reserve(quota);
  for (std::size_t k = 0; k < quota; ++k) out.push_back(items[k].second);
  return out;
}

struct MempoolSyncResult {
  std::uint64_t c_elements = 0;
  std::uint64_t c_bytes = 0;
  double final_sync_fraction = 0.0;
  std::uint64_t rounds = 0;
};

/// Runs `rounds` synchronous push rounds. Every node selects its batch from
/// its pool at the start of the round and sends it to each neighbor;
/// receivers add unseen hashes at the end of the round. Every hash sent is
/// paid for, duplicates included.
inline MempoolSyncResult run_mempoolsync(const Topology& g, const DenseAssignment& a,
                                         const MempoolSyncParams& params, std::int64_t rounds,
                                         std::uint64_t seed) {
  params.validate();
  if (rounds <= 0) throw ParameterError("mempoolsync: rounds must be positive");
  if (a.node_count() != g.node_count()) throw ModelError("assignment does not match graph");

  // Re-index the universe by rank so a batch is the lowest set bits of a row.
  const auto& ids = a.universe();
  const std::size_t u = ids.size();
  std::vector<std::size_t> order(u);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> score(u);
  for (std::size_t k = 0; k < u; ++k) score[k] = tx_score(seed, ids[k]);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return ranks_before(score[x], ids[x], score[y], ids[y]);
  });
  std::vector<std::size_t> rank_of(u);
  for (std::size_t r = 0; r < u; ++r) rank_of[order[r]] = r;

  const std::size_t n = g.node_count();
  const std::size_t words = a.words();
  std::vector<Word> live(n * words, 0);
  for (std::size_t v = 0; v < n; ++v) {
    auto src = a.row(v);
    for (std::size_t w = 0; w < words; ++w) {
      Word x = src[w];
      while (x) {
        const auto k = w * 64 + static_cast<std::size_t>(std::countr_zero(x));
        live[v * words + rank_of[k] / 64] |= Word{1} << (rank_of[k] % 64);
        x &= x - 1;
      }
    }
  }
  auto row = [&](std::vector<Word>& buf, std::size_t v) {
    return std::span<Word>(buf.data() + v * words, words);
  };

  MempoolSyncResult res;
  res.rounds = static_cast<std::uint64_t>(rounds);
  std::vector<Word> batch(words);
  for (std::int64_t r = 0; r < rounds; ++r) {
    std::vector<Word> snap = live;
    for (std::size_t v = 0; v < n; ++v) {
      auto src = row(snap, v);
      const std::uint64_t quota = batch_quota(popcount(src), params);
      std::fill(batch.begin(), batch.end(), 0);
      std::uint64_t taken = 0;
      for (std::size_t w = 0; w < words && taken < quota; ++w) {
        Word x = src[w];
        while (x && taken < quota) {
          const Word low = x & (~x + 1);
          batch[w] |= low;
          x ^= low;
          ++taken;
        }
      }
      for (NodeId nb : g.neighbors(static_cast<NodeId>(v))) {
        auto dst = row(live, nb);
        for (std::size_t w = 0; w < words; ++w) dst[w] |= batch[w];
      }
      res.c_elements += taken * g.degree(static_cast<NodeId>(v));
    }
  }
  res.c_bytes = res.c_elements * kTxIdWireBytes;

  std::vector<Word> all(words, 0);
  for (std::size_t v = 0; v < n; ++v) {
    auto src = row(live, v);
    for (std::size_t w = 0; w < words; ++w) all[w] |= src[w];
  }
  const std::size_t target = popcount(all);
  std::size_t synced = 0;
  for (std::size_t v = 0; v < n; ++v) synced += popcount(row(live, v)) == target;
  res.final_sync_fraction = n == 0 ? 1.0 : static_cast<double>(synced) / static_cast<double>(n);
  return res;
}

inline MempoolSyncResult run_mempoolsync(const Topology& g, const PoolAssignment& a,
                                         const MempoolSyncParams& params, std::int64_t rounds,
                                         std::uint64_t seed) {
  check_assignment(g, a);
  return run_mempoolsync(g, DenseAssignment::from_pools(a), params, rounds, seed);
}

}  // namespace srep
