#pragma once

#include <cstdint>
#include <vector>

#include "oracles.hpp"
#include "srep/core.hpp"
#include "srep/rng.hpp"

namespace testing_util {

inline oracle::Sets to_sets(const srep::PoolAssignment& a) {
  oracle::Sets s(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (auto x : a[i]) s[i].insert(x.value);
  return s;
}

/// Random pools over a small id range; some pools may be empty.
inline srep::PoolAssignment random_pools(std::size_t n, std::uint64_t universe,
                                         std::uint64_t max_size, std::uint64_t seed) {
  srep::Rng r(seed);
  srep::PoolAssignment a(n);
  for (auto& p : a) {
    const auto k = r.below(max_size + 1);
    std::vector<srep::TxId> ids;
    for (std::uint64_t t = 0; t < k; ++t) ids.push_back(srep::TxId{r.below(universe)});
    p = srep::Pool(std::move(ids));
  }
  return a;
}

}  // namespace testing_util
