#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <variant>

#include "srep/core.hpp"
#include "srep/error.hpp"
#include "srep/iblt.hpp"
#include "srep/rng.hpp"

namespace srep {

/// Exact-cost primal sync: transmits precisely |a ⊕ b| elements.
struct OracleBackend {};

/// IBLT primal sync. A first sketch has ceil(cells_per_diff * d) +
/// extra_cells cells, where d is the true difference size; a failed decode
/// retries with twice the cells, and every attempt's sketch counts toward
/// the cost. The additive slack keeps small differences decodable: with
/// exactly 1.5 * d cells, peeling fails far too often for d below ~50.
struct IbltBackend {
  double cells_per_diff = 1.5;
  std::size_t hash_count = 4;
  std::uint64_t seed = 0;
  int max_retries = 8;
  std::size_t extra_cells = 16;
};

using PrimalSyncBackend = std::variant<OracleBackend, IbltBackend>;

inline void validate(const PrimalSyncBackend& b) {
  if (const auto* ib = std::get_if<IbltBackend>(&b)) {
    if (!(ib->cells_per_diff >= 1.2))
      throw ParameterError("iblt: cells_per_diff must be >= 1.2");
    if (ib->hash_count == 0 || ib->hash_count > kIbltMaxHashes)
      throw ParameterError("iblt: hash_count must lie in [1, 8]");
    if (ib->max_retries < 0) throw ParameterError("iblt: max_retries must be >= 0");
  }
}

inline std::string describe(const PrimalSyncBackend& b) {
  if (const auto* ib = std::get_if<IbltBackend>(&b)) {
    return "iblt(cells_per_diff=" + std::to_string(ib->cells_per_diff) +
           ", hashes=" + std::to_string(ib->hash_count) + ")";
  }
  return "oracle";
}

struct SyncOutcome {
  Pool d_ba;  // b \ a, delivered to a
  Pool d_ab;  // a \ b, delivered to b
  std::uint64_t cost_elements = 0;  // oracle: elements; iblt: cells
  std::uint64_t cost_bytes = 0;
  bool success = false;
  int attempts = 0;
};

/// Cells for a first attempt at difference size d.
inline std::size_t iblt_cells_for(const IbltBackend& b, std::size_t d) {
  const auto scaled = static_cast<std::size_t>(std::ceil(b.cells_per_diff * static_cast<double>(d)));
  return std::max(scaled + b.extra_cells, b.hash_count);
}

/// Two-way reconciliation of a and b. `salt` varies the sketch hashing
/// between invocations (the engine passes edge and iteration).
///
/// Returns success=false instead of throwing when the IBLT gives up;
/// see sync() for the throwing form.
inline SyncOutcome try_sync(const PrimalSyncBackend& backend, const Pool& a, const Pool& b,
                            std::uint64_t salt = 0) {
  SyncOutcome out;
  if (std::holds_alternative<OracleBackend>(backend)) {
    auto sd = symmetric_difference(a, b);
    out.cost_elements = sd.size();
    out.cost_bytes = out.cost_elements * kTxIdWireBytes;
    out.d_ab = std::move(sd.a_minus_b);
    out.d_ba = std::move(sd.b_minus_a);
    out.success = true;
    out.attempts = 1;
    return out;
  }
  const auto& ib = std::get<IbltBackend>(backend);
  std::size_t cells = iblt_cells_for(ib, symmetric_difference_size(a, b));
  for (int attempt = 0; attempt <= ib.max_retries; ++attempt) {
    const std::uint64_t seed =
        derive_seed(ib.seed, {salt, static_cast<std::uint64_t>(attempt)});
    auto sa = iblt_encode(a, cells, ib.hash_count, seed);
    auto sb = iblt_encode(b, cells, ib.hash_count, seed);
    ++out.attempts;
    out.cost_elements += cells;
    out.cost_bytes += cells * kIbltCellBytes;
    auto dec = iblt_subtract_decode(sa, sb);
    if (dec.success) {
      out.d_ab = std::move(dec.a_minus_b);
      out.d_ba = std::move(dec.b_minus_a);
      out.success = true;
      return out;
    }
    cells *= 2;
  }
  return out;
}

inline SyncOutcome sync(const PrimalSyncBackend& backend, const Pool& a, const Pool& b,
                        std::uint64_t salt = 0) {
  auto out = try_sync(backend, a, b, salt);
  if (!out.success)
    throw ReconciliationError("iblt decode failed after " + std::to_string(out.attempts) +
                              " attempts (|a|=" + std::to_string(a.size()) +
                              ", |b|=" + std::to_string(b.size()) +
                              ", diff=" + std::to_string(symmetric_difference_size(a, b)) + ")");
  return out;
}

}  // namespace srep
