#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "mcs/ledger.hpp"
#include "mcs/supports.hpp"

namespace mcs {

/// Every context declares constant unit cost.
bool is_uniform_cost(const Mcs& system);

enum class BoundAlgorithm { kGeneral, kFixpoint, kStratified, kIncrementalRelevant };

std::string_view bound_algorithm_name(BoundAlgorithm algorithm);
std::optional<BoundAlgorithm> bound_algorithm_from(std::string_view name);

/// Comparison of one run's ledger window against the worst-case envelope of
/// the algorithm that produced it. Whether the window really came from that
/// algorithm is the caller's responsibility; a mismatch is not detectable.
struct BoundReport {
  std::string algorithm;
  std::size_t n = 0;  // contexts
  std::size_t m = 0;  // bridge rules
  Rational c;         // max context cost
  std::size_t observed_count = 0;
  Rational observed_cost;
  std::size_t bound_count = 0;
  Rational bound_cost;
  bool within_bound = false;
  std::optional<bool> bounded_rule_regime;  // m <= k*n for the supplied k
};

/// Envelopes: general n*2^m, fixpoint n*(m+1), stratified n,
/// incremental-relevant |supporting contexts| * |supporting rules| of the
/// query context (required in that mode). bound_cost = c * bound_count.
BoundReport bound_report(const Mcs& system, const LedgerSummary& run,
                         BoundAlgorithm algorithm,
                         const std::optional<ContextName>& query_context = std::nullopt,
                         std::size_t supports_cap = kDefaultSupportsCap,
                         std::optional<unsigned> rule_factor_k = std::nullopt);

}  // namespace mcs
