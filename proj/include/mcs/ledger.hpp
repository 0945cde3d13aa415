#pragma once

#include <cstddef>
#include <cstdint>
#include <mutex>
#include <string>
#include <vector>

#include "mcs/rational.hpp"

namespace mcs {

/// One semantic-operator invocation as charged against the system.
struct InvocationRecord {
  std::uint64_t seq = 0;  // strictly increasing in append order, starts at 1
  std::string context;
  std::size_t kb_size = 0;
  Rational cost;
  std::string phase;  // which algorithm/step charged it
};

struct LedgerSummary {
  std::size_t count = 0;
  Rational total;
};

/// Append-only invocation log. Appends are serialized internally; reads see a
/// consistent prefix. Totals are exact rational sums.
class CostLedger {
 public:
  CostLedger() = default;
  CostLedger(const CostLedger&) = delete;
  CostLedger& operator=(const CostLedger&) = delete;

  /// Throws ContractViolation on negative cost.
  void record(std::string context, std::size_t kb_size, Rational cost, std::string phase);

  std::size_t count() const;
  Rational total() const;
  std::vector<InvocationRecord> snapshot() const;

  /// Position marker for windowed accounting of a single run.
  std::size_t mark() const { return count(); }
  /// Count and exact cost of everything appended at or after `mark`.
  LedgerSummary since(std::size_t mark) const;
  LedgerSummary summary() const { return since(0); }

 private:
  mutable std::mutex mu_;
  std::vector<InvocationRecord> records_;
};

}  // namespace mcs
