#include "mcs/ledger.hpp"

#include "mcs/types.hpp"

namespace mcs {

void CostLedger::record(std::string context, std::size_t kb_size, Rational cost,
                        std::string phase) {
  if (cost.negative()) {
    throw ContractViolation("ledger record with negative cost " + cost.str());
  }
  std::lock_guard<std::mutex> lock(mu_);
  InvocationRecord rec;
  rec.seq = records_.size() + 1;
  rec.context = std::move(context);
  rec.kb_size = kb_size;
  rec.cost = cost;
  rec.phase = std::move(phase);
  records_.push_back(std::move(rec));
}

std::size_t CostLedger::count() const {
  std::lock_guard<std::mutex> lock(mu_);
  return records_.size();
}

Rational CostLedger::total() const {
  return since(0).total;
}

std::vector<InvocationRecord> CostLedger::snapshot() const {
  std::lock_guard<std::mutex> lock(mu_);
  return records_;
}

LedgerSummary CostLedger::since(std::size_t mark) const {
  std::lock_guard<std::mutex> lock(mu_);
  LedgerSummary out;
  for (std::size_t i = mark; i < records_.size(); ++i) {
    ++out.count;
    out.total += records_[i].cost;
  }
  return out;
}

}  // namespace mcs
