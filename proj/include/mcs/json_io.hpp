#pragma once

#include <iosfwd>

#include "json.hpp"
#include "mcs/bounds.hpp"
#include "mcs/solvers.hpp"

namespace mcs {

nlohmann::json belief_state_json(const Mcs& system, const BeliefState& state);
nlohmann::json ledger_summary_json(const LedgerSummary& summary);
nlohmann::json bound_report_json(const BoundReport& report);
nlohmann::json query_json(const ContextName& context, const Atom& atom,
                          const QueryOutcome& outcome, const Mcs& system);

/// One record per line: {"seq", "context", "kb_size", "cost", "phase"} with
/// the cost as an exact "num/den" string.
void write_ledger_jsonl(std::ostream& os, const CostLedger& ledger);

}  // namespace mcs
