#include "mcs/json_io.hpp"

#include <ostream>

namespace mcs {

using nlohmann::json;

json belief_state_json(const Mcs& system, const BeliefState& state) {
  json out = json::object();
  for (std::size_t i = 0; i < system.size(); ++i) {
    out[system.context(i).name()] = json(state[i]);
  }
  return out;
}

json ledger_summary_json(const LedgerSummary& summary) {
  return json{{"count", summary.count}, {"total", summary.total.fraction_str()}};
}

json bound_report_json(const BoundReport& report) {
  json out{{"algorithm", report.algorithm},
           {"n", report.n},
           {"m", report.m},
           {"c", report.c.fraction_str()},
           {"observed_count", report.observed_count},
           {"observed_cost", report.observed_cost.fraction_str()},
           {"bound_count", report.bound_count},
           {"bound_cost", report.bound_cost.fraction_str()},
           {"within_bound", report.within_bound}};
  if (report.bounded_rule_regime) out["bounded_rule_regime"] = *report.bounded_rule_regime;
  return out;
}

json query_json(const ContextName& context, const Atom& atom, const QueryOutcome& outcome,
                const Mcs& system) {
  json q{{"context", context},
         {"atom", atom},
         {"mode", outcome.mode == QueryMode::kBrave ? "brave" : "cautious"},
         {"entailed", outcome.entailed},
         {"witness", outcome.witness ? belief_state_json(system, *outcome.witness)
                                     : json(nullptr)}};
  if (outcome.vacuous) q["vacuous"] = true;
  return q;
}

void write_ledger_jsonl(std::ostream& os, const CostLedger& ledger) {
  for (const auto& rec : ledger.snapshot()) {
    const json line{{"seq", rec.seq},
                    {"context", rec.context},
                    {"kb_size", rec.kb_size},
                    {"cost", rec.cost.fraction_str()},
                    {"phase", rec.phase}};
    os << line.dump() << "\n";
  }
}

}  // namespace mcs
