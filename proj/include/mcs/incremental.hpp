#pragma once

#include <functional>

#include "mcs/supports.hpp"

namespace mcs {

/// Loop state of the incremental reasoner, exposed to observers after each
/// iteration. Pointers stay valid for the duration of the callback only.
struct IncrementalStep {
  std::size_t iteration = 0;
  const Fragment* done = nullptr;
  const BeliefState* partial = nullptr;
  LedgerSummary delta;        // charges of this iteration
  std::set<RuleId> selected;  // the support processed this iteration
};

using IncrementalObserver = std::function<void(const IncrementalStep&)>;

/// Extends the grounded equilibrium of `done` to one of `done + delta`.
/// Recomputes only the contexts owning rules in the dependency closure of the
/// newly valid contexts (plus the new rules' own targets); referenced
/// rule-free contexts outside the previously evaluated region are seeded once
/// with an empty knowledge base. Everything else keeps its belief set without
/// a new charge.
BeliefState extend_equilibrium(const Mcs& system, const Fragment& done,
                               const BeliefState& s_done, const Fragment& delta,
                               CostLedger& ledger);

/// From-scratch grounded equilibrium of a fragment over its relevant contexts
/// (rule owners plus body-referenced contexts); all other components stay
/// empty. Computed through the plain whole-system fixpoint on a restricted
/// copy, a path disjoint from the incremental evaluator, so it serves as the
/// independent recomputation when auditing the incremental loop invariant.
BeliefState fragment_equilibrium(const Mcs& system, const Fragment& fragment,
                                 CostLedger& ledger);

enum class SelectionPolicy { kDeclaredOrder, kCheapest };

/// Sum of max_cost over the contexts an extension by `candidate` would have
/// to invoke (recomputed rule owners plus fresh seeds). Requires a stratified
/// system.
Rational fragment_cost_estimate(const Mcs& system, const Fragment& done,
                                const Fragment& candidate);

struct IncrementalResult {
  bool entailed = false;
  std::size_t iterations = 0;
  bool fell_back = false;  // supports cap hit; answered by the plain fixpoint
  LedgerSummary ledger;    // charges of this run only
};

/// Support-by-support construction of partial equilibria with early exit as
/// soon as the query atom appears. Requires a definite system; agrees with
/// entailment in the full grounded equilibrium.
IncrementalResult incremental_query(const Mcs& system, const ContextName& context,
                                    const Atom& atom, SelectionPolicy selection,
                                    CostLedger& ledger,
                                    std::size_t supports_cap = kDefaultSupportsCap,
                                    const IncrementalObserver& observer = {});

}  // namespace mcs
