#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mcs/ledger.hpp"
#include "mcs/model.hpp"

namespace mcs {

struct DefiniteCheck {
  bool definite = false;
  std::vector<std::string> violations;  // one line per offending rule or context

  explicit operator bool() const { return definite; }
};

/// Definite: every suite is monotone (table suites pass the exhaustive
/// entry check) and no bridge rule uses negation.
DefiniteCheck check_definite(const Mcs& system);

enum class EnumerationMode { kFirst, kAll };

struct SolveOutcome {
  std::vector<BeliefState> equilibria;
  bool consistent = false;
  LedgerSummary ledger;  // charges of this run only
};

inline constexpr std::size_t kDefaultGeneralRuleCap = 20;

/// Guess-and-check search: enumerates rule subsets by cardinality (ties by
/// rule-id order), builds the guessed knowledge bases, invokes each context
/// once per subset, and accepts a belief state iff the rules satisfied in it
/// are exactly the guess. Multi-valued suites contribute a cartesian product
/// of alternatives. Charges at most n * 2^m invocations.
///
/// Refuses systems with more than max_rules bridge rules (GuardExceeded).
SolveOutcome solve_general(const Mcs& system, EnumerationMode mode, CostLedger& ledger,
                           std::size_t max_rules = kDefaultGeneralRuleCap);

enum class QueryMode { kBrave, kCautious };

struct QueryOutcome {
  bool entailed = false;
  QueryMode mode = QueryMode::kBrave;
  std::optional<BeliefState> witness;
  bool vacuous = false;  // cautious answer over an inconsistent system
};

/// Some equilibrium contains the atom in the queried context's belief set.
QueryOutcome brave(const Mcs& system, const ContextName& context, const Atom& atom,
                   CostLedger& ledger, std::size_t max_rules = kDefaultGeneralRuleCap);

/// Every equilibrium contains it; vacuously true when none exist.
QueryOutcome cautious(const Mcs& system, const ContextName& context, const Atom& atom,
                      CostLedger& ledger, std::size_t max_rules = kDefaultGeneralRuleCap);

struct FixpointResult {
  BeliefState state;
  std::size_t sweeps = 0;               // belief recomputation passes
  std::size_t raw_invocations = 0;      // sweeps * n: what a skip-free run would charge
  std::size_t charged_invocations = 0;  // what actually hit the ledger
};

/// Iterated knowledge-base growth from empty kbs until the belief state is
/// stable. A context whose kb did not change since its last invocation is not
/// re-invoked; its previous belief set is reused without a ledger charge.
/// Requires a definite system.
FixpointResult grounded_equilibrium_fixpoint(const Mcs& system, CostLedger& ledger);

struct Stratification {
  std::vector<std::set<ContextName>> strata;  // stratum 0 = contexts without rules
  std::vector<std::size_t> level;             // per context index
};

struct StratifyResult {
  std::optional<Stratification> stratification;
  std::vector<ContextName> cycle;  // non-empty when cyclic: C1 -> ... -> C1

  bool ok() const { return stratification.has_value(); }
};

/// Compact stratification via longest dependency paths: stratum 0 holds the
/// rule-free contexts, every other context sits one level above the highest
/// context its rule bodies reference. Cyclic systems yield one witness cycle.
StratifyResult stratify(const Mcs& system);

/// One pass over the strata in ascending order, each context invoked exactly
/// once. Requires a definite, stratified system; equals the fixpoint result.
BeliefState grounded_equilibrium_stratified(const Mcs& system, CostLedger& ledger);

}  // namespace mcs
