#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mcs/model.hpp"
#include "mcs/solvers.hpp"

namespace mcs {

inline constexpr std::size_t kDefaultSupportsCap = 256;
inline constexpr std::size_t kDefaultJustificationRuleCap = 12;

/// Heads of the context's bridge rules.
AtomSet input_signature(const Context& context);

/// All minimal rule-id sets covering the input signature with exactly one
/// rule per head literal. A rule-free context has one empty support.
std::vector<std::set<RuleId>> immediate_rule_supports(const Context& context);

struct SupportSet {
  std::vector<Fragment> supports;             // deterministic enumeration order
  std::set<ContextName> supporting_contexts;  // union of valid contexts
  std::set<RuleId> supporting_rules;          // union of rule ids
};

/// Enumerates every support of the context by recursive choice of immediate
/// rule supports down the body-reference closure. Requires a definite system;
/// throws GuardExceeded past `cap` supports.
SupportSet supports_of(const Mcs& system, const ContextName& context,
                       std::size_t cap = kDefaultSupportsCap);

/// Independent re-check of the support conditions: the root and every
/// body-referenced context carry exactly one rule per signature head, and no
/// other context carries any rule.
bool is_support(const Mcs& system, const ContextName& context, const Fragment& fragment);

/// The fragment's grounded equilibrium reproduces the given context's belief
/// set without exceeding any other, and no proper subfragment does. Requires
/// `equilibrium` to be the system's grounded equilibrium.
bool is_justification(const Mcs& system, const BeliefState& equilibrium,
                      const ContextName& context, const Fragment& fragment,
                      CostLedger& ledger,
                      std::size_t max_rules = kDefaultJustificationRuleCap);

/// All justifications of the context's belief set, by exhaustive enumeration
/// over rule subsets (guarded).
std::vector<Fragment> find_justifications(const Mcs& system, const BeliefState& equilibrium,
                                          const ContextName& context, CostLedger& ledger,
                                          std::size_t max_rules = kDefaultJustificationRuleCap);

struct Prop3Report {
  bool holds = false;
  std::optional<std::string> counterexample;
};

/// For every context: each justification of its equilibrium belief set is
/// contained in some support and all its rules are satisfied in the
/// equilibrium.
Prop3Report check_prop3(const Mcs& system, CostLedger& ledger,
                        std::size_t max_rules = kDefaultJustificationRuleCap,
                        std::size_t supports_cap = kDefaultSupportsCap);

/// Least fragment of the scope containing every rule referencing the context,
/// closed forward: rules referencing any included rule's target join too.
Fragment dependent_fragment(const Fragment& scope, const ContextName& context);
Fragment dependent_fragment(const Mcs& system, const ContextName& context);

/// Union of the per-context dependent fragments.
Fragment precisely_dependent_fragment(const Fragment& scope,
                                      const std::set<ContextName>& contexts);
Fragment precisely_dependent_fragment(const Mcs& system,
                                      const std::set<ContextName>& contexts);

}  // namespace mcs
