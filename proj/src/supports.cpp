#include "mcs/supports.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace mcs {

namespace {

void require_definite(const Mcs& system, const char* what) {
  const auto check = check_definite(system);
  if (!check) {
    std::string msg(what);
    msg += " requires a definite system";
    if (!check.violations.empty()) msg += " (" + check.violations.front() + ", ...)";
    throw ContractViolation(msg);
  }
}

std::set<std::size_t> body_context_indices(const Mcs& system, const BridgeRule& rule) {
  std::set<std::size_t> out;
  for (const auto& body : rule.positive_body) out.insert(system.index_of(body.context));
  for (const auto& body : rule.negative_body) out.insert(system.index_of(body.context));
  return out;
}

std::string rule_set_str(const std::set<RuleId>& ids) {
  std::string out = "{";
  for (const auto& id : ids) {
    if (out.size() > 1) out += ", ";
    out += id;
  }
  return out + "}";
}

}  // namespace

AtomSet input_signature(const Context& context) {
  AtomSet out;
  for (const auto& rule : context.bridge_rules()) out.insert(rule.head);
  return out;
}

std::vector<std::set<RuleId>> immediate_rule_supports(const Context& context) {
  // One rule per head literal; the choices multiply across heads.
  std::map<Atom, std::vector<RuleId>> by_head;
  for (const auto& rule : context.bridge_rules()) by_head[rule.head].push_back(rule.id);
  for (auto& [head, ids] : by_head) std::sort(ids.begin(), ids.end());

  std::vector<std::set<RuleId>> out;
  std::vector<const std::vector<RuleId>*> groups;
  for (const auto& [head, ids] : by_head) groups.push_back(&ids);

  std::vector<std::size_t> choice(groups.size(), 0);
  for (;;) {
    std::set<RuleId> support;
    for (std::size_t g = 0; g < groups.size(); ++g) support.insert((*groups[g])[choice[g]]);
    out.push_back(std::move(support));
    bool advanced = false;
    for (std::size_t g = groups.size(); g-- > 0;) {
      if (++choice[g] < groups[g]->size()) {
        advanced = true;
        break;
      }
      choice[g] = 0;
    }
    if (!advanced) break;
  }
  return out;
}

SupportSet supports_of(const Mcs& system, const ContextName& context, std::size_t cap) {
  require_definite(system, "support enumeration");
  const std::size_t root = system.index_of(context);
  const std::size_t n = system.size();

  std::vector<std::optional<std::vector<std::set<RuleId>>>> irs_cache(n);
  auto irs = [&](std::size_t i) -> const std::vector<std::set<RuleId>>& {
    if (!irs_cache[i]) irs_cache[i] = immediate_rule_supports(system.context(i));
    return *irs_cache[i];
  };

  SupportSet out;
  std::map<std::size_t, const std::set<RuleId>*> assignment;

  std::function<void(std::vector<std::size_t>)> descend =
      [&](std::vector<std::size_t> pending) {
        while (!pending.empty() && assignment.count(pending.front())) {
          pending.erase(pending.begin());
        }
        if (pending.empty()) {
          Fragment fragment = Fragment::empty(system);
          for (const auto& [ctx, rules] : assignment) {
            for (const auto& id : *rules) fragment.add(id);
          }
          if (std::find(out.supports.begin(), out.supports.end(), fragment) ==
              out.supports.end()) {
            out.supports.push_back(std::move(fragment));
            if (out.supports.size() > cap) {
              std::ostringstream msg;
              msg << "support enumeration for context '" << context << "' exceeded the cap of "
                  << cap << " supports";
              throw GuardExceeded(msg.str());
            }
          }
          return;
        }
        const std::size_t current = pending.front();
        pending.erase(pending.begin());
        for (const auto& choice : irs(current)) {
          assignment[current] = &choice;
          auto next = pending;
          for (const auto& id : choice) {
            for (const auto ref : body_context_indices(system, system.rule(id))) {
              if (assignment.count(ref)) continue;
              if (std::find(next.begin(), next.end(), ref) == next.end()) next.push_back(ref);
            }
          }
          descend(std::move(next));
          assignment.erase(current);
        }
      };

  descend({root});

  for (const auto& fragment : out.supports) {
    const auto valid = fragment.valid_contexts();
    out.supporting_contexts.insert(valid.begin(), valid.end());
    const auto ids = fragment.all_rule_ids();
    out.supporting_rules.insert(ids.begin(), ids.end());
  }
  return out;
}

bool is_support(const Mcs& system, const ContextName& context, const Fragment& fragment) {
  const std::size_t root = system.index_of(context);
  const std::size_t n = system.size();

  std::set<std::size_t> required = {root};
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& id : fragment.rules_of(i)) {
      const auto refs = body_context_indices(system, system.rule(id));
      required.insert(refs.begin(), refs.end());
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    const auto& rules = fragment.rules_of(i);
    if (!required.count(i)) {
      if (!rules.empty()) return false;  // minimality: removable rules present
      continue;
    }
    // Exactly one rule per head of the full input signature.
    const AtomSet sig = input_signature(system.context(i));
    AtomSet covered;
    for (const auto& id : rules) {
      const auto& head = system.rule(id).head;
      if (!covered.insert(head).second) return false;  // two rules share a head
    }
    if (covered != sig) return false;
  }
  return true;
}

namespace {

/// Shared equilibrium cache for the justification search: fragments keyed by
/// their rule-id sets.
class FragmentEquilibria {
 public:
  explicit FragmentEquilibria(const Mcs& system) : system_(system) {}

  const BeliefState& of(const Fragment& fragment, CostLedger& ledger) {
    const auto key = fragment.all_rule_ids();
    const auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const Mcs restricted = restrict_to(system_, fragment);
    auto state = grounded_equilibrium_fixpoint(restricted, ledger).state;
    return cache_.emplace(key, std::move(state)).first->second;
  }

 private:
  const Mcs& system_;
  std::map<std::set<RuleId>, BeliefState> cache_;
};

bool reproduces_belief_set(FragmentEquilibria& cache, const BeliefState& equilibrium,
                           std::size_t target, const Fragment& fragment,
                           CostLedger& ledger) {
  const BeliefState& sub = cache.of(fragment, ledger);
  // Monotone suites keep sub componentwise below the full equilibrium, so
  // only the target component needs the equality check.
  if (sub[target] != equilibrium[target]) return false;
  return sub.componentwise_subset(equilibrium);
}

}  // namespace

bool is_justification(const Mcs& system, const BeliefState& equilibrium,
                      const ContextName& context, const Fragment& fragment,
                      CostLedger& ledger, std::size_t max_rules) {
  require_definite(system, "justification check");
  if (fragment.rule_count() > max_rules) {
    throw GuardExceeded("justification check beyond the rule guard of " +
                        std::to_string(max_rules));
  }
  const std::size_t target = system.index_of(context);
  FragmentEquilibria cache(system);
  if (!reproduces_belief_set(cache, equilibrium, target, fragment, ledger)) {
    return false;
  }
  // Reproduction is monotone in the rule set, so single-rule removals decide
  // minimality.
  for (const auto& id : fragment.all_rule_ids()) {
    Fragment smaller = fragment.difference(Fragment::of(system, {id}));
    if (reproduces_belief_set(cache, equilibrium, target, smaller, ledger)) {
      return false;
    }
  }
  return true;
}

std::vector<Fragment> find_justifications(const Mcs& system, const BeliefState& equilibrium,
                                          const ContextName& context, CostLedger& ledger,
                                          std::size_t max_rules) {
  require_definite(system, "justification search");
  const std::set<RuleId> id_set = system.rule_ids();
  const std::vector<RuleId> rules(id_set.begin(), id_set.end());
  if (rules.size() > max_rules) {
    throw GuardExceeded("justification search beyond the rule guard of " +
                        std::to_string(max_rules));
  }
  const std::size_t target = system.index_of(context);
  FragmentEquilibria cache(system);

  const std::size_t m = rules.size();
  std::vector<bool> reproduces(std::size_t(1) << m, false);
  for (std::size_t mask = 0; mask < (std::size_t(1) << m); ++mask) {
    std::set<RuleId> ids;
    for (std::size_t b = 0; b < m; ++b) {
      if (mask & (std::size_t(1) << b)) ids.insert(rules[b]);
    }
    reproduces[mask] = reproduces_belief_set(cache, equilibrium, target,
                                             Fragment::of(system, ids), ledger);
  }

  std::vector<Fragment> out;
  for (std::size_t mask = 0; mask < (std::size_t(1) << m); ++mask) {
    if (!reproduces[mask]) continue;
    bool minimal = true;
    for (std::size_t b = 0; b < m && minimal; ++b) {
      if ((mask & (std::size_t(1) << b)) && reproduces[mask & ~(std::size_t(1) << b)]) {
        minimal = false;
      }
    }
    if (minimal) {
      std::set<RuleId> ids;
      for (std::size_t b = 0; b < m; ++b) {
        if (mask & (std::size_t(1) << b)) ids.insert(rules[b]);
      }
      out.push_back(Fragment::of(system, ids));
    }
  }
  return out;
}

Prop3Report check_prop3(const Mcs& system, CostLedger& ledger, std::size_t max_rules,
                        std::size_t supports_cap) {
  require_definite(system, "support/justification audit");
  if (system.rule_count() > max_rules) {
    throw GuardExceeded("support/justification audit beyond the rule guard of " +
                        std::to_string(max_rules));
  }

  Prop3Report report;
  const BeliefState ge = grounded_equilibrium_fixpoint(system, ledger).state;
  for (std::size_t i = 0; i < system.size(); ++i) {
    const auto& name = system.context(i).name();
    const auto justifications = find_justifications(system, ge, name, ledger, max_rules);
    const auto supports = supports_of(system, name, supports_cap);
    for (const auto& justification : justifications) {
      const bool contained =
          std::any_of(supports.supports.begin(), supports.supports.end(),
                      [&](const Fragment& s) { return justification.subfragment_of(s); });
      const auto ids = justification.all_rule_ids();
      const bool satisfied = std::all_of(ids.begin(), ids.end(), [&](const RuleId& id) {
        return rule_satisfied(system, system.rule(id), ge);
      });
      if (!contained || !satisfied) {
        report.holds = false;
        report.counterexample = "context '" + name + "': justification " + rule_set_str(ids) +
                                (!contained ? " lies in no support" : " has unsatisfied rules");
        return report;
      }
    }
  }
  report.holds = true;
  return report;
}

Fragment dependent_fragment(const Fragment& scope, const ContextName& context) {
  const Mcs& system = scope.base();
  Fragment out = Fragment::empty(system);
  std::set<std::size_t> visited;
  std::vector<std::size_t> queue = {system.index_of(context)};
  while (!queue.empty()) {
    const std::size_t current = queue.front();
    queue.erase(queue.begin());
    if (!visited.insert(current).second) continue;
    for (std::size_t i = 0; i < system.size(); ++i) {
      for (const auto& id : scope.rules_of(i)) {
        if (out.contains(id)) continue;
        const BridgeRule& rule = system.rule(id);
        if (body_context_indices(system, rule).count(current)) {
          out.add(id);
          const std::size_t target = system.rule_owner(id);
          if (!visited.count(target)) queue.push_back(target);
        }
      }
    }
  }
  return out;
}

Fragment dependent_fragment(const Mcs& system, const ContextName& context) {
  return dependent_fragment(Fragment::full(system), context);
}

Fragment precisely_dependent_fragment(const Fragment& scope,
                                      const std::set<ContextName>& contexts) {
  Fragment out = Fragment::empty(scope.base());
  for (const auto& name : contexts) {
    out = out.united(dependent_fragment(scope, name));
  }
  return out;
}

Fragment precisely_dependent_fragment(const Mcs& system,
                                      const std::set<ContextName>& contexts) {
  return precisely_dependent_fragment(Fragment::full(system), contexts);
}

}  // namespace mcs
