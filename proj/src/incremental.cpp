#include "mcs/incremental.hpp"

#include <algorithm>
#include <map>

namespace mcs {

namespace {

void require_definite(const Mcs& system, const char* what) {
  const auto check = check_definite(system);
  if (!check) {
    throw ContractViolation(std::string(what) + " requires a definite system");
  }
}

void require_same_base(const Mcs& system, const Fragment& fragment, const char* what) {
  if (&fragment.base() != &system) {
    throw InputError(std::string(what) + ": fragment belongs to a different base system");
  }
}

BeliefSet single_belief_set(const Context& ctx, const KnowledgeBase& kb,
                            CostLedger& ledger, std::string_view phase) {
  auto accepted = invoke_acc(ctx, kb, ledger, phase);
  if (accepted.size() != 1) {
    throw ContractViolation("context '" + ctx.name() +
                            "' declared monotone but did not return a single belief set");
  }
  return std::move(accepted.front());
}

/// Contexts already holding meaningful belief sets in the grounded
/// equilibrium of `done`: its rule owners plus everything its rules
/// reference.
std::set<std::size_t> evaluated_region(const Fragment& done) {
  std::set<std::size_t> out = done.valid_indices();
  const auto referenced = done.referenced_indices();
  out.insert(referenced.begin(), referenced.end());
  return out;
}

struct ExtensionPlan {
  Fragment diff;      // delta minus done
  Fragment combined;  // done plus delta
  Fragment closure;   // dependency closure of the newly valid contexts, plus diff
  std::set<std::size_t> recompute;     // rule owners to (re)invoke
  std::set<std::size_t> fresh_leaves;  // referenced, never evaluated, rule-free here
};

ExtensionPlan plan_extension(const Mcs& system, const Fragment& done, const Fragment& delta) {
  ExtensionPlan plan{Fragment::empty(system), Fragment::empty(system),
                     Fragment::empty(system), {}, {}};
  plan.diff = delta.difference(done);
  plan.combined = done.united(delta);
  // The new rules participate themselves; the dependency closure only covers
  // contexts downstream of the newly valid ones.
  plan.closure =
      precisely_dependent_fragment(plan.combined, plan.diff.valid_contexts())
          .united(plan.diff);
  plan.recompute = plan.closure.valid_indices();

  const auto prior = evaluated_region(done);
  for (const auto ref : plan.closure.referenced_indices()) {
    if (!plan.recompute.count(ref) && !prior.count(ref)) plan.fresh_leaves.insert(ref);
  }
  return plan;
}

/// Topological order of the recompute set under the combined fragment's
/// dependency edges; contexts stuck in cycles follow in index order.
std::vector<std::size_t> evaluation_order(const Mcs& system, const Fragment& combined,
                                          const std::set<std::size_t>& recompute) {
  std::map<std::size_t, std::set<std::size_t>> deps;  // target -> feeders within recompute
  for (const auto t : recompute) deps[t] = {};
  for (std::size_t i = 0; i < system.size(); ++i) {
    for (const auto& id : combined.rules_of(i)) {
      if (!recompute.count(i)) continue;
      const BridgeRule& rule = system.rule(id);
      for (const auto& body : rule.positive_body) {
        const std::size_t ref = system.index_of(body.context);
        if (recompute.count(ref) && ref != i) deps[i].insert(ref);
      }
    }
  }
  std::vector<std::size_t> order;
  std::set<std::size_t> placed;
  bool progress = true;
  while (progress) {
    progress = false;
    for (const auto& [ctx, feeders] : deps) {
      if (placed.count(ctx)) continue;
      const bool ready = std::all_of(feeders.begin(), feeders.end(),
                                     [&](std::size_t f) { return placed.count(f) > 0; });
      if (ready) {
        order.push_back(ctx);
        placed.insert(ctx);
        progress = true;
      }
    }
  }
  for (const auto& [ctx, feeders] : deps) {
    if (!placed.count(ctx)) order.push_back(ctx);  // cyclic remainder
  }
  return order;
}

KnowledgeBase induced_kb_for(const Mcs& system, const Fragment& fragment, std::size_t ctx,
                             const BeliefState& state) {
  KnowledgeBase kb;
  for (const auto& id : fragment.rules_of(ctx)) {
    const BridgeRule& rule = system.rule(id);
    if (rule_satisfied(system, rule, state)) kb.insert(rule.head);
  }
  return kb;
}

/// Chaotic iteration over `order` with in-sweep propagation; a context is
/// only invoked when its induced knowledge base moved past `last_kb`.
void evaluate_restricted(const Mcs& system, const Fragment& rules,
                         const std::vector<std::size_t>& order,
                         std::map<std::size_t, std::optional<KnowledgeBase>>& last_kb,
                         BeliefState& state, CostLedger& ledger, std::string_view phase) {
  for (;;) {
    bool any_change = false;
    for (const auto i : order) {
      KnowledgeBase kb = induced_kb_for(system, rules, i, state);
      auto& last = last_kb[i];
      if (last && *last == kb) continue;
      BeliefSet next = single_belief_set(system.context(i), kb, ledger, phase);
      if (!std::includes(next.begin(), next.end(), state[i].begin(), state[i].end())) {
        throw ContractViolation("context '" + system.context(i).name() +
                                "' shrank its belief set during an extension");
      }
      last = std::move(kb);
      state[i] = std::move(next);
      any_change = true;
    }
    if (!any_change) break;
  }
}

}  // namespace

BeliefState extend_equilibrium(const Mcs& system, const Fragment& done,
                               const BeliefState& s_done, const Fragment& delta,
                               CostLedger& ledger) {
  require_definite(system, "equilibrium extension");
  require_same_base(system, done, "equilibrium extension");
  require_same_base(system, delta, "equilibrium extension");
  if (s_done.size() != system.size()) {
    throw ContractViolation("belief state arity does not match the system");
  }

  const ExtensionPlan plan = plan_extension(system, done, delta);
  if (plan.diff.empty_rules()) return s_done;

  BeliefState state = s_done;
  for (const auto leaf : plan.fresh_leaves) {
    state[leaf] = single_belief_set(system.context(leaf), {}, ledger, "incremental:seed");
  }

  // Knowledge bases the previously evaluated rule owners were last invoked
  // with; unchanged kbs are not re-charged.
  std::map<std::size_t, std::optional<KnowledgeBase>> last_kb;
  const auto prior = evaluated_region(done);
  for (const auto i : plan.recompute) {
    if (prior.count(i)) {
      last_kb[i] = induced_kb_for(system, done, i, s_done);
    } else {
      last_kb[i] = std::nullopt;
    }
  }

  const auto order = evaluation_order(system, plan.combined, plan.recompute);
  evaluate_restricted(system, plan.combined, order, last_kb, state, ledger,
                      "incremental:extend");
  return state;
}

BeliefState fragment_equilibrium(const Mcs& system, const Fragment& fragment,
                                 CostLedger& ledger) {
  require_definite(system, "fragment equilibrium");
  require_same_base(system, fragment, "fragment equilibrium");

  std::set<std::size_t> relevant = fragment.valid_indices();
  const auto referenced = fragment.referenced_indices();
  relevant.insert(referenced.begin(), referenced.end());

  // Deliberately routed through the whole-system fixpoint on a restricted
  // copy, then masked to the relevant region: a computation path disjoint
  // from the incremental evaluator, so it can serve as its oracle. The extra
  // invocations of irrelevant contexts land on the caller's ledger.
  const Mcs restricted = restrict_to(system, fragment);
  const BeliefState full = grounded_equilibrium_fixpoint(restricted, ledger).state;
  BeliefState state(system.size());
  for (const auto i : relevant) state[i] = full[i];
  return state;
}

Rational fragment_cost_estimate(const Mcs& system, const Fragment& done,
                                const Fragment& candidate) {
  require_same_base(system, done, "fragment cost estimate");
  require_same_base(system, candidate, "fragment cost estimate");
  if (!stratify(system).ok()) {
    throw ContractViolation("fragment cost estimate requires a stratified system");
  }
  const ExtensionPlan plan = plan_extension(system, done, candidate);
  if (plan.diff.empty_rules()) return Rational(0);

  Rational total(0);
  for (const auto i : plan.recompute) total += system.context(i).logic().max_cost();
  for (const auto i : plan.fresh_leaves) total += system.context(i).logic().max_cost();
  return total;
}

IncrementalResult incremental_query(const Mcs& system, const ContextName& context,
                                    const Atom& atom, SelectionPolicy selection,
                                    CostLedger& ledger, std::size_t supports_cap,
                                    const IncrementalObserver& observer) {
  require_definite(system, "incremental reasoning");
  const std::size_t target = system.index_of(context);
  if (atom.empty()) throw InputError("empty query atom");

  const std::size_t start = ledger.mark();
  IncrementalResult result;

  // A rule-free query context keeps its empty-kb belief set in every
  // equilibrium; one invocation decides the query.
  if (system.context(target).bridge_rules().empty()) {
    const BeliefSet beliefs =
        single_belief_set(system.context(target), {}, ledger, "incremental:seed");
    result.entailed = beliefs.count(atom) > 0;
    result.ledger = ledger.since(start);
    return result;
  }

  SupportSet support_set;
  try {
    support_set = supports_of(system, context, supports_cap);
  } catch (const GuardExceeded&) {
    ledger.record("", 0, Rational(0), "incremental:supports-cap-fallback");
    const auto fixpoint = grounded_equilibrium_fixpoint(system, ledger);
    result.fell_back = true;
    result.entailed = fixpoint.state[target].count(atom) > 0;
    result.ledger = ledger.since(start);
    return result;
  }

  // The cheapest policy needs the stratified cost estimate; cyclic definite
  // systems fall back to declared order.
  const bool use_estimate =
      selection == SelectionPolicy::kCheapest && stratify(system).ok();

  Fragment done = Fragment::empty(system);
  BeliefState state(system.size());
  std::vector<Fragment> remaining = support_set.supports;

  while (!remaining.empty()) {
    std::size_t pick = 0;
    if (use_estimate) {
      Rational best = fragment_cost_estimate(system, done, remaining[0]);
      for (std::size_t k = 1; k < remaining.size(); ++k) {
        const Rational estimate = fragment_cost_estimate(system, done, remaining[k]);
        if (estimate < best) {
          best = estimate;
          pick = k;
        }
      }
    }
    Fragment delta = std::move(remaining[pick]);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));

    const std::size_t iteration_start = ledger.mark();
    state = extend_equilibrium(system, done, state, delta, ledger);
    done = done.united(delta);
    ++result.iterations;

    if (observer) {
      IncrementalStep step;
      step.iteration = result.iterations;
      step.done = &done;
      step.partial = &state;
      step.delta = ledger.since(iteration_start);
      step.selected = delta.all_rule_ids();
      observer(step);
    }

    if (state[target].count(atom)) {
      result.entailed = true;
      break;
    }
  }

  result.ledger = ledger.since(start);
  return result;
}

}  // namespace mcs
