#include "mcs/solvers.hpp"

#include <algorithm>
#include <sstream>

namespace mcs {

namespace {

std::string join_names(const std::vector<ContextName>& names, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += sep;
    out += names[i];
  }
  return out;
}

BeliefSet single_belief_set(const Context& ctx, const KnowledgeBase& kb,
                            CostLedger& ledger, std::string_view phase) {
  auto accepted = invoke_acc(ctx, kb, ledger, phase);
  if (accepted.size() != 1) {
    std::ostringstream msg;
    msg << "context '" << ctx.name() << "' declared monotone but returned "
        << accepted.size() << " belief sets for a knowledge base of size " << kb.size();
    throw ContractViolation(msg.str());
  }
  return std::move(accepted.front());
}

}  // namespace

DefiniteCheck check_definite(const Mcs& system) {
  DefiniteCheck out;
  out.definite = true;
  for (std::size_t i = 0; i < system.size(); ++i) {
    const Context& ctx = system.context(i);
    if (!ctx.logic().monotone()) {
      out.definite = false;
      out.violations.push_back("context '" + ctx.name() + "': suite is not monotone");
    }
    for (const auto& rule : ctx.bridge_rules()) {
      if (!rule.negative_body.empty()) {
        out.definite = false;
        out.violations.push_back("rule '" + rule.id + "': negative body literal");
      }
    }
  }
  return out;
}

SolveOutcome solve_general(const Mcs& system, EnumerationMode mode, CostLedger& ledger,
                           std::size_t max_rules) {
  const std::size_t start = ledger.mark();
  const std::set<RuleId> id_set = system.rule_ids();
  const std::vector<RuleId> rules(id_set.begin(), id_set.end());  // lexicographic
  const std::size_t m = rules.size();
  if (m > max_rules) {
    std::ostringstream msg;
    msg << "general search refused: " << m << " bridge rules exceed the cap of "
        << max_rules << " (2^m subsets)";
    throw GuardExceeded(msg.str());
  }

  const std::size_t n = system.size();
  SolveOutcome out;

  // Subsets by cardinality ascending, ties broken lexicographically on the
  // sorted rule ids; combinations in standard lexicographic index order.
  for (std::size_t k = 0; k <= m && !(mode == EnumerationMode::kFirst && out.consistent);
       ++k) {
    std::vector<std::size_t> pick(k);
    for (std::size_t i = 0; i < k; ++i) pick[i] = i;
    bool more = true;
    while (more) {
      std::set<RuleId> guess;
      for (const auto idx : pick) guess.insert(rules[idx]);

      const auto kbs = knowledge_bases_from_guess(system, guess);
      std::vector<std::vector<BeliefSet>> alternatives(n);
      bool feasible = true;
      for (std::size_t i = 0; i < n; ++i) {
        alternatives[i] = invoke_acc(system.context(i), kbs[i], ledger, "general");
        if (alternatives[i].empty()) feasible = false;
      }

      if (feasible) {
        std::vector<std::size_t> choice(n, 0);
        bool more_states = true;
        while (more_states) {
          BeliefState state(n);
          for (std::size_t i = 0; i < n; ++i) state[i] = alternatives[i][choice[i]];
          if (satisfied_rules(system, state) == guess) {
            out.equilibria.push_back(state);
            out.consistent = true;
            if (mode == EnumerationMode::kFirst) {
              out.ledger = ledger.since(start);
              return out;
            }
          }
          // odometer over per-context alternatives
          more_states = false;
          for (std::size_t i = n; i-- > 0;) {
            if (++choice[i] < alternatives[i].size()) {
              more_states = true;
              break;
            }
            choice[i] = 0;
          }
          if (n == 0) break;
        }
      }

      // next k-combination in lexicographic order
      more = false;
      for (std::size_t i = k; i-- > 0;) {
        if (pick[i] + (k - i) < m) {
          ++pick[i];
          for (std::size_t j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
          more = true;
          break;
        }
      }
    }
  }

  out.consistent = !out.equilibria.empty();
  out.ledger = ledger.since(start);
  return out;
}

namespace {

QueryOutcome query_impl(const Mcs& system, const ContextName& context, const Atom& atom,
                        QueryMode mode, CostLedger& ledger, std::size_t max_rules) {
  const std::size_t idx = system.index_of(context);
  if (atom.empty()) throw InputError("empty query atom");

  QueryOutcome out;
  out.mode = mode;

  if (check_definite(system)) {
    // Single equilibrium: brave and cautious collapse.
    BeliefState ge = stratify(system).ok()
                         ? grounded_equilibrium_stratified(system, ledger)
                         : grounded_equilibrium_fixpoint(system, ledger).state;
    out.entailed = ge[idx].count(atom) > 0;
    if (out.entailed) out.witness = std::move(ge);
    return out;
  }

  const auto solved = solve_general(system, EnumerationMode::kAll, ledger, max_rules);
  if (mode == QueryMode::kBrave) {
    for (const auto& eq : solved.equilibria) {
      if (eq[idx].count(atom)) {
        out.entailed = true;
        out.witness = eq;
        break;
      }
    }
    return out;
  }
  if (solved.equilibria.empty()) {
    out.entailed = true;  // empty universal quantification, flagged as vacuous
    out.vacuous = true;
    return out;
  }
  out.entailed = std::all_of(solved.equilibria.begin(), solved.equilibria.end(),
                             [&](const BeliefState& eq) { return eq[idx].count(atom) > 0; });
  if (out.entailed) out.witness = solved.equilibria.front();
  return out;
}

}  // namespace

QueryOutcome brave(const Mcs& system, const ContextName& context, const Atom& atom,
                   CostLedger& ledger, std::size_t max_rules) {
  return query_impl(system, context, atom, QueryMode::kBrave, ledger, max_rules);
}

QueryOutcome cautious(const Mcs& system, const ContextName& context, const Atom& atom,
                      CostLedger& ledger, std::size_t max_rules) {
  return query_impl(system, context, atom, QueryMode::kCautious, ledger, max_rules);
}

FixpointResult grounded_equilibrium_fixpoint(const Mcs& system, CostLedger& ledger) {
  const auto definite = check_definite(system);
  if (!definite) {
    throw ContractViolation("fixpoint requires a definite system: " +
                            join_names(definite.violations, "; "));
  }

  const std::size_t n = system.size();
  std::vector<KnowledgeBase> kb(n);
  std::vector<std::optional<KnowledgeBase>> last_invoked(n);
  BeliefState state(n);
  FixpointResult result;

  for (;;) {
    ++result.sweeps;
    for (std::size_t i = 0; i < n; ++i) {
      if (last_invoked[i] && *last_invoked[i] == kb[i]) continue;
      BeliefSet next = single_belief_set(system.context(i), kb[i], ledger, "fixpoint");
      ++result.charged_invocations;
      if (!std::includes(next.begin(), next.end(), state[i].begin(), state[i].end())) {
        throw ContractViolation("context '" + system.context(i).name() +
                                "' shrank its belief set under a growing knowledge base");
      }
      last_invoked[i] = kb[i];
      state[i] = std::move(next);
    }

    std::vector<KnowledgeBase> next_kb = kb;
    system.for_each_rule([&](std::size_t owner, const BridgeRule& rule) {
      if (rule_satisfied(system, rule, state)) next_kb[owner].insert(rule.head);
    });
    if (next_kb == kb) break;  // stable kbs imply a stable state
    kb = std::move(next_kb);
  }

  result.raw_invocations = result.sweeps * n;
  result.state = std::move(state);
  return result;
}

StratifyResult stratify(const Mcs& system) {
  const std::size_t n = system.size();
  // deps[i] = contexts referenced by the bodies of i's rules
  std::vector<std::set<std::size_t>> deps(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& rule : system.context(i).bridge_rules()) {
      for (const auto& body : rule.positive_body) deps[i].insert(system.index_of(body.context));
      for (const auto& body : rule.negative_body) deps[i].insert(system.index_of(body.context));
    }
  }

  std::vector<std::size_t> level(n, 0);
  std::vector<int> color(n, 0);  // 0 white, 1 gray, 2 black
  std::vector<std::size_t> stack;
  StratifyResult out;

  // Iterative DFS computing longest dependency paths; a gray hit is a cycle.
  std::function<bool(std::size_t)> visit = [&](std::size_t i) -> bool {
    color[i] = 1;
    stack.push_back(i);
    std::size_t lvl = system.context(i).bridge_rules().empty() ? 0 : 1;
    for (const auto dep : deps[i]) {
      if (color[dep] == 1) {
        const auto at = std::find(stack.begin(), stack.end(), dep);
        for (auto it = at; it != stack.end(); ++it) {
          out.cycle.push_back(system.context(*it).name());
        }
        out.cycle.push_back(system.context(dep).name());
        return false;
      }
      if (color[dep] == 0 && !visit(dep)) return false;
      lvl = std::max(lvl, level[dep] + 1);
    }
    level[i] = lvl;
    color[i] = 2;
    stack.pop_back();
    return true;
  };

  for (std::size_t i = 0; i < n; ++i) {
    if (color[i] == 0 && !visit(i)) return out;
  }

  Stratification strat;
  strat.level = level;
  const std::size_t depth = n == 0 ? 0 : *std::max_element(level.begin(), level.end()) + 1;
  strat.strata.resize(depth);
  for (std::size_t i = 0; i < n; ++i) strat.strata[level[i]].insert(system.context(i).name());
  out.stratification = std::move(strat);
  return out;
}

BeliefState grounded_equilibrium_stratified(const Mcs& system, CostLedger& ledger) {
  if (!check_definite(system)) {
    throw ContractViolation("stratified evaluation requires a definite system");
  }
  const auto strat = stratify(system);
  if (!strat.ok()) {
    throw ContractViolation("stratified evaluation on a cyclic system (cycle: " +
                            join_names(strat.cycle, " -> ") + ")");
  }

  const std::size_t n = system.size();
  const auto& level = strat.stratification->level;
  BeliefState state(n);
  const std::size_t depth = strat.stratification->strata.size();
  for (std::size_t k = 0; k < depth; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (level[i] != k) continue;
      KnowledgeBase kb;
      for (const auto& rule : system.context(i).bridge_rules()) {
        if (rule_satisfied(system, rule, state)) kb.insert(rule.head);
      }
      state[i] = single_belief_set(system.context(i), kb, ledger, "stratified");
    }
  }
  return state;
}

}  // namespace mcs
