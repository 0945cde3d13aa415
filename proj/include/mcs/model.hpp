#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string_view>
#include <utility>
#include <vector>

#include "mcs/ledger.hpp"
#include "mcs/logic.hpp"
#include "mcs/types.hpp"

namespace mcs {

/// One cross-context body literal (c : p).
struct BodyAtom {
  ContextName context;
  Atom atom;

  auto operator<=>(const BodyAtom&) const = default;
};

/// An import rule: when every positive body literal is present in the
/// referenced belief set and every negative one is absent, the head joins the
/// target context's knowledge base.
struct BridgeRule {
  RuleId id;
  ContextName target;
  Atom head;
  std::set<BodyAtom> positive_body;
  std::set<BodyAtom> negative_body;  // disjoint from positive_body

  bool operator==(const BridgeRule&) const = default;
};

class Context {
 public:
  Context(ContextName name, std::shared_ptr<const LogicSuite> logic,
          std::vector<BridgeRule> bridge_rules = {});

  const ContextName& name() const { return name_; }
  const LogicSuite& logic() const { return *logic_; }
  const std::shared_ptr<const LogicSuite>& logic_ptr() const { return logic_; }
  const std::vector<BridgeRule>& bridge_rules() const { return bridge_rules_; }

 private:
  ContextName name_;
  std::shared_ptr<const LogicSuite> logic_;
  std::vector<BridgeRule> bridge_rules_;
};

/// A validated multi-context system. Immutable after construction: context
/// names are unique, every context reference resolves, rule ids are unique
/// across the whole system, and rule bodies are positive/negative disjoint.
class Mcs {
 public:
  explicit Mcs(std::vector<Context> contexts);

  std::size_t size() const { return contexts_.size(); }
  const Context& context(std::size_t i) const { return contexts_.at(i); }
  const std::vector<Context>& contexts() const { return contexts_; }

  std::optional<std::size_t> find(const ContextName& name) const;
  /// Throws InputError when the name does not resolve.
  std::size_t index_of(const ContextName& name) const;

  bool has_rule(const RuleId& id) const { return rules_.count(id) > 0; }
  /// Throws InputError on unknown id.
  const BridgeRule& rule(const RuleId& id) const;
  /// Index of the context owning the rule.
  std::size_t rule_owner(const RuleId& id) const;

  std::size_t rule_count() const { return rules_.size(); }
  std::set<RuleId> rule_ids() const;

  void for_each_rule(
      const std::function<void(std::size_t owner, const BridgeRule&)>& fn) const;

 private:
  std::vector<Context> contexts_;
  std::map<ContextName, std::size_t> by_name_;
  std::map<RuleId, std::pair<std::size_t, std::size_t>> rules_;  // id -> (ctx, pos)
};

/// One belief set per context, aligned with the owning system's context
/// order. Set operations act componentwise.
class BeliefState {
 public:
  BeliefState() = default;
  explicit BeliefState(std::size_t size) : sets_(size) {}

  std::size_t size() const { return sets_.size(); }
  BeliefSet& operator[](std::size_t i) { return sets_.at(i); }
  const BeliefSet& operator[](std::size_t i) const { return sets_.at(i); }

  bool operator==(const BeliefState&) const = default;
  auto operator<=>(const BeliefState&) const = default;

  bool componentwise_subset(const BeliefState& other) const;
  static BeliefState componentwise_union(const BeliefState& a, const BeliefState& b);

 private:
  std::vector<BeliefSet> sets_;
};

/// Per-context subsets of a base system's bridge-rule ids. Logic suites are
/// shared with the base, never copied; fragment set operations are exact set
/// operations on rule ids.
class Fragment {
 public:
  static Fragment empty(const Mcs& base);
  static Fragment full(const Mcs& base);
  /// Throws InputError on ids unknown to the base.
  static Fragment of(const Mcs& base, const std::set<RuleId>& ids);

  const Mcs& base() const { return *base_; }
  bool same_base(const Fragment& other) const { return base_ == other.base_; }

  void add(const RuleId& id);
  bool contains(const RuleId& id) const;
  const std::set<RuleId>& rules_of(std::size_t ctx_index) const {
    return rule_ids_.at(ctx_index);
  }
  std::set<RuleId> all_rule_ids() const;
  std::size_t rule_count() const;
  bool empty_rules() const { return rule_count() == 0; }

  /// Contexts owning at least one rule of this fragment.
  std::set<ContextName> valid_contexts() const;
  std::set<std::size_t> valid_indices() const;

  /// Contexts referenced by the bodies of this fragment's rules.
  std::set<std::size_t> referenced_indices() const;

  Fragment united(const Fragment& other) const;
  Fragment difference(const Fragment& other) const;
  bool subfragment_of(const Fragment& other) const;

  bool operator==(const Fragment& other) const;

 private:
  explicit Fragment(const Mcs& base);

  const Mcs* base_ = nullptr;
  std::vector<std::set<RuleId>> rule_ids_;
};

// Spec-facing spellings of the fragment algebra.
Fragment fragment_union(const Fragment& a, const Fragment& b);
Fragment fragment_difference(const Fragment& a, const Fragment& b);
bool is_subfragment(const Fragment& a, const Fragment& b);
std::set<ContextName> valid_contexts(const Fragment& f);

/// True iff every positive body pair (c, p) has p in state[c] and every
/// negative pair has p absent.
bool rule_satisfied(const Mcs& system, const BridgeRule& rule, const BeliefState& state);

/// Per context: heads of its rules satisfied in the state, aligned with the
/// system's context order.
std::vector<KnowledgeBase> induced_knowledge_bases(const Mcs& system,
                                                   const BeliefState& state);

/// Per context: heads of the guessed rules it owns. Throws InputError on
/// unknown rule ids.
std::vector<KnowledgeBase> knowledge_bases_from_guess(const Mcs& system,
                                                      const std::set<RuleId>& guessed);

/// Ids of all rules satisfied in the state.
std::set<RuleId> satisfied_rules(const Mcs& system, const BeliefState& state);

/// The single charging point: every semantic-operator invocation goes through
/// here and appends exactly one ledger record (context, kb size, cost, phase).
std::vector<BeliefSet> invoke_acc(const Context& context, const KnowledgeBase& kb,
                                  CostLedger& ledger, std::string_view phase);

/// Equilibrium test per the induced knowledge bases; charges one invocation
/// per context. A context whose suite accepts nothing for its induced kb
/// makes the answer false rather than an error.
bool is_equilibrium(const Mcs& system, const BeliefState& state, CostLedger& ledger);

/// A copy of the base system with bridge rules restricted to the fragment.
Mcs restrict_to(const Mcs& system, const Fragment& fragment);

}  // namespace mcs
