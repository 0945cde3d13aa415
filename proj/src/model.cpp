#include "mcs/model.hpp"

#include <algorithm>
#include <sstream>

namespace mcs {

Context::Context(ContextName name, std::shared_ptr<const LogicSuite> logic,
                 std::vector<BridgeRule> bridge_rules)
    : name_(std::move(name)), logic_(std::move(logic)), bridge_rules_(std::move(bridge_rules)) {
  if (name_.empty()) throw ValidationError("context with empty name");
  if (!logic_) throw ValidationError("context '" + name_ + "' without a logic suite");
  for (const auto& rule : bridge_rules_) {
    if (rule.target != name_) {
      throw ValidationError("rule '" + rule.id + "' targets '" + rule.target +
                            "' but lives in context '" + name_ + "'");
    }
  }
}

Mcs::Mcs(std::vector<Context> contexts) : contexts_(std::move(contexts)) {
  for (std::size_t i = 0; i < contexts_.size(); ++i) {
    const auto& name = contexts_[i].name();
    if (!by_name_.emplace(name, i).second) {
      throw ValidationError("duplicate context name '" + name + "'");
    }
  }
  for (std::size_t i = 0; i < contexts_.size(); ++i) {
    const auto& rules = contexts_[i].bridge_rules();
    for (std::size_t k = 0; k < rules.size(); ++k) {
      const BridgeRule& rule = rules[k];
      if (rule.id.empty()) throw ValidationError("bridge rule without an id");
      if (rule.head.empty()) throw ValidationError("rule '" + rule.id + "' with empty head");
      if (!rules_.emplace(rule.id, std::make_pair(i, k)).second) {
        throw ValidationError("duplicate rule id '" + rule.id + "'");
      }
      for (const auto& body : rule.positive_body) {
        if (!by_name_.count(body.context)) {
          throw ValidationError("rule '" + rule.id + "': unresolved context '" +
                                body.context + "'");
        }
        if (rule.negative_body.count(body)) {
          throw ValidationError("rule '" + rule.id + "': literal (" + body.context + " : " +
                                body.atom + ") occurs both positive and negative");
        }
      }
      for (const auto& body : rule.negative_body) {
        if (!by_name_.count(body.context)) {
          throw ValidationError("rule '" + rule.id + "': unresolved context '" +
                                body.context + "'");
        }
      }
    }
  }
}

std::optional<std::size_t> Mcs::find(const ContextName& name) const {
  const auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

std::size_t Mcs::index_of(const ContextName& name) const {
  const auto idx = find(name);
  if (!idx) throw InputError("unknown context '" + name + "'");
  return *idx;
}

const BridgeRule& Mcs::rule(const RuleId& id) const {
  const auto it = rules_.find(id);
  if (it == rules_.end()) throw InputError("unknown rule id '" + id + "'");
  return contexts_[it->second.first].bridge_rules()[it->second.second];
}

std::size_t Mcs::rule_owner(const RuleId& id) const {
  const auto it = rules_.find(id);
  if (it == rules_.end()) throw InputError("unknown rule id '" + id + "'");
  return it->second.first;
}

std::set<RuleId> Mcs::rule_ids() const {
  std::set<RuleId> out;
  for (const auto& [id, where] : rules_) out.insert(id);
  return out;
}

void Mcs::for_each_rule(
    const std::function<void(std::size_t, const BridgeRule&)>& fn) const {
  for (std::size_t i = 0; i < contexts_.size(); ++i) {
    for (const auto& rule : contexts_[i].bridge_rules()) fn(i, rule);
  }
}

bool BeliefState::componentwise_subset(const BeliefState& other) const {
  if (sets_.size() != other.sets_.size()) return false;
  for (std::size_t i = 0; i < sets_.size(); ++i) {
    if (!std::includes(other.sets_[i].begin(), other.sets_[i].end(), sets_[i].begin(),
                       sets_[i].end())) {
      return false;
    }
  }
  return true;
}

BeliefState BeliefState::componentwise_union(const BeliefState& a, const BeliefState& b) {
  if (a.size() != b.size()) throw InputError("belief states of different arity");
  BeliefState out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[i] = a[i];
    out[i].insert(b[i].begin(), b[i].end());
  }
  return out;
}

Fragment::Fragment(const Mcs& base) : base_(&base), rule_ids_(base.size()) {}

Fragment Fragment::empty(const Mcs& base) { return Fragment(base); }

Fragment Fragment::full(const Mcs& base) {
  Fragment f(base);
  base.for_each_rule([&](std::size_t owner, const BridgeRule& rule) {
    f.rule_ids_[owner].insert(rule.id);
  });
  return f;
}

Fragment Fragment::of(const Mcs& base, const std::set<RuleId>& ids) {
  Fragment f(base);
  for (const auto& id : ids) f.add(id);
  return f;
}

void Fragment::add(const RuleId& id) {
  rule_ids_.at(base_->rule_owner(id)).insert(id);
}

bool Fragment::contains(const RuleId& id) const {
  if (!base_->has_rule(id)) return false;
  return rule_ids_.at(base_->rule_owner(id)).count(id) > 0;
}

std::set<RuleId> Fragment::all_rule_ids() const {
  std::set<RuleId> out;
  for (const auto& per_ctx : rule_ids_) out.insert(per_ctx.begin(), per_ctx.end());
  return out;
}

std::size_t Fragment::rule_count() const {
  std::size_t n = 0;
  for (const auto& per_ctx : rule_ids_) n += per_ctx.size();
  return n;
}

std::set<ContextName> Fragment::valid_contexts() const {
  std::set<ContextName> out;
  for (std::size_t i = 0; i < rule_ids_.size(); ++i) {
    if (!rule_ids_[i].empty()) out.insert(base_->context(i).name());
  }
  return out;
}

std::set<std::size_t> Fragment::valid_indices() const {
  std::set<std::size_t> out;
  for (std::size_t i = 0; i < rule_ids_.size(); ++i) {
    if (!rule_ids_[i].empty()) out.insert(i);
  }
  return out;
}

std::set<std::size_t> Fragment::referenced_indices() const {
  std::set<std::size_t> out;
  for (const auto& per_ctx : rule_ids_) {
    for (const auto& id : per_ctx) {
      const BridgeRule& rule = base_->rule(id);
      for (const auto& body : rule.positive_body) out.insert(base_->index_of(body.context));
      for (const auto& body : rule.negative_body) out.insert(base_->index_of(body.context));
    }
  }
  return out;
}

Fragment Fragment::united(const Fragment& other) const {
  if (!same_base(other)) throw InputError("fragment union across different base systems");
  Fragment out = *this;
  for (std::size_t i = 0; i < rule_ids_.size(); ++i) {
    out.rule_ids_[i].insert(other.rule_ids_[i].begin(), other.rule_ids_[i].end());
  }
  return out;
}

Fragment Fragment::difference(const Fragment& other) const {
  if (!same_base(other)) throw InputError("fragment difference across different base systems");
  Fragment out(*base_);
  for (std::size_t i = 0; i < rule_ids_.size(); ++i) {
    std::set_difference(rule_ids_[i].begin(), rule_ids_[i].end(), other.rule_ids_[i].begin(),
                        other.rule_ids_[i].end(),
                        std::inserter(out.rule_ids_[i], out.rule_ids_[i].end()));
  }
  return out;
}

bool Fragment::subfragment_of(const Fragment& other) const {
  if (!same_base(other)) throw InputError("fragment inclusion across different base systems");
  for (std::size_t i = 0; i < rule_ids_.size(); ++i) {
    if (!std::includes(other.rule_ids_[i].begin(), other.rule_ids_[i].end(),
                       rule_ids_[i].begin(), rule_ids_[i].end())) {
      return false;
    }
  }
  return true;
}

bool Fragment::operator==(const Fragment& other) const {
  return base_ == other.base_ && rule_ids_ == other.rule_ids_;
}

Fragment fragment_union(const Fragment& a, const Fragment& b) { return a.united(b); }

Fragment fragment_difference(const Fragment& a, const Fragment& b) {
  return a.difference(b);
}

bool is_subfragment(const Fragment& a, const Fragment& b) { return a.subfragment_of(b); }

std::set<ContextName> valid_contexts(const Fragment& f) { return f.valid_contexts(); }

bool rule_satisfied(const Mcs& system, const BridgeRule& rule, const BeliefState& state) {
  if (state.size() != system.size()) {
    throw ValidationError("belief state arity does not match the system");
  }
  for (const auto& body : rule.positive_body) {
    if (!state[system.index_of(body.context)].count(body.atom)) return false;
  }
  for (const auto& body : rule.negative_body) {
    if (state[system.index_of(body.context)].count(body.atom)) return false;
  }
  return true;
}

std::vector<KnowledgeBase> induced_knowledge_bases(const Mcs& system,
                                                   const BeliefState& state) {
  std::vector<KnowledgeBase> kbs(system.size());
  system.for_each_rule([&](std::size_t owner, const BridgeRule& rule) {
    if (rule_satisfied(system, rule, state)) kbs[owner].insert(rule.head);
  });
  return kbs;
}

std::vector<KnowledgeBase> knowledge_bases_from_guess(const Mcs& system,
                                                      const std::set<RuleId>& guessed) {
  std::vector<KnowledgeBase> kbs(system.size());
  for (const auto& id : guessed) {
    const BridgeRule& rule = system.rule(id);  // throws InputError on unknown ids
    kbs[system.rule_owner(id)].insert(rule.head);
  }
  return kbs;
}

std::set<RuleId> satisfied_rules(const Mcs& system, const BeliefState& state) {
  std::set<RuleId> out;
  system.for_each_rule([&](std::size_t, const BridgeRule& rule) {
    if (rule_satisfied(system, rule, state)) out.insert(rule.id);
  });
  return out;
}

std::vector<BeliefSet> invoke_acc(const Context& context, const KnowledgeBase& kb,
                                  CostLedger& ledger, std::string_view phase) {
  ledger.record(context.name(), kb.size(), context.logic().cost(kb), std::string(phase));
  return context.logic().acc(kb);
}

bool is_equilibrium(const Mcs& system, const BeliefState& state, CostLedger& ledger) {
  const auto kbs = induced_knowledge_bases(system, state);
  bool ok = true;
  for (std::size_t i = 0; i < system.size(); ++i) {
    const auto accepted = invoke_acc(system.context(i), kbs[i], ledger, "equilibrium-check");
    if (std::find(accepted.begin(), accepted.end(), state[i]) == accepted.end()) {
      ok = false;  // keep invoking: exactly one charge per context
    }
  }
  return ok;
}

Mcs restrict_to(const Mcs& system, const Fragment& fragment) {
  if (&fragment.base() != &system) {
    throw InputError("fragment restriction applied to a different base system");
  }
  std::vector<Context> contexts;
  contexts.reserve(system.size());
  for (std::size_t i = 0; i < system.size(); ++i) {
    const Context& ctx = system.context(i);
    std::vector<BridgeRule> kept;
    for (const auto& rule : ctx.bridge_rules()) {
      if (fragment.contains(rule.id)) kept.push_back(rule);
    }
    contexts.emplace_back(ctx.name(), ctx.logic_ptr(), std::move(kept));
  }
  return Mcs(std::move(contexts));
}

}  // namespace mcs
