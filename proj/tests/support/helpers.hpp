#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mcs/generate.hpp"
#include "mcs/model.hpp"

namespace mcs::test {

inline BridgeRule rule(RuleId id, ContextName target, Atom head,
                       std::vector<BodyAtom> positive = {},
                       std::vector<BodyAtom> negative = {}) {
  BridgeRule r;
  r.id = std::move(id);
  r.target = std::move(target);
  r.head = std::move(head);
  r.positive_body.insert(positive.begin(), positive.end());
  r.negative_body.insert(negative.begin(), negative.end());
  return r;
}

inline Context horn_context(ContextName name, std::vector<HornClause> program,
                            std::vector<BridgeRule> rules = {}, Rational cost = Rational(1)) {
  return Context(std::move(name), std::make_shared<HornSuite>(std::move(program), cost),
                 std::move(rules));
}

inline Context table_context(ContextName name, TableSuite::EntryMap entries,
                             std::vector<BridgeRule> rules = {}, Rational cost = Rational(1),
                             TableDefault dflt = TableDefault::kInconsistent) {
  return Context(std::move(name),
                 std::make_shared<TableSuite>(std::move(entries), dflt, cost),
                 std::move(rules));
}

// E1: definite chain. C1 {a.}, C2 {c :- b.}, r1: C2.b <- (C1 : a).
inline Mcs e1(Rational c1_cost = Rational(1), Rational c2_cost = Rational(1)) {
  std::vector<Context> ctxs;
  ctxs.push_back(horn_context("C1", {{"a", {}}}, {}, c1_cost));
  ctxs.push_back(horn_context("C2", {{"c", {"b"}}},
                              {rule("r1", "C2", "b", {{"C1", "a"}})}, c2_cost));
  return Mcs(std::move(ctxs));
}

// E2: even negative loop with two equilibria.
inline Mcs e2() {
  TableSuite::EntryMap t1{{{}, {{}}}, {{"a"}, {{"a"}}}};
  TableSuite::EntryMap t2{{{}, {{}}}, {{"b"}, {{"b"}}}};
  std::vector<Context> ctxs;
  ctxs.push_back(table_context("C1", t1, {rule("r1", "C1", "a", {}, {{"C2", "b"}})}));
  ctxs.push_back(table_context("C2", t2, {rule("r2", "C2", "b", {}, {{"C1", "a"}})}));
  return Mcs(std::move(ctxs));
}

// E3: odd negative loop, no equilibrium.
inline Mcs e3() {
  TableSuite::EntryMap t{{{}, {{}}}, {{"a"}, {{"a"}}}};
  std::vector<Context> ctxs;
  ctxs.push_back(table_context("C1", t, {rule("r1", "C1", "a", {}, {{"C1", "a"}})}));
  return Mcs(std::move(ctxs));
}

// E4: diamond. Two rules share the head x of C3.
inline Mcs e4(Rational c1 = Rational(1), Rational c2 = Rational(1), Rational c3 = Rational(1)) {
  std::vector<Context> ctxs;
  ctxs.push_back(horn_context("C1", {{"a", {}}}, {}, c1));
  ctxs.push_back(horn_context("C2", {{"b", {}}}, {}, c2));
  ctxs.push_back(horn_context("C3", {},
                              {rule("r1", "C3", "x", {{"C1", "a"}}),
                               rule("r2", "C3", "x", {{"C2", "b"}})},
                              c3));
  return Mcs(std::move(ctxs));
}

// E5: three-layer stratified chain.
inline Mcs e5() {
  std::vector<Context> ctxs;
  ctxs.push_back(horn_context("C1", {{"a", {}}}));
  ctxs.push_back(horn_context("C2", {{"b2", {"b"}}}, {rule("r1", "C2", "b", {{"C1", "a"}})}));
  ctxs.push_back(horn_context("C3", {{"c2", {"c"}}}, {rule("r2", "C3", "c", {{"C2", "b2"}})}));
  return Mcs(std::move(ctxs));
}

/// k independent chains of `length` contexts each, uniform cost. Chain j has
/// contexts K<j>_1..K<j>_<length>; the query atom of chain 1's last context
/// is "top1".
inline Mcs chain_family(std::size_t chains, std::size_t length) {
  std::vector<Context> ctxs;
  std::size_t rule_no = 0;
  for (std::size_t j = 1; j <= chains; ++j) {
    const std::string prefix = "K" + std::to_string(j) + "_";
    for (std::size_t i = 1; i <= length; ++i) {
      const std::string name = prefix + std::to_string(i);
      if (i == 1) {
        ctxs.push_back(horn_context(name, {{"base" + std::to_string(j), {}}}));
        continue;
      }
      const std::string prev = prefix + std::to_string(i - 1);
      const Atom prev_out = i == 2 ? "base" + std::to_string(j)
                                   : "out" + std::to_string(j) + "_" + std::to_string(i - 1);
      const Atom in = "in" + std::to_string(j) + "_" + std::to_string(i);
      const Atom out = i == length ? (j == 1 ? Atom("top1") : "top" + std::to_string(j))
                                   : "out" + std::to_string(j) + "_" + std::to_string(i);
      ctxs.push_back(horn_context(
          name, {{out, {in}}},
          {rule("q" + std::to_string(++rule_no), name, in, {{prev, prev_out}})}));
    }
  }
  return Mcs(std::move(ctxs));
}

/// Brute-force least-model oracle: scans all subsets of the atom universe in
/// cardinality order for the unique minimal model containing kb. Independent
/// of the forward-chaining path it checks.
inline std::optional<BeliefSet> least_model_oracle(const std::vector<HornClause>& program,
                                                   const KnowledgeBase& kb) {
  AtomSet universe = kb;
  for (const auto& clause : program) {
    universe.insert(clause.head);
    universe.insert(clause.body.begin(), clause.body.end());
  }
  const std::vector<Atom> atoms(universe.begin(), universe.end());
  if (atoms.size() > 20) return std::nullopt;

  auto is_model = [&](const BeliefSet& candidate) {
    for (const auto& fact : kb) {
      if (!candidate.count(fact)) return false;
    }
    for (const auto& clause : program) {
      bool body_holds = true;
      for (const auto& atom : clause.body) {
        if (!candidate.count(atom)) {
          body_holds = false;
          break;
        }
      }
      if (body_holds && !candidate.count(clause.head)) return false;
    }
    return true;
  };

  std::optional<BeliefSet> best;
  for (std::size_t mask = 0; mask < (std::size_t(1) << atoms.size()); ++mask) {
    BeliefSet candidate;
    for (std::size_t b = 0; b < atoms.size(); ++b) {
      if (mask & (std::size_t(1) << b)) candidate.insert(atoms[b]);
    }
    if (!is_model(candidate)) continue;
    if (!best || candidate.size() < best->size()) best = candidate;
  }
  return best;
}

inline GeneratorSpec definite_spec(InstanceKind kind, std::size_t n, std::size_t m,
                                   std::uint64_t seed) {
  GeneratorSpec spec;
  spec.kind = kind;
  spec.n_contexts = n;
  spec.n_rules = m;
  spec.seed = seed;
  return spec;
}

/// Rotates through the definite generator kinds.
inline Mcs random_definite(std::uint64_t seed, std::size_t n, std::size_t m) {
  static const InstanceKind kinds[] = {InstanceKind::kChain, InstanceKind::kLayered,
                                       InstanceKind::kDiamondForest};
  InstanceKind kind = kinds[seed % 3];
  if (kind == InstanceKind::kDiamondForest && n < 4) kind = InstanceKind::kChain;
  return generate(definite_spec(kind, n, m, seed));
}

}  // namespace mcs::test
