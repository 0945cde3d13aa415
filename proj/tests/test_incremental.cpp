#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "mcs/incremental.hpp"
#include "support/helpers.hpp"

using namespace mcs;
using namespace mcs::test;

namespace {

BeliefState state_of(std::vector<BeliefSet> sets) {
  BeliefState s(sets.size());
  for (std::size_t i = 0; i < sets.size(); ++i) s[i] = std::move(sets[i]);
  return s;
}

}  // namespace

TEST_CASE("equilibrium extension") {
  CostLedger ledger;

  SUBCASE("contained delta is a no-op without charges") {
    const Mcs m = e5();
    const Fragment done = Fragment::of(m, {"r1"});
    const BeliefState s = state_of({{"a"}, {"b", "b2"}, {}});
    const std::size_t before = ledger.count();
    const auto extended = extend_equilibrium(m, done, s, Fragment::of(m, {"r1"}), ledger);
    CHECK(extended == s);
    CHECK(ledger.count() == before);
  }

  SUBCASE("E5 first extension seeds the source and recomputes C2 only") {
    const Mcs m = e5();
    const auto extended = extend_equilibrium(m, Fragment::empty(m), BeliefState(3),
                                             Fragment::of(m, {"r1"}), ledger);
    CHECK(extended == state_of({{"a"}, {"b", "b2"}, {}}));
  }

  SUBCASE("E4 second extension leaves the target unchanged") {
    const Mcs m = e4();
    const Fragment done = Fragment::of(m, {"r1"});
    BeliefState s = extend_equilibrium(m, Fragment::empty(m), BeliefState(3), done, ledger);
    CHECK(s == state_of({{"a"}, {}, {"x"}}));
    const std::size_t mid = ledger.count();
    s = extend_equilibrium(m, done, s, Fragment::of(m, {"r2"}), ledger);
    CHECK(s == state_of({{"a"}, {"b"}, {"x"}}));  // equals the full equilibrium
    CHECK(ledger.count() - mid == 1);             // C2 seed; C3's kb did not change
    CostLedger scratch;
    CHECK(s == grounded_equilibrium_fixpoint(m, scratch).state);
  }

  SUBCASE("precondition violations") {
    const Mcs m = e5();
    const Mcs other = e5();
    CHECK_THROWS_AS((void)extend_equilibrium(m, Fragment::empty(other), BeliefState(3),
                                             Fragment::empty(m), ledger),
                    InputError);
    CHECK_THROWS_AS((void)extend_equilibrium(e2(), Fragment::empty(e2()), BeliefState(2),
                                             Fragment::empty(e2()), ledger),
                    ContractViolation);
  }
}

TEST_CASE("fragment cost estimate") {
  const Mcs m = e4(Rational(1), Rational(1), Rational(5));
  const Fragment none = Fragment::empty(m);
  const Fragment left = Fragment::of(m, {"r1"});
  const Fragment right = Fragment::of(m, {"r2"});

  CHECK(fragment_cost_estimate(m, left, left) == Rational(0));
  CHECK(fragment_cost_estimate(m, none, left) == Rational(6));   // C1 seed + C3
  CHECK(fragment_cost_estimate(m, left, right) == Rational(6));  // C2 seed + C3

  SUBCASE("requires a stratified system") {
    std::vector<Context> ctxs;
    ctxs.push_back(horn_context("A", {}, {rule("ra", "A", "x", {{"B", "y"}})}));
    ctxs.push_back(horn_context("B", {}, {rule("rb", "B", "y", {{"A", "x"}})}));
    const Mcs cyclic(std::move(ctxs));
    CHECK_THROWS_AS(
        (void)fragment_cost_estimate(cyclic, Fragment::empty(cyclic), Fragment::full(cyclic)),
        ContractViolation);
  }
}

TEST_CASE("incremental query on the fixtures") {
  CostLedger ledger;

  SUBCASE("E4: answered from the first support with a smaller ledger") {
    const Mcs m = e4();
    const auto result = incremental_query(m, "C3", "x", SelectionPolicy::kDeclaredOrder, ledger);
    CHECK(result.entailed);
    CHECK(result.iterations == 1);

    // only C1 and C3 were ever invoked
    for (const auto& rec : ledger.snapshot()) {
      CHECK(rec.context != "C2");
    }

    CostLedger full;
    (void)grounded_equilibrium_fixpoint(m, full);
    CHECK(result.ledger.count < full.count());
  }

  SUBCASE("E1: derived and missing atoms") {
    const Mcs m = e1();
    CHECK(incremental_query(m, "C2", "c", SelectionPolicy::kDeclaredOrder, ledger).entailed);
    const auto miss = incremental_query(m, "C2", "z", SelectionPolicy::kDeclaredOrder, ledger);
    CHECK_FALSE(miss.entailed);
    CHECK(miss.iterations == 1);  // the single support was exhausted
  }

  SUBCASE("rule-free query context costs at most one invocation") {
    const Mcs m = e1();
    const std::size_t before = ledger.count();
    const auto hit = incremental_query(m, "C1", "a", SelectionPolicy::kDeclaredOrder, ledger);
    CHECK(hit.entailed);
    CHECK(ledger.count() - before == 1);
    const auto miss = incremental_query(m, "C1", "zz", SelectionPolicy::kDeclaredOrder, ledger);
    CHECK_FALSE(miss.entailed);
  }

  SUBCASE("supports cap falls back to the plain fixpoint with a warning record") {
    const Mcs m = e4();
    CostLedger capped;
    const auto result =
        incremental_query(m, "C3", "x", SelectionPolicy::kDeclaredOrder, capped, 1);
    CHECK(result.entailed);
    CHECK(result.fell_back);
    const auto records = capped.snapshot();
    REQUIRE_FALSE(records.empty());
    CHECK(records.front().phase == "incremental:supports-cap-fallback");
    CHECK(records.front().cost == Rational(0));
  }
}

TEST_CASE("incremental agrees with full-equilibrium entailment") {
  for (std::uint64_t seed = 800; seed < 880; ++seed) {
    const Mcs m = random_definite(seed, 2 + seed % 4, 1 + seed % 7);
    CostLedger scratch;
    const auto ge = grounded_equilibrium_fixpoint(m, scratch).state;

    std::vector<std::pair<ContextName, Atom>> queries = {{m.context(0).name(), "nosuch"}};
    m.for_each_rule([&](std::size_t, const BridgeRule& r) {
      queries.emplace_back(r.target, r.head);
    });
    std::mt19937_64 rng(seed);
    if (queries.size() > 4) queries.resize(4);

    for (const auto& [ctx, atom] : queries) {
      const bool expected = ge[m.index_of(ctx)].count(atom) > 0;
      for (const auto policy : {SelectionPolicy::kDeclaredOrder, SelectionPolicy::kCheapest}) {
        CostLedger ledger;
        const auto result = incremental_query(m, ctx, atom, policy, ledger);
        INFO("seed ", seed, " ctx ", ctx, " atom ", atom);
        CHECK(result.entailed == expected);
      }
    }
  }
}

TEST_CASE("loop invariant: partial state equals the fragment equilibrium of done") {
  for (std::uint64_t seed = 900; seed < 920; ++seed) {
    const Mcs m = random_definite(seed, 3 + seed % 3, 2 + seed % 6);
    ContextName query_ctx;
    Atom query_atom = "nosuch";  // forces a full sweep over all supports
    for (std::size_t i = m.size(); i-- > 0;) {
      if (!m.context(i).bridge_rules().empty()) {
        query_ctx = m.context(i).name();
        break;
      }
    }
    if (query_ctx.empty()) continue;

    CostLedger ledger;
    std::size_t steps = 0;
    incremental_query(m, query_ctx, query_atom, SelectionPolicy::kDeclaredOrder, ledger,
                      kDefaultSupportsCap, [&](const IncrementalStep& step) {
                        ++steps;
                        CostLedger scratch;
                        const auto from_scratch =
                            fragment_equilibrium(m, *step.done, scratch);
                        CHECK(*step.partial == from_scratch);
                      });
    CHECK(steps > 0);
  }
}

TEST_CASE("partial states grow monotonically") {
  for (std::uint64_t seed = 930; seed < 945; ++seed) {
    const Mcs m = random_definite(seed, 3 + seed % 3, 2 + seed % 5);
    ContextName query_ctx;
    for (std::size_t i = m.size(); i-- > 0;) {
      if (!m.context(i).bridge_rules().empty()) {
        query_ctx = m.context(i).name();
        break;
      }
    }
    if (query_ctx.empty()) continue;
    CostLedger ledger;
    BeliefState previous(m.size());
    incremental_query(m, query_ctx, "nosuch", SelectionPolicy::kDeclaredOrder, ledger,
                      kDefaultSupportsCap, [&](const IncrementalStep& step) {
                        CHECK(previous.componentwise_subset(*step.partial));
                        previous = *step.partial;
                      });
  }
}

TEST_CASE("cost dominance on independent chains") {
  for (std::size_t chains = 2; chains <= 5; ++chains) {
    const Mcs m = chain_family(chains, 4);
    const ContextName query_ctx = "K1_4";

    CostLedger incremental_ledger;
    const auto result = incremental_query(m, query_ctx, "top1", SelectionPolicy::kDeclaredOrder,
                                          incremental_ledger);
    CHECK(result.entailed);

    CostLedger fixpoint_ledger;
    (void)grounded_equilibrium_fixpoint(m, fixpoint_ledger);

    CHECK(incremental_ledger.total() < fixpoint_ledger.total());
    CHECK(incremental_ledger.count() <= 4 + 1);  // chain length + 1
    CHECK(fixpoint_ledger.count() >= chains * 4);
  }
}

TEST_CASE("cheapest-first does not cost more when it wins early") {
  // Two alternative feeds into the goal: the expensive branch is declared
  // first, so declared order pays for it while cheapest dodges it.
  std::vector<Context> ctxs;
  ctxs.push_back(horn_context("Cheap", {{"a", {}}}, {}, Rational(1)));
  ctxs.push_back(horn_context("Costly", {{"b", {}}}, {}, Rational(10)));
  ctxs.push_back(horn_context("Goal", {},
                              {rule("r1", "Goal", "x", {{"Costly", "b"}}),
                               rule("r2", "Goal", "x", {{"Cheap", "a"}})},
                              Rational(1)));
  const Mcs m(std::move(ctxs));

  CostLedger declared;
  CHECK(incremental_query(m, "Goal", "x", SelectionPolicy::kDeclaredOrder, declared).entailed);
  CostLedger cheapest;
  CHECK(incremental_query(m, "Goal", "x", SelectionPolicy::kCheapest, cheapest).entailed);

  CHECK(cheapest.total() <= declared.total());
  CHECK(cheapest.total() == Rational(2));    // Cheap seed + Goal
  CHECK(declared.total() == Rational(11));  // Costly seed + Goal
}

TEST_CASE("cyclic definite systems converge under extension") {
  // A and B feed each other; the cycle is kick-started from C0. The
  // restricted evaluator has to sweep the cyclic recompute set to stability.
  std::vector<Context> ctxs;
  ctxs.push_back(horn_context("C0", {{"seed", {}}}));
  ctxs.push_back(horn_context("A", {},
                              {rule("ra", "A", "x", {{"C0", "seed"}}),
                               rule("rax", "A", "x2", {{"B", "y"}})}));
  ctxs.push_back(horn_context("B", {}, {rule("rb", "B", "y", {{"A", "x"}})}));
  const Mcs m(std::move(ctxs));
  REQUIRE(check_definite(m).definite);
  REQUIRE_FALSE(stratify(m).ok());

  CostLedger lf;
  const auto ge = grounded_equilibrium_fixpoint(m, lf).state;
  CHECK(ge == state_of({{"seed"}, {"x", "x2"}, {"y"}}));

  CostLedger li;
  const auto result = incremental_query(m, "A", "x2", SelectionPolicy::kDeclaredOrder, li);
  CHECK(result.entailed);

  CostLedger lc;
  CHECK(fragment_equilibrium(m, Fragment::full(m), lc) == ge);
}

TEST_CASE("two-level support structures extend in any order") {
  std::vector<Context> ctxs;
  ctxs.push_back(horn_context("L1", {{"f1", {}}}));
  ctxs.push_back(horn_context("L2", {{"f2", {}}}));
  ctxs.push_back(horn_context("M1", {},
                              {rule("m1a", "M1", "m", {{"L1", "f1"}}),
                               rule("m1b", "M1", "m", {{"L2", "f2"}})}));
  ctxs.push_back(horn_context("M2", {}, {rule("m2a", "M2", "m2", {{"L1", "f1"}})}));
  ctxs.push_back(horn_context("T", {},
                              {rule("t1", "T", "g", {{"M1", "m"}}),
                               rule("t2", "T", "g", {{"M2", "m2"}})}));
  const Mcs m(std::move(ctxs));

  const auto ss = supports_of(m, "T");
  REQUIRE(ss.supports.size() == 3);  // two M1 alternatives under t1, one under t2
  CHECK(ss.supporting_contexts == std::set<ContextName>{"M1", "M2", "T"});
  CHECK(ss.supporting_rules == std::set<RuleId>{"m1a", "m1b", "m2a", "t1", "t2"});
  for (const auto& support : ss.supports) {
    CHECK(is_support(m, "T", support));
  }

  // process the supports in every permutation; the partial state must match
  // the from-scratch fragment equilibrium after each extension
  std::vector<std::size_t> order = {0, 1, 2};
  std::sort(order.begin(), order.end());
  do {
    Fragment done = Fragment::empty(m);
    BeliefState state(m.size());
    CostLedger ledger;
    for (const auto pick : order) {
      state = extend_equilibrium(m, done, state, ss.supports[pick], ledger);
      done = done.united(ss.supports[pick]);
      CostLedger scratch;
      CHECK(state == fragment_equilibrium(m, done, scratch));
    }
    CHECK(state[m.index_of("T")].count("g") == 1);
  } while (std::next_permutation(order.begin(), order.end()));
}

TEST_CASE("deep justification needs the whole chain") {
  CostLedger ledger;
  const Mcs m = e5();
  const auto ge = grounded_equilibrium_fixpoint(m, ledger).state;
  const auto justs = find_justifications(m, ge, "C3", ledger);
  REQUIRE(justs.size() == 1);
  CHECK(justs.front().all_rule_ids() == std::set<RuleId>{"r1", "r2"});
  CHECK(is_justification(m, ge, "C3", justs.front(), ledger));
  CHECK_FALSE(is_justification(m, ge, "C3", Fragment::of(m, {"r2"}), ledger));
}

TEST_CASE("cheapest policy stays usable on cyclic definite systems") {
  std::vector<Context> ctxs;
  ctxs.push_back(horn_context("A", {{"seed", {}}},
                              {rule("ra", "A", "x", {{"B", "y"}})}));
  ctxs.push_back(horn_context("B", {}, {rule("rb", "B", "y", {{"A", "x"}})}));
  const Mcs m(std::move(ctxs));
  REQUIRE(check_definite(m).definite);
  REQUIRE_FALSE(stratify(m).ok());

  CostLedger ledger;
  const auto result = incremental_query(m, "A", "seed", SelectionPolicy::kCheapest, ledger);
  CHECK(result.entailed);  // falls back to declared order internally
}
