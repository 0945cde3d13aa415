#include "mcs/generate.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace mcs {

std::optional<InstanceKind> instance_kind_from(std::string_view name) {
  if (name == "layered") return InstanceKind::kLayered;
  if (name == "chain") return InstanceKind::kChain;
  if (name == "diamond-forest") return InstanceKind::kDiamondForest;
  if (name == "general-random") return InstanceKind::kGeneralRandom;
  return std::nullopt;
}

std::string_view instance_kind_name(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::kLayered:
      return "layered";
    case InstanceKind::kChain:
      return "chain";
    case InstanceKind::kDiamondForest:
      return "diamond-forest";
    case InstanceKind::kGeneralRandom:
      return "general-random";
  }
  return "unknown";
}

namespace {

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}

  std::size_t below(std::size_t n) {
    return n == 0 ? 0 : std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
  }

  bool chance(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < p;
  }

  /// Five exact steps across [lo, hi].
  Rational cost(const Rational& lo, const Rational& hi) {
    if (lo == hi) return lo;
    const auto k = static_cast<std::int64_t>(below(5));
    return lo + (hi - lo) * Rational(k, 4);
  }

 private:
  std::mt19937_64 rng_;
};

struct Builder {
  explicit Builder(const GeneratorSpec& spec) : spec(spec), draw(spec.seed) {
    if (spec.n_contexts == 0) throw InputError("generator needs at least one context");
    if (spec.negation_rate < 0.0 || spec.negation_rate > 1.0) {
      throw InputError("negation_rate outside [0, 1]");
    }
    if (spec.cost_min.negative() || spec.cost_max < spec.cost_min) {
      throw InputError("malformed cost range");
    }
    if (spec.kind != InstanceKind::kGeneralRandom && spec.negation_rate != 0.0) {
      throw InputError("negation_rate must be 0 for definite instance kinds");
    }
    names.reserve(spec.n_contexts);
    for (std::size_t i = 0; i < spec.n_contexts; ++i) names.push_back("C" + std::to_string(i + 1));
    programs.resize(spec.n_contexts);
    distinct_tables.resize(spec.n_contexts, false);
    announce.resize(spec.n_contexts);
    import_heads.resize(spec.n_contexts);
  }

  const GeneratorSpec& spec;
  Draw draw;
  std::vector<ContextName> names;
  std::vector<std::vector<HornClause>> programs;
  std::vector<bool> distinct_tables;  // general-random: context becomes a table suite
  std::vector<AtomSet> announce;      // atoms a context can expose in beliefs
  std::vector<AtomSet> import_heads;  // heads of rules targeting the context
  std::vector<BridgeRule> rules;

  void add_fact(std::size_t ctx, const Atom& atom) {
    programs[ctx].push_back(HornClause{atom, {}});
    announce[ctx].insert(atom);
  }

  void add_clause(std::size_t ctx, const Atom& head, const Atom& body) {
    programs[ctx].push_back(HornClause{head, {body}});
    announce[ctx].insert(head);
  }

  Atom pick_announced(std::size_t ctx) {
    if (announce[ctx].empty()) return "f" + std::to_string(ctx + 1);
    std::size_t k = draw.below(announce[ctx].size());
    auto it = announce[ctx].begin();
    std::advance(it, k);
    return *it;
  }

  void add_rule(std::size_t target, const Atom& head,
                std::vector<std::pair<std::size_t, Atom>> positive,
                std::vector<std::pair<std::size_t, Atom>> negative = {}) {
    BridgeRule rule;
    rule.id = "g" + std::to_string(rules.size() + 1);
    rule.target = names[target];
    rule.head = head;
    for (const auto& [ctx, atom] : positive) rule.positive_body.insert({names[ctx], atom});
    for (const auto& [ctx, atom] : negative) {
      const BodyAtom body{names[ctx], atom};
      if (!rule.positive_body.count(body)) rule.negative_body.insert(body);
    }
    import_heads[target].insert(head);
    announce[target].insert(head);  // imports can surface in beliefs
    rules.push_back(std::move(rule));
  }

  Mcs finish() {
    std::vector<Context> contexts;
    contexts.reserve(spec.n_contexts);
    for (std::size_t i = 0; i < spec.n_contexts; ++i) {
      std::shared_ptr<const LogicSuite> suite;
      const Rational cost = draw.cost(spec.cost_min, spec.cost_max);
      if (distinct_tables[i]) {
        suite = std::make_shared<TableSuite>(make_table(i), TableDefault::kInconsistent, cost);
      } else {
        suite = std::make_shared<HornSuite>(programs[i], cost);
      }
      std::vector<BridgeRule> own;
      for (const auto& rule : rules) {
        if (rule.target == names[i]) own.push_back(rule);
      }
      contexts.emplace_back(names[i], std::move(suite), std::move(own));
    }
    return Mcs(std::move(contexts));
  }

  /// Entries over every subset of (at most three) import heads, so any
  /// guessed knowledge base resolves. Occasionally multi-valued or gappy to
  /// exercise the non-monotone paths.
  TableSuite::EntryMap make_table(std::size_t ctx) {
    std::vector<Atom> heads(import_heads[ctx].begin(), import_heads[ctx].end());
    if (heads.size() > 3) heads.resize(3);
    const Atom own = "u" + std::to_string(ctx + 1);
    announce[ctx].insert(own);
    TableSuite::EntryMap entries;
    for (std::size_t mask = 0; mask < (std::size_t(1) << heads.size()); ++mask) {
      KnowledgeBase kb;
      for (std::size_t b = 0; b < heads.size(); ++b) {
        if (mask & (std::size_t(1) << b)) kb.insert(heads[b]);
      }
      BeliefSet echo = kb;
      BeliefSet rich = kb;
      rich.insert(own);
      const std::size_t flavor = draw.below(10);
      if (flavor < 4) {
        entries[kb] = {echo};
      } else if (flavor < 7) {
        entries[kb] = {rich};
      } else if (flavor < 9) {
        entries[kb] = {echo, rich};
      } else {
        entries[kb] = {};  // locally inconsistent on this input
      }
    }
    return entries;
  }
};

Mcs generate_chain(Builder& b) {
  const auto& spec = b.spec;
  if (spec.n_contexts == 1 && spec.n_rules > 0) {
    throw InputError("a single-context chain cannot place bridge rules");
  }
  b.add_fact(0, "a1");
  for (std::size_t i = 1; i < spec.n_contexts; ++i) {
    b.add_clause(i, "b" + std::to_string(i + 1), "in" + std::to_string(i + 1));
  }
  for (std::size_t j = 0; j < spec.n_rules; ++j) {
    const std::size_t target = 1 + (j % (spec.n_contexts - 1));
    const Atom head = j < spec.n_contexts - 1 ? "in" + std::to_string(target + 1)
                                              : "x" + std::to_string(j + 1);
    b.add_rule(target, head, {{target - 1, b.pick_announced(target - 1)}});
  }
  return b.finish();
}

Mcs generate_layered(Builder& b) {
  const auto& spec = b.spec;
  const auto layers = static_cast<std::size_t>(
      std::ceil(std::sqrt(static_cast<double>(spec.n_contexts))));
  std::vector<std::size_t> layer_of(spec.n_contexts);
  for (std::size_t i = 0; i < spec.n_contexts; ++i) {
    layer_of[i] = i * layers / spec.n_contexts;
  }
  std::vector<std::size_t> upper;  // contexts that may own rules
  for (std::size_t i = 0; i < spec.n_contexts; ++i) {
    if (layer_of[i] > 0) upper.push_back(i);
  }
  if (upper.empty() && spec.n_rules > 0) {
    throw InputError("layered instance too small to place bridge rules");
  }
  for (std::size_t i = 0; i < spec.n_contexts; ++i) {
    b.add_fact(i, "f" + std::to_string(i + 1));
  }
  for (std::size_t j = 0; j < spec.n_rules; ++j) {
    const std::size_t target = upper[b.draw.below(upper.size())];
    std::vector<std::size_t> below;
    for (std::size_t i = 0; i < spec.n_contexts; ++i) {
      if (layer_of[i] < layer_of[target]) below.push_back(i);
    }
    const std::size_t source = below[b.draw.below(below.size())];
    Atom head;
    if (!b.import_heads[target].empty() && b.draw.chance(0.25)) {
      head = *b.import_heads[target].begin();  // shared heads: multiple rule choices
    } else {
      head = "h" + std::to_string(j + 1);
    }
    std::vector<std::pair<std::size_t, Atom>> body = {{source, b.pick_announced(source)}};
    if (below.size() > 1 && b.draw.chance(0.3)) {
      const std::size_t extra = below[b.draw.below(below.size())];
      body.emplace_back(extra, b.pick_announced(extra));
    }
    b.add_rule(target, head, std::move(body));
    if (b.draw.chance(0.4)) {
      b.add_clause(target, "d" + std::to_string(j + 1), head);
    }
  }
  return b.finish();
}

Mcs generate_diamond_forest(Builder& b) {
  const auto& spec = b.spec;
  if (spec.n_contexts < 4 && spec.n_rules > 0) {
    throw InputError("diamond-forest needs at least four contexts per diamond");
  }
  const std::size_t diamonds = spec.n_contexts / 4;
  for (std::size_t i = 0; i < spec.n_contexts; ++i) {
    b.add_fact(i, "f" + std::to_string(i + 1));
  }
  std::size_t placed = 0;
  for (std::size_t d = 0; d < diamonds && placed < spec.n_rules; ++d) {
    const std::size_t s = 4 * d;
    const std::size_t a = s + 1;
    const std::size_t mid = s + 2;
    const std::size_t t = s + 3;
    const Atom src = "f" + std::to_string(s + 1);
    struct Edge {
      std::size_t target;
      Atom head;
      std::size_t source;
      Atom body;
    };
    const Edge edges[4] = {
        {a, "l" + std::to_string(d + 1), s, src},
        {mid, "r" + std::to_string(d + 1), s, src},
        {t, "x" + std::to_string(d + 1), a, "l" + std::to_string(d + 1)},
        {t, "x" + std::to_string(d + 1), mid, "r" + std::to_string(d + 1)},
    };
    for (const auto& e : edges) {
      if (placed >= spec.n_rules) break;
      b.add_rule(e.target, e.head, {{e.source, e.body}});
      ++placed;
    }
  }
  // leftover rules widen the diamonds with extra alternatives
  while (placed < spec.n_rules && diamonds > 0) {
    const std::size_t d = placed % diamonds;
    const std::size_t s = 4 * d;
    b.add_rule(s + 3, "x" + std::to_string(d + 1), {{s, "f" + std::to_string(s + 1)}});
    ++placed;
  }
  return b.finish();
}

Mcs generate_general(Builder& b) {
  const auto& spec = b.spec;
  for (std::size_t i = 0; i < spec.n_contexts; ++i) {
    if (spec.negation_rate > 0.0 && b.draw.chance(0.3)) {
      b.distinct_tables[i] = true;  // table entries are built after the rules
      b.announce[i].insert("u" + std::to_string(i + 1));
    } else {
      b.add_fact(i, "f" + std::to_string(i + 1));
      if (b.draw.chance(0.4)) {
        b.add_clause(i, "d" + std::to_string(i + 1), "f" + std::to_string(i + 1));
      }
    }
  }
  for (std::size_t j = 0; j < spec.n_rules; ++j) {
    const std::size_t target = b.draw.below(spec.n_contexts);
    Atom head;
    if (!b.import_heads[target].empty() && b.draw.chance(0.25)) {
      head = *b.import_heads[target].begin();
    } else {
      head = "h" + std::to_string(j + 1);
    }
    std::vector<std::pair<std::size_t, Atom>> positive;
    std::vector<std::pair<std::size_t, Atom>> negative;
    const std::size_t body_len = b.draw.below(3);
    for (std::size_t k = 0; k < body_len; ++k) {
      const std::size_t source = b.draw.below(spec.n_contexts);
      const Atom atom = b.pick_announced(source);
      if (b.draw.chance(spec.negation_rate)) {
        negative.emplace_back(source, atom);
      } else {
        positive.emplace_back(source, atom);
      }
    }
    b.add_rule(target, head, std::move(positive), std::move(negative));
  }
  return b.finish();
}

}  // namespace

Mcs generate(const GeneratorSpec& spec) {
  Builder builder(spec);
  switch (spec.kind) {
    case InstanceKind::kChain:
      return generate_chain(builder);
    case InstanceKind::kLayered:
      return generate_layered(builder);
    case InstanceKind::kDiamondForest:
      return generate_diamond_forest(builder);
    case InstanceKind::kGeneralRandom:
      return generate_general(builder);
  }
  throw InputError("unknown instance kind");
}

}  // namespace mcs
