#pragma once

#include <map>
#include <string>
#include <vector>

#include "mcs/rational.hpp"
#include "mcs/types.hpp"

namespace mcs {

/// Semantic interface of a context: which belief sets are acceptable for a
/// knowledge base, and what a single invocation costs.
class LogicSuite {
 public:
  virtual ~LogicSuite() = default;

  /// Acceptable belief sets for kb, sorted and deduplicated. An empty result
  /// means no belief set is acceptable (local inconsistency).
  virtual std::vector<BeliefSet> acc(const KnowledgeBase& kb) const = 0;

  virtual Rational cost(const KnowledgeBase& kb) const = 0;

  /// Supremum of cost() over the suite's knowledge-base domain.
  virtual Rational max_cost() const = 0;

  /// Declared monotone: acc() is a singleton for every kb and the singleton
  /// grows with the knowledge base.
  virtual bool monotone() const = 0;

  /// True when cost() does not depend on the knowledge base.
  virtual bool constant_cost() const = 0;

  virtual std::string kind() const = 0;
};

struct HornClause {
  Atom head;
  std::vector<Atom> body;  // empty body = fact

  bool operator==(const HornClause&) const = default;
};

/// Monotone suite: acc(kb) is the least model of the built-in program with kb
/// added as facts. Always a singleton; constant unit cost.
class HornSuite final : public LogicSuite {
 public:
  HornSuite(std::vector<HornClause> program, Rational unit_cost);

  std::vector<BeliefSet> acc(const KnowledgeBase& kb) const override;
  Rational cost(const KnowledgeBase&) const override { return unit_cost_; }
  Rational max_cost() const override { return unit_cost_; }
  bool monotone() const override { return true; }
  bool constant_cost() const override { return true; }
  std::string kind() const override { return "horn"; }

  const std::vector<HornClause>& program() const { return program_; }
  Rational unit_cost() const { return unit_cost_; }

 private:
  std::vector<HornClause> program_;
  Rational unit_cost_;
};

enum class TableDefault {
  kInconsistent,    // unmapped kb -> no acceptable belief set
  kEmptyBeliefSet,  // unmapped kb -> { {} }
};

/// Finite, explicitly enumerated semantics. Lookup is by set equality of the
/// knowledge base; unmapped knowledge bases follow the declared default.
/// Monotonicity is established by an exhaustive check over the entries at
/// construction time, never merely declared.
class TableSuite final : public LogicSuite {
 public:
  using EntryMap = std::map<KnowledgeBase, std::vector<BeliefSet>>;

  TableSuite(EntryMap entries, TableDefault default_behavior, Rational unit_cost);

  std::vector<BeliefSet> acc(const KnowledgeBase& kb) const override;
  Rational cost(const KnowledgeBase&) const override { return unit_cost_; }
  Rational max_cost() const override { return unit_cost_; }
  bool monotone() const override { return monotone_; }
  bool constant_cost() const override { return true; }
  std::string kind() const override { return "table"; }

  const EntryMap& entries() const { return entries_; }
  TableDefault default_behavior() const { return default_; }
  Rational unit_cost() const { return unit_cost_; }

 private:
  EntryMap entries_;
  TableDefault default_;
  Rational unit_cost_;
  bool monotone_;
};

std::vector<BeliefSet> horn_acc(const HornSuite& suite, const KnowledgeBase& kb);
std::vector<BeliefSet> table_acc(const TableSuite& suite, const KnowledgeBase& kb);

/// True iff every entry maps to a singleton and the singletons grow along
/// every kb-inclusion pair in the table.
bool verify_monotone(const TableSuite::EntryMap& entries);
bool verify_monotone(const TableSuite& suite);

}  // namespace mcs
