#include "mcs/logic.hpp"

#include <algorithm>

namespace mcs {

namespace {

std::vector<BeliefSet> normalized(std::vector<BeliefSet> sets) {
  std::sort(sets.begin(), sets.end());
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  return sets;
}

}  // namespace

HornSuite::HornSuite(std::vector<HornClause> program, Rational unit_cost)
    : program_(std::move(program)), unit_cost_(unit_cost) {
  if (unit_cost_.negative()) {
    throw ValidationError("horn suite with negative unit cost");
  }
  for (const auto& clause : program_) {
    if (clause.head.empty()) throw ValidationError("horn clause with empty head");
  }
}

std::vector<BeliefSet> HornSuite::acc(const KnowledgeBase& kb) const {
  // Forward chaining to the least model; terminates because the atom
  // universe (program atoms plus kb) is finite and the model only grows.
  BeliefSet model = kb;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& clause : program_) {
      if (model.count(clause.head)) continue;
      bool fires = true;
      for (const auto& atom : clause.body) {
        if (!model.count(atom)) {
          fires = false;
          break;
        }
      }
      if (fires) {
        model.insert(clause.head);
        changed = true;
      }
    }
  }
  return {std::move(model)};
}

TableSuite::TableSuite(EntryMap entries, TableDefault default_behavior, Rational unit_cost)
    : entries_(std::move(entries)),
      default_(default_behavior),
      unit_cost_(unit_cost),
      monotone_(false) {
  if (unit_cost_.negative()) {
    throw ValidationError("table suite with negative unit cost");
  }
  for (auto& [kb, sets] : entries_) {
    sets = normalized(std::move(sets));
  }
  monotone_ = verify_monotone(entries_);
}

std::vector<BeliefSet> TableSuite::acc(const KnowledgeBase& kb) const {
  const auto it = entries_.find(kb);
  if (it != entries_.end()) return it->second;
  if (default_ == TableDefault::kEmptyBeliefSet) return {BeliefSet{}};
  return {};
}

std::vector<BeliefSet> horn_acc(const HornSuite& suite, const KnowledgeBase& kb) {
  return suite.acc(kb);
}

std::vector<BeliefSet> table_acc(const TableSuite& suite, const KnowledgeBase& kb) {
  return suite.acc(kb);
}

bool verify_monotone(const TableSuite::EntryMap& entries) {
  for (const auto& [kb, sets] : entries) {
    if (sets.size() != 1) return false;
  }
  for (const auto& [kb_a, sets_a] : entries) {
    for (const auto& [kb_b, sets_b] : entries) {
      const bool a_in_b =
          std::includes(kb_b.begin(), kb_b.end(), kb_a.begin(), kb_a.end());
      if (!a_in_b) continue;
      const BeliefSet& small = sets_a.front();
      const BeliefSet& big = sets_b.front();
      if (!std::includes(big.begin(), big.end(), small.begin(), small.end())) {
        return false;
      }
    }
  }
  return true;
}

bool verify_monotone(const TableSuite& suite) {
  return verify_monotone(suite.entries());
}

}  // namespace mcs
