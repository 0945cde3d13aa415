#include "mcs/bounds.hpp"

namespace mcs {

bool is_uniform_cost(const Mcs& system) {
  for (const auto& ctx : system.contexts()) {
    if (!ctx.logic().constant_cost()) return false;
    if (ctx.logic().max_cost() != Rational(1)) return false;
  }
  return true;
}

std::string_view bound_algorithm_name(BoundAlgorithm algorithm) {
  switch (algorithm) {
    case BoundAlgorithm::kGeneral:
      return "general";
    case BoundAlgorithm::kFixpoint:
      return "fixpoint";
    case BoundAlgorithm::kStratified:
      return "stratified";
    case BoundAlgorithm::kIncrementalRelevant:
      return "incremental-relevant";
  }
  return "unknown";
}

std::optional<BoundAlgorithm> bound_algorithm_from(std::string_view name) {
  if (name == "general") return BoundAlgorithm::kGeneral;
  if (name == "fixpoint") return BoundAlgorithm::kFixpoint;
  if (name == "stratified") return BoundAlgorithm::kStratified;
  if (name == "incremental-relevant") return BoundAlgorithm::kIncrementalRelevant;
  return std::nullopt;
}

BoundReport bound_report(const Mcs& system, const LedgerSummary& run,
                         BoundAlgorithm algorithm,
                         const std::optional<ContextName>& query_context,
                         std::size_t supports_cap, std::optional<unsigned> rule_factor_k) {
  BoundReport report;
  report.algorithm = std::string(bound_algorithm_name(algorithm));
  report.n = system.size();
  report.m = system.rule_count();
  report.c = Rational(0);
  for (const auto& ctx : system.contexts()) {
    report.c = std::max(report.c, ctx.logic().max_cost());
  }

  switch (algorithm) {
    case BoundAlgorithm::kGeneral: {
      if (report.m >= 48) throw InputError("2^m bound overflows for m >= 48");
      report.bound_count = report.n * (std::size_t(1) << report.m);
      break;
    }
    case BoundAlgorithm::kFixpoint:
      report.bound_count = report.n * (report.m + 1);
      break;
    case BoundAlgorithm::kStratified:
      report.bound_count = report.n;
      break;
    case BoundAlgorithm::kIncrementalRelevant: {
      if (!query_context) {
        throw InputError("incremental-relevant bound needs the query context");
      }
      const auto support_set = supports_of(system, *query_context, supports_cap);
      report.bound_count =
          support_set.supporting_contexts.size() * support_set.supporting_rules.size();
      break;
    }
  }

  report.observed_count = run.count;
  report.observed_cost = run.total;
  report.bound_cost = Rational(static_cast<std::int64_t>(report.bound_count)) * report.c;
  report.within_bound = report.observed_count <= report.bound_count &&
                        report.observed_cost <= report.bound_cost;
  if (rule_factor_k) {
    report.bounded_rule_regime = report.m <= *rule_factor_k * report.n;
  }
  return report;
}

}  // namespace mcs
