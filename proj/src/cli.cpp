#include "mcs/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "mcs/bounds.hpp"
#include "mcs/generate.hpp"
#include "mcs/incremental.hpp"
#include "mcs/json_io.hpp"
#include "mcs/parse.hpp"

namespace mcs {

namespace {

constexpr int kExitTrue = 0;
constexpr int kExitFalse = 1;
constexpr int kExitUsage = 2;
constexpr int kExitGuard = 3;

struct CommonOpts {
  bool json = false;
  std::string ledger_path;
  bool report_bounds = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_flag("--json", opts.json, "emit JSON instead of text");
  cmd->add_option("--ledger", opts.ledger_path, "write the run's ledger as JSON lines");
  cmd->add_flag("--report-bounds", opts.report_bounds,
                "include the worst-case bound report for the algorithm that ran");
}

std::size_t supports_cap_from_env(std::ostream& err) {
  const char* raw = std::getenv("MCS_SUPPORTS_CAP");
  if (!raw) return kDefaultSupportsCap;
  char* end = nullptr;
  const unsigned long long value = std::strtoull(raw, &end, 10);
  if (end == raw || *end != '\0' || value == 0) {
    err << "warning: ignoring malformed MCS_SUPPORTS_CAP='" << raw << "'\n";
    return kDefaultSupportsCap;
  }
  return static_cast<std::size_t>(value);
}

Mcs load(const std::string& path) {
  auto parsed = parse_mcs_file(path);
  if (!parsed.ok()) {
    std::string msg = "cannot load '" + path + "':";
    for (const auto& diag : parsed.diagnostics) msg += "\n  " + diag.render();
    throw InputError(msg);
  }
  return std::move(*parsed.mcs);
}

std::string belief_state_text(const Mcs& system, const BeliefState& state) {
  std::ostringstream os;
  for (std::size_t i = 0; i < system.size(); ++i) {
    if (i) os << " ";
    os << system.context(i).name() << "={";
    bool first = true;
    for (const auto& atom : state[i]) {
      os << (first ? "" : ",") << atom;
      first = false;
    }
    os << "}";
  }
  return os.str();
}

void maybe_write_ledger(const CommonOpts& opts, const CostLedger& ledger, std::ostream& err) {
  if (opts.ledger_path.empty()) return;
  std::ofstream file(opts.ledger_path);
  if (!file) {
    err << "warning: cannot write ledger to '" << opts.ledger_path << "'\n";
    return;
  }
  write_ledger_jsonl(file, ledger);
}

struct CheckArgs {
  std::string file;
  bool all = false;
  std::size_t max_rules = kDefaultGeneralRuleCap;
  CommonOpts common;
};

int run_check(const CheckArgs& args, std::ostream& out, std::ostream& err) {
  const Mcs system = load(args.file);
  CostLedger ledger;

  bool consistent = false;
  std::vector<BeliefState> equilibria;
  BoundAlgorithm algorithm = BoundAlgorithm::kGeneral;

  if (check_definite(system)) {
    if (stratify(system).ok()) {
      equilibria.push_back(grounded_equilibrium_stratified(system, ledger));
      algorithm = BoundAlgorithm::kStratified;
    } else {
      equilibria.push_back(grounded_equilibrium_fixpoint(system, ledger).state);
      algorithm = BoundAlgorithm::kFixpoint;
    }
    consistent = true;
  } else {
    const auto outcome = solve_general(
        system, args.all ? EnumerationMode::kAll : EnumerationMode::kFirst, ledger,
        args.max_rules);
    consistent = outcome.consistent;
    equilibria = outcome.equilibria;
  }

  maybe_write_ledger(args.common, ledger, err);

  if (args.common.json) {
    nlohmann::json doc;
    doc["consistent"] = consistent;
    doc["equilibria"] = nlohmann::json::array();
    for (const auto& eq : equilibria) {
      doc["equilibria"].push_back(belief_state_json(system, eq));
    }
    doc["ledger_summary"] = ledger_summary_json(ledger.summary());
    if (args.common.report_bounds) {
      doc["bound_report"] = bound_report_json(bound_report(system, ledger.summary(), algorithm));
    }
    out << doc.dump(2) << "\n";
  } else {
    if (consistent) {
      out << "consistent (" << bound_algorithm_name(algorithm) << ")\n";
      for (const auto& eq : equilibria) out << "  " << belief_state_text(system, eq) << "\n";
    } else {
      out << "inconsistent: no equilibrium\n";
    }
    if (args.common.report_bounds) {
      const auto report = bound_report(system, ledger.summary(), algorithm);
      out << "bound: observed " << report.observed_count << "/" << report.bound_count
          << " invocations, " << (report.within_bound ? "within" : "OUTSIDE") << " bound\n";
    }
  }
  return consistent ? kExitTrue : kExitFalse;
}

struct QueryArgs {
  std::string file;
  std::string context;
  std::string atom;
  std::string mode = "brave";
  std::string algorithm = "auto";
  std::string select = "order";
  bool explain = false;
  std::size_t max_rules = kDefaultGeneralRuleCap;
  CommonOpts common;
};

int run_query(const QueryArgs& args, std::ostream& out, std::ostream& err) {
  const Mcs system = load(args.file);
  const std::size_t target = system.index_of(args.context);
  const QueryMode mode = args.mode == "cautious" ? QueryMode::kCautious : QueryMode::kBrave;
  CostLedger ledger;
  const std::size_t cap = supports_cap_from_env(err);

  std::string algorithm = args.algorithm;
  if (algorithm == "auto") {
    if (check_definite(system)) {
      algorithm = stratify(system).ok() ? "stratified" : "fixpoint";
    } else {
      algorithm = "general";
    }
  }

  QueryOutcome outcome;
  outcome.mode = mode;
  BoundAlgorithm bound_alg = BoundAlgorithm::kGeneral;

  if (algorithm == "general") {
    const auto solved = solve_general(system, EnumerationMode::kAll, ledger, args.max_rules);
    if (mode == QueryMode::kBrave) {
      for (const auto& eq : solved.equilibria) {
        if (eq[target].count(args.atom)) {
          outcome.entailed = true;
          outcome.witness = eq;
          break;
        }
      }
    } else if (solved.equilibria.empty()) {
      outcome.entailed = true;
      outcome.vacuous = true;
    } else {
      outcome.entailed = true;
      for (const auto& eq : solved.equilibria) {
        if (!eq[target].count(args.atom)) {
          outcome.entailed = false;
          break;
        }
      }
      if (outcome.entailed) outcome.witness = solved.equilibria.front();
    }
  } else if (algorithm == "fixpoint" || algorithm == "stratified") {
    BeliefState ge = algorithm == "stratified"
                         ? grounded_equilibrium_stratified(system, ledger)
                         : grounded_equilibrium_fixpoint(system, ledger).state;
    outcome.entailed = ge[target].count(args.atom) > 0;
    if (outcome.entailed) outcome.witness = std::move(ge);
    bound_alg = algorithm == "stratified" ? BoundAlgorithm::kStratified
                                          : BoundAlgorithm::kFixpoint;
  } else if (algorithm == "incremental") {
    const SelectionPolicy policy = args.select == "cheapest" ? SelectionPolicy::kCheapest
                                                             : SelectionPolicy::kDeclaredOrder;
    IncrementalObserver observer;
    if (args.explain) {
      observer = [&](const IncrementalStep& step) {
        out << "iteration " << step.iteration << ": support {";
        bool first = true;
        for (const auto& id : step.selected) {
          out << (first ? "" : ", ") << id;
          first = false;
        }
        out << "} +" << step.delta.count << " invocations (+" << step.delta.total.str()
            << " cost), partial " << belief_state_text(system, *step.partial) << "\n";
      };
    }
    const auto result =
        incremental_query(system, args.context, args.atom, policy, ledger, cap, observer);
    outcome.entailed = result.entailed;
    if (result.fell_back && args.explain) {
      out << "(supports cap exceeded; answered by the plain fixpoint)\n";
    }
    bound_alg = BoundAlgorithm::kIncrementalRelevant;
  } else {
    throw InputError("unknown algorithm '" + algorithm + "'");
  }

  maybe_write_ledger(args.common, ledger, err);

  std::optional<BoundReport> report;
  if (args.common.report_bounds) {
    report = bound_report(system, ledger.summary(), bound_alg,
                          bound_alg == BoundAlgorithm::kIncrementalRelevant
                              ? std::optional<ContextName>(args.context)
                              : std::nullopt,
                          cap);
  }

  if (args.common.json) {
    nlohmann::json doc;
    doc["query"] = query_json(args.context, args.atom, outcome, system);
    doc["ledger_summary"] = ledger_summary_json(ledger.summary());
    if (report) doc["bound_report"] = bound_report_json(*report);
    out << doc.dump(2) << "\n";
  } else {
    out << "entailed: " << (outcome.entailed ? "true" : "false");
    if (outcome.vacuous) out << " (vacuously: no equilibria)";
    out << "\n";
    if (outcome.witness) {
      out << "witness: " << belief_state_text(system, *outcome.witness) << "\n";
    }
    if (report) {
      out << "bound: observed " << report->observed_count << "/" << report->bound_count
          << " invocations, " << (report->within_bound ? "within" : "OUTSIDE") << " bound\n";
    }
  }
  return outcome.entailed ? kExitTrue : kExitFalse;
}

struct StrataArgs {
  std::string file;
  CommonOpts common;
};

int run_strata(const StrataArgs& args, std::ostream& out, std::ostream&) {
  const Mcs system = load(args.file);
  const auto result = stratify(system);
  if (args.common.json) {
    nlohmann::json doc;
    if (result.ok()) {
      doc["strata"] = nlohmann::json::array();
      for (const auto& stratum : result.stratification->strata) {
        doc["strata"].push_back(nlohmann::json(stratum));
      }
    } else {
      doc["cycle"] = nlohmann::json(result.cycle);
    }
    out << doc.dump(2) << "\n";
  } else if (result.ok()) {
    const auto& strata = result.stratification->strata;
    out << "stratification: " << strata.size() << " strata\n";
    for (std::size_t k = 0; k < strata.size(); ++k) {
      out << "  " << k << ":";
      for (const auto& name : strata[k]) out << " " << name;
      out << "\n";
    }
  } else {
    out << "cyclic dependency:";
    for (std::size_t i = 0; i < result.cycle.size(); ++i) {
      out << (i ? " -> " : " ") << result.cycle[i];
    }
    out << "\n";
  }
  return result.ok() ? kExitTrue : kExitFalse;
}

struct SupportsArgs {
  std::string file;
  std::string context;
  CommonOpts common;
};

int run_supports(const SupportsArgs& args, std::ostream& out, std::ostream& err) {
  const Mcs system = load(args.file);
  const std::size_t cap = supports_cap_from_env(err);
  const auto support_set = supports_of(system, args.context, cap);

  if (args.common.json) {
    nlohmann::json doc;
    doc["context"] = args.context;
    doc["supports"] = nlohmann::json::array();
    for (const auto& fragment : support_set.supports) {
      doc["supports"].push_back(nlohmann::json(fragment.all_rule_ids()));
    }
    doc["supporting_contexts"] = nlohmann::json(support_set.supporting_contexts);
    doc["supporting_rules"] = nlohmann::json(support_set.supporting_rules);
    out << doc.dump(2) << "\n";
  } else {
    out << "supports of " << args.context << ": " << support_set.supports.size() << "\n";
    std::size_t index = 0;
    for (const auto& fragment : support_set.supports) {
      out << "  [" << ++index << "]";
      for (const auto& id : fragment.all_rule_ids()) out << " " << id;
      out << "\n";
    }
    out << "supporting contexts:";
    for (const auto& name : support_set.supporting_contexts) out << " " << name;
    out << "\nsupporting rules:";
    for (const auto& id : support_set.supporting_rules) out << " " << id;
    out << "\n";
  }
  return kExitTrue;
}

struct BenchArgs {
  std::string spec_path;
  std::string algorithms = "fixpoint,stratified";
  std::string out_path;
};

std::optional<std::pair<ContextName, Atom>> bench_query(const Mcs& system) {
  // Deterministic query target: the highest-stratum rule-owning context (by
  // declared order when cyclic), asking for its first rule head.
  std::optional<std::size_t> pick;
  const auto strat = stratify(system);
  std::size_t best_level = 0;
  for (std::size_t i = 0; i < system.size(); ++i) {
    if (system.context(i).bridge_rules().empty()) continue;
    const std::size_t level = strat.ok() ? strat.stratification->level[i] : 0;
    if (!pick || level > best_level) {
      pick = i;
      best_level = level;
    }
  }
  if (!pick) return std::nullopt;
  const auto& rules = system.context(*pick).bridge_rules();
  return std::make_pair(system.context(*pick).name(), rules.front().head);
}

int run_bench(const BenchArgs& args, std::ostream& out, std::ostream& err) {
  std::ifstream spec_file(args.spec_path);
  if (!spec_file) throw InputError("cannot open bench spec '" + args.spec_path + "'");
  nlohmann::json doc = nlohmann::json::parse(spec_file, nullptr, true, true);

  GeneratorSpec spec;
  const auto kind = instance_kind_from(doc.value("kind", "chain"));
  if (!kind) throw InputError("unknown instance kind in bench spec");
  spec.kind = *kind;
  spec.n_contexts = doc.value("n_contexts", 4);
  spec.n_rules = doc.value("n_rules", 4);
  spec.negation_rate = doc.value("negation_rate", 0.0);
  if (doc.contains("cost_min")) {
    spec.cost_min = Rational::parse(doc["cost_min"].get<std::string>()).value_or(Rational(1));
  }
  if (doc.contains("cost_max")) {
    spec.cost_max = Rational::parse(doc["cost_max"].get<std::string>()).value_or(Rational(1));
  }
  spec.seed = doc.value("seed", 0);
  const std::size_t count = doc.value("count", 1);

  std::vector<std::string> algorithms;
  std::stringstream list(args.algorithms);
  std::string item;
  while (std::getline(list, item, ',')) {
    if (!item.empty()) algorithms.push_back(item);
  }

  std::ofstream file;
  std::ostream* csv = &out;
  if (!args.out_path.empty()) {
    file.open(args.out_path);
    if (!file) throw InputError("cannot write bench output '" + args.out_path + "'");
    csv = &file;
  }
  *csv << "seed,kind,n,m,algorithm,invocations,total_cost,bound_count,within_bound\n";

  for (std::size_t i = 0; i < count; ++i) {
    GeneratorSpec instance_spec = spec;
    instance_spec.seed = spec.seed + i;
    const Mcs system = generate(instance_spec);
    const bool definite = static_cast<bool>(check_definite(system));
    const bool stratified = stratify(system).ok();

    for (const auto& algorithm : algorithms) {
      CostLedger ledger;
      std::optional<BoundAlgorithm> bound_alg;
      std::optional<ContextName> query_ctx;
      try {
        if (algorithm == "general") {
          if (system.rule_count() > kDefaultGeneralRuleCap) continue;
          solve_general(system, EnumerationMode::kAll, ledger);
          bound_alg = BoundAlgorithm::kGeneral;
        } else if (algorithm == "fixpoint") {
          if (!definite) continue;
          grounded_equilibrium_fixpoint(system, ledger);
          bound_alg = BoundAlgorithm::kFixpoint;
        } else if (algorithm == "stratified") {
          if (!definite || !stratified) continue;
          grounded_equilibrium_stratified(system, ledger);
          bound_alg = BoundAlgorithm::kStratified;
        } else if (algorithm == "incremental") {
          if (!definite) continue;
          const auto query = bench_query(system);
          if (!query) continue;
          incremental_query(system, query->first, query->second,
                            SelectionPolicy::kDeclaredOrder, ledger);
          bound_alg = BoundAlgorithm::kIncrementalRelevant;
          query_ctx = query->first;
        } else {
          throw InputError("unknown algorithm '" + algorithm + "' in --algorithms");
        }
      } catch (const GuardExceeded& e) {
        err << "note: seed " << instance_spec.seed << " " << algorithm << ": " << e.what()
            << "\n";
        continue;
      }
      const auto report =
          bound_report(system, ledger.summary(), *bound_alg, query_ctx);
      *csv << instance_spec.seed << "," << instance_kind_name(spec.kind) << "," << report.n
           << "," << report.m << "," << algorithm << "," << report.observed_count << ","
           << report.observed_cost.str() << "," << report.bound_count << ","
           << (report.within_bound ? "true" : "false") << "\n";
    }
  }
  return kExitTrue;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"cost-aware multi-context system reasoner"};
  app.require_subcommand(1);

  CheckArgs check_args;
  auto* check_cmd = app.add_subcommand("check", "decide consistency (exit 1 when inconsistent)");
  check_cmd->add_option("file", check_args.file, "system description")->required();
  check_cmd->add_flag("--all", check_args.all, "enumerate all equilibria, not just the first");
  check_cmd->add_option("--max-rules", check_args.max_rules,
                        "refuse the general search past this many rules");
  add_common(check_cmd, check_args.common);

  QueryArgs query_args;
  auto* query_cmd = app.add_subcommand("query", "decide entailment (exit 1 when false)");
  query_cmd->add_option("file", query_args.file, "system description")->required();
  query_cmd->add_option("--context", query_args.context, "queried context")->required();
  query_cmd->add_option("--atom", query_args.atom, "queried atom")->required();
  query_cmd->add_option("--mode", query_args.mode, "brave or cautious")
      ->check(CLI::IsMember({"brave", "cautious"}));
  query_cmd->add_option("--algorithm", query_args.algorithm, "evaluation algorithm")
      ->check(CLI::IsMember({"auto", "general", "fixpoint", "stratified", "incremental"}));
  query_cmd->add_option("--select", query_args.select, "incremental support selection")
      ->check(CLI::IsMember({"order", "cheapest"}));
  query_cmd->add_flag("--explain", query_args.explain,
                      "print per-iteration fragments and ledger deltas");
  query_cmd->add_option("--max-rules", query_args.max_rules,
                        "refuse the general search past this many rules");
  add_common(query_cmd, query_args.common);

  StrataArgs strata_args;
  auto* strata_cmd = app.add_subcommand("strata", "print the compact stratification");
  strata_cmd->add_option("file", strata_args.file, "system description")->required();
  add_common(strata_cmd, strata_args.common);

  SupportsArgs supports_args;
  auto* supports_cmd = app.add_subcommand("supports", "enumerate supports of a context");
  supports_cmd->add_option("file", supports_args.file, "system description")->required();
  supports_cmd->add_option("--context", supports_args.context, "context to support")
      ->required();
  add_common(supports_cmd, supports_args.common);

  BenchArgs bench_args;
  auto* bench_cmd = app.add_subcommand("bench", "run generated instances, emit CSV");
  bench_cmd->add_option("--spec", bench_args.spec_path, "generator spec (JSON)")->required();
  bench_cmd->add_option("--algorithms", bench_args.algorithms, "comma-separated algorithms");
  bench_cmd->add_option("--out", bench_args.out_path, "CSV output path (default stdout)");

  std::vector<std::string> argv_strings;
  argv_strings.push_back("mcs");
  argv_strings.insert(argv_strings.end(), args.begin(), args.end());
  std::vector<char*> argv;
  argv.reserve(argv_strings.size());
  for (auto& s : argv_strings) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitTrue;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (check_cmd->parsed()) return run_check(check_args, out, err);
    if (query_cmd->parsed()) return run_query(query_args, out, err);
    if (strata_cmd->parsed()) return run_strata(strata_args, out, err);
    if (supports_cmd->parsed()) return run_supports(supports_args, out, err);
    if (bench_cmd->parsed()) return run_bench(bench_args, out, err);
  } catch (const GuardExceeded& e) {
    err << "guard exceeded: " << e.what() << "\n";
    return kExitGuard;
  } catch (const McsError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace mcs
