#pragma once

#include <set>
#include <stdexcept>
#include <string>

namespace mcs {

// Flat atoms: identifiers compared by exact string equality. No term
// structure, no variables.
using Atom = std::string;
using AtomSet = std::set<Atom>;
using KnowledgeBase = AtomSet;
using BeliefSet = AtomSet;
using ContextName = std::string;
using RuleId = std::string;

struct McsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed system detected at construction/validation time.
struct ValidationError : McsError {
  using McsError::McsError;
};

/// Bad argument to an otherwise healthy operation (unknown rule id, fragments
/// with different bases, ...).
struct InputError : McsError {
  using McsError::McsError;
};

/// A stated precondition was violated by the caller.
struct ContractViolation : McsError {
  using McsError::McsError;
};

/// A size guard or enumeration cap was hit.
struct GuardExceeded : McsError {
  using McsError::McsError;
};

}  // namespace mcs
