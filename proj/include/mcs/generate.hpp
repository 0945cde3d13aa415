#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "mcs/model.hpp"

namespace mcs {

enum class InstanceKind { kLayered, kChain, kDiamondForest, kGeneralRandom };

std::optional<InstanceKind> instance_kind_from(std::string_view name);
std::string_view instance_kind_name(InstanceKind kind);

/// Deterministic given the seed. layered/chain/diamond-forest always produce
/// definite, stratified systems; general-random may introduce cycles and
/// negation (per negation_rate) and table contexts.
struct GeneratorSpec {
  InstanceKind kind = InstanceKind::kChain;
  std::size_t n_contexts = 0;
  std::size_t n_rules = 0;
  double negation_rate = 0.0;  // must be 0 for the definite kinds
  Rational cost_min = Rational(1);
  Rational cost_max = Rational(1);
  std::uint64_t seed = 0;
};

/// Throws InputError on infeasible specs (e.g. rules with nowhere to point).
Mcs generate(const GeneratorSpec& spec);

}  // namespace mcs
