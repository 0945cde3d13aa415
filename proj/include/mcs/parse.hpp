#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mcs/model.hpp"

namespace mcs {

struct SourcePos {
  std::size_t line = 0;  // 1-based
  std::size_t column = 0;
};

struct Diagnostic {
  SourcePos pos;
  std::string message;

  std::string render() const;  // "line:col: message"
};

struct ParseResult {
  std::optional<Mcs> mcs;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return mcs.has_value(); }
};

/// Parses the textual system format; collects every diagnostic it can find
/// before giving up. Rule ids left implicit are assigned r1, r2, ... in file
/// order.
ParseResult parse_mcs(std::string_view text);
ParseResult parse_mcs_file(const std::string& path);

/// Canonical textual form; parsing it back yields a structurally equal
/// system.
std::string to_text(const Mcs& system);

bool structurally_equal(const Mcs& a, const Mcs& b);

}  // namespace mcs
