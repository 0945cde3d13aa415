#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mcs {

/// Exit codes: 0 answered/consistent, 1 query false or inconsistent (or a
/// cycle from `strata`), 2 usage or parse error, 3 guard or cap exceeded.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mcs
