#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gfq::cli {

/// Runs one CLI invocation. Exit codes: 0 success, 2 validation error,
/// 3 numeric/regime error, 4 resource-budget error. Errors are emitted as a
/// single machine-readable JSON line on `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace gfq::cli
