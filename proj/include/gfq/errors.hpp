#pragma once

#include <stdexcept>
#include <string>

namespace gfq {

/// Base class for all library errors.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad parameters, malformed config, violated preconditions. CLI exit code 2.
struct validation_error : error {
    using error::error;
};

/// Numerical failure: bracket at boundary, non-bracketable inverse,
/// circulant embedding with negative spectrum, overflow. CLI exit code 3.
struct numeric_error : error {
    using error::error;
};

/// Classification landed on a boundary the theory excludes (gamma = t*,
/// omega = -inf) or a horizon condition is violated. CLI exit code 3.
struct regime_error : error {
    using error::error;
};

/// Requested work exceeds the configured path-point budget. CLI exit code 4.
struct budget_error : error {
    using error::error;
};

} // namespace gfq
