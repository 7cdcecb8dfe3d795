#pragma once

#include <stdexcept>
#include <string>

namespace admcov {

// Malformed or infeasible input (CLI exit code 3).
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An internal consistency check failed (CLI exit code 4).
struct InvariantViolation : std::logic_error {
    using std::logic_error::logic_error;
};

// Over-determined data that does not fit (interpolation, cross-checks).
struct ConsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& what) {
    if (!ok) throw InvariantViolation(what);
}

}  // namespace admcov
