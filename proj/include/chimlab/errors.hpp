#pragma once

#include <stdexcept>
#include <string>

namespace chimlab {

// Bad input: violated preconditions, malformed specs, unknown symbols.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Numerical failure: non-convergent solve or exhausted mesh budget.
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BudgetError : SolverError {
    using SolverError::SolverError;
};

inline void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError(what);
}

}  // namespace chimlab
