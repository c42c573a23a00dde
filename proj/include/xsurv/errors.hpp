#pragma once

#include <stdexcept>
#include <string>

namespace xsurv {

// Instance-file syntax or semantic error, with the 1-based line it occurred on.
struct ParseError : std::runtime_error {
    int line;
    ParseError(int line_, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

// A constructed object violates a model invariant.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// No feasible solution exists (e.g. a logical link with no physical path).
struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Solver node/time cap hit before optimality was proven.
struct BudgetExceededError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exact enumeration refused; the caller should fall back to Monte Carlo.
struct EnumerationCapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace xsurv
