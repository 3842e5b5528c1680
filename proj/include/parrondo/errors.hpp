#pragma once

#include <stdexcept>

namespace parrondo {

// The chain has no unique stationary distribution (several closed recurrent
// classes, or two power-iteration starts settled on distinct limits).
struct NonUniquenessError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Iteration cap exceeded before meeting the requested tolerance.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Support-graph structure contradicts what the chain guarantees (e.g. more
// than one closed recurrent class for a pattern kernel).
struct StructureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Independently computed quantities that must agree did not.
struct ConsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace parrondo
