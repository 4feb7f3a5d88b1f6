#pragma once

#include <stdexcept>

namespace qtow {

// An operation was handed a value that violates its stated preconditions
// (non-unitary operator, non-normalized state, out-of-range probability, ...).
struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A projective collapse was requested onto an outcome whose Born probability
// is (numerically) zero.
struct ZeroProbabilityBranch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Under the postselect policy every trial must yield a decision; this is
// raised when the decision subspace carries no amplitude at all (mu = 1).
struct ForcedPerpOutcome : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace qtow
