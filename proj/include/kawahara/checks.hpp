#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace kawahara {

/// Outcome of one property of the operator/ledger suite.
struct CheckResult {
    std::string name;
    /// Worst value seen over all trials (a relative error, or a signed
    /// residual for the inequalities).
    double worst = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

/// Summation by parts, the quadratic-form identities of the dispersive
/// stencils, skew-symmetry of the semi-discrete nonlinearity, positivity of
/// the implicit operator, agreement of the fast solver with the dense oracle,
/// and the one-step energy ledgers of the Burgers substep and the UK step.
/// Every property is tried on `trials` random grid functions on an n-node grid.
std::vector<CheckResult> run_property_checks(std::size_t n = 64, std::size_t trials = 100,
                                             std::uint64_t seed = 20240611);

} // namespace kawahara
