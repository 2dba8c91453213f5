#pragma once

#include <string>
#include <vector>

namespace fembem {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Self-contained invariant suite behind `fembem check`: BEM identities, quadrature oracles,
/// compatibility residuals, refinement conformity and Galerkin orthogonality.
std::vector<CheckResult> run_invariant_checks();

}  // namespace fembem
