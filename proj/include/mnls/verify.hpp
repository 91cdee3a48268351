#pragma once

#include <string>
#include <vector>

namespace mnls {

/// One entry of the invariant suite. `pass` already encodes the comparison
/// direction (most checks require statistic ≤ tolerance; refinement-ratio
/// checks require statistic ≥ tolerance — the name says which).
struct CheckResult {
    std::string name;
    double statistic = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    bool all_pass = false;
    double seconds = 0.0; // wall time of the whole suite
};

/// The quick invariant suite on 65² and 49³ grids: diamagnetic-gap
/// nonnegativity over 100 random smooth fields (refinement-corrected),
/// euler_gradient against central differences of the energy, the Nehari
/// identity, phase and lattice-translation invariance of the Rayleigh
/// quotient, h²-decay of the discrete gauge-covariance defect, and the
/// symmetry/monotonicity defects of a small converged groundstate. Designed
/// to finish well under a minute.
VerifyReport run_quick_suite();

} // namespace mnls
