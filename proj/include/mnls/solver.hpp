#pragma once

#include "mnls/grid.hpp"
#include "mnls/magnetics.hpp"
#include "mnls/radial.hpp"
#include "mnls/variational.hpp"

#include <array>
#include <optional>

// Groundstate computation: preconditioned projected-gradient minimization of
// the Rayleigh quotient, the decoupled real-potential twin solver, and the
// conjugate-gradient resolvent both are built on.

namespace mnls {

enum class StepRule { fixed, adaptive_two_point };
enum class InitKind { gaussian, radial_oracle, file };

struct SolverConfig {
    int max_iters = 600;
    double residual_tol = 1e-8; // L² norm of I′_A(u)
    StepRule step_rule = StepRule::adaptive_two_point;
    InitKind init = InitKind::radial_oracle;
    int recentre_every = 25; // 0 disables recentring
    unsigned long seed = 0;  // jitters the gaussian init when nonzero
    double fixed_step = 1.0; // step size under StepRule::fixed
    std::optional<ComplexField> init_field; // required by InitKind::file
};

struct GroundstateResult {
    ComplexField field;
    double energy = 0.0;
    double quotient = 0.0;
    double residual = 0.0;
    int iterations = 0;
    std::array<double, 3> center_of_mass{0.0, 0.0, 0.0};
    MagneticData magnetic; // b_matrix echo
    double p = 0.0;        // exponent echo
};

// v = (−Δ_A + 1)^{-1} f by conjugate gradients on the real-symmetric
// positive-definite discrete operator; ‖(−Δ_A+1)v − f‖ ≤ tol·‖f‖.
// Throws no-convergence at the iteration cap.
ComplexField resolvent_solve(const MagneticData& m, const ComplexField& f, double tol);

// Iterate u ← nehari_scale(u − α·(−Δ_A+1)^{-1} I′_A(u)) until the L²
// residual of I′_A drops below cfg.residual_tol. Recentres by lattice
// magnetic translation every recentre_every iterations and phase-normalizes
// so the value at the centre node is real positive. Throws
// max-iters-exceeded / energy-increase-detected.
GroundstateResult minimize_groundstate(const MagneticData& m, const FunctionalParams& fp,
                                       const Grid& grid, const SolverConfig& cfg);

// Same algorithm for the decoupled scalar problem
// −Δu + (1 + |A|²)u = |u|^{p−2}u on real fields (the magnetic coupling term
// is dropped, the |A|² potential kept). Returns a real positive field.
GroundstateResult solve_decoupled(const MagneticData& m, const FunctionalParams& fp,
                                  const Grid& grid, const SolverConfig& cfg);

} // namespace mnls
