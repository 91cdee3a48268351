#pragma once

#include "mnls/grid.hpp"
#include "mnls/magnetics.hpp"
#include "mnls/solver.hpp"
#include "mnls/variational.hpp"

#include <string>
#include <vector>

namespace mnls {

/// Leading spectrum of the linearized operator L_u = (−Δ_A+1)^{-1}W at a
/// groundstate, computed in the magnetic Sobolev inner product
/// ⟨a,b⟩_{H_A} = ⟨a, (−Δ_A+1)b⟩_{L²}.
struct SpectrumResult {
    std::vector<double> eigenvalues;        // descending
    std::vector<double> rayleigh_residuals; // ‖L w − λ w‖_{H_A}/‖w‖_{H_A} per pair
    std::string inner_product = "H_A";
    std::vector<ComplexField> eigenvectors; // H_A-orthonormal Ritz vectors
};

/// W[w] = |u|^{p−2}w + (p−2)|u|^{p−4}⟨u,w⟩u with the real pairing ⟨·,·⟩,
/// evaluated stably as |u|^{p−2}(w + (p−2)⟨û,w⟩û) with û = u/|u| where
/// |u| > 1e−30 and û = 0 elsewhere, so the combination stays regular for
/// p < 4.
ComplexField linearized_potential_apply(const ComplexField& u, const FunctionalParams& fp,
                                        const ComplexField& w);

/// L_u w = (−Δ_A+1)^{-1}(W[w]). Real-linear (not complex-linear) and
/// self-adjoint in the H_A inner product. The resolvent is solved to
/// `resolvent_tol`, which must sit below the eigenvalue tolerance of any
/// surrounding eigensolve.
ComplexField linearized_operator_apply(const ComplexField& u, const MagneticData& m,
                                       const FunctionalParams& fp, const ComplexField& w,
                                       double resolvent_tol = 1e-10);

/// The k largest eigenvalues of L_u by Lanczos iteration in the H_A inner
/// product with full reorthogonalization, converged copies locked and the
/// iteration restarted with a fresh deflated seed on breakdown. Requires
/// k ≤ 12. Each returned Rayleigh residual is recomputed from its Ritz pair
/// and is ≤ tol. The inner resolvent tolerance is 1e−2·tol.
SpectrumResult top_eigenvalues(const ComplexField& u, const MagneticData& m,
                               const FunctionalParams& fp, int k, double tol);

struct SpectrumSweepRow {
    double b = 0.0;
    std::vector<double> lambda;    // descending, dim+3 entries
    std::vector<double> residual;  // matching Rayleigh residuals
    std::vector<double> deviation; // |λ_k(b) − λ_k(0)| per k
};

struct SpectrumSweep {
    std::vector<SpectrumSweepRow> rows; // sorted by b ascending, b = 0 present
};

/// Solves the groundstate for each strength and tabulates λ₁..λ_{N+3}
/// together with the deviation from the zero-field row. `workers` > 1 runs
/// the (solve, eigensolve) pipelines concurrently.
SpectrumSweep spectrum_convergence_sweep(const std::vector<double>& b_list,
                                         const FunctionalParams& fp, const Grid& grid,
                                         const SolverConfig& cfg, double tol = 1e-6,
                                         int workers = 1);

} // namespace mnls
