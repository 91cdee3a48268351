#pragma once

#include "mnls/grid.hpp"
#include "mnls/magnetics.hpp"

// The action functional I_A(u) = ½∫(|D_A u|² + |u|²) − (1/p)∫|u|^p, its L²
// gradient, the Rayleigh quotient Q_A, and Nehari-manifold scaling.
//
// The quadratic term is evaluated through the operator pairing
// ⟨(−Δ_A + 1)u, u⟩ rather than through covariant_gradient. The two agree to
// O(h²) (discrete integration by parts), but only the operator form makes
// the Nehari identity ⟨I′(t⋆u), t⋆u⟩ = 0 and the ground-energy formula hold
// to rounding, because euler_gradient is built from the same stencil.

namespace mnls {

struct FunctionalParams {
    double p = 4.0;
};

// Subcriticality: p > 2 always, p < 2N/(N−2) when N=3 (no upper bound in 2D).
// Throws std::invalid_argument when violated.
void validate_exponent(const FunctionalParams& fp, int dim);

// I_A(u); 0 for the zero field.
double energy(const ComplexField& u, const MagneticData& m, const FunctionalParams& fp);

// I′_A(u) = (−Δ_A + 1)u − |u|^{p−2}u in the L² representation:
// inner_product(g, v) is the directional derivative of energy along v.
ComplexField euler_gradient(const ComplexField& u, const MagneticData& m,
                            const FunctionalParams& fp);

// Q_A(u) = (⟨(−Δ_A+1)u, u⟩)/(∫|u|^p)^{2/p}. Throws zero-field on u = 0.
double rayleigh_quotient(const ComplexField& u, const MagneticData& m,
                         const FunctionalParams& fp);

struct NehariScaling {
    double t_star = 1.0;
    ComplexField scaled;
};

// t⋆ = (⟨(−Δ_A+1)u, u⟩ / ∫|u|^p)^{1/(p−2)}; t⋆u lies on the Nehari manifold
// ⟨I′(t⋆u), t⋆u⟩ = 0 to rounding. Throws zero-field on u = 0.
NehariScaling nehari_scale(const ComplexField& u, const MagneticData& m,
                           const FunctionalParams& fp);

// E = (½ − 1/p)·q^{p/(p−2)}. Throws nonpositive-quotient when q ≤ 0.
double ground_energy_from_quotient(double q, const FunctionalParams& fp);

// ‖D_A u‖²_{L²} − ‖∇|u|‖²_{L²}, the discrete diamagnetic gap. Nonnegative in
// the continuum; discretely nonnegative up to an O(h²) slack.
double diamagnetic_gap(const ComplexField& u, const MagneticData& m);

namespace detail {
// ⟨(−Δ_A + 1)u, u⟩ and ∫|u|^p in one place so every variational quantity
// shares the exact same floating-point reductions.
struct QuadraticData {
    double form = 0.0;   // ⟨(−Δ_A+1)u, u⟩
    double p_integral = 0.0; // ∫|u|^p
};
QuadraticData quadratic_data(const ComplexField& u, const MagneticData& m, double p);
} // namespace detail

} // namespace mnls
