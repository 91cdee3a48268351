#pragma once

#include "mnls/grid.hpp"
#include "mnls/variational.hpp"

#include <vector>

// Radial shooting oracle for the B = 0 groundstate: the unique positive
// decreasing solution of u″ + (N−1)u′/r − u + |u|^{p−2}u = 0, u′(0) = 0,
// u(∞) = 0. Everything downstream (grid-solver acceptance, linearized
// spectrum anchors, energy-curve coefficient) is checked against this
// profile, so it is built to be far more accurate than the grid solver.

namespace mnls {

struct RadialProfile {
    int dim = 2;     // N
    double p = 4.0;
    double r_max = 0.0;
    std::vector<double> r;  // uniform mesh 0..r_max
    std::vector<double> u;  // u₀(r), positive, strictly decreasing
    std::vector<double> du; // u₀′(r), kept for Hermite interpolation

    double u_at_origin = 0.0;
    double mass = 0.0;          // ∫_{ℝ^N} u₀²
    double p_integral = 0.0;    // ∫ u₀^p
    double second_moment = 0.0; // ∫ |x|² u₀²
    double energy = 0.0;        // E(0) = ½∫(|∇u₀|²+u₀²) − (1/p)∫u₀^p
};

// Shooting plus bisection on u(0): overshoot (u crosses zero) brackets from
// above, undershoot (u′ turns positive while u > 0) from below. The final
// profile is integrated on the output mesh and spliced onto the decaying
// solution of the linearized far-field equation (K₀(r) in 2D, e^{−r}/r in
// 3D) through a smooth blend once the nonlinearity is below the residual
// budget, because forward integration past that point is contaminated by
// the growing mode. Throws bracket-not-found / non-monotone-profile.
RadialProfile solve_radial(int N, const FunctionalParams& fp, double r_max, int mesh);

// Cubic Hermite evaluation of the stored profile; 0 beyond r_max.
double profile_value(const RadialProfile& prof, double r);
// d/dr of the same interpolant.
double profile_derivative(const RadialProfile& prof, double r);

// Max-norm residual of the ODE over the stored samples, with derivatives
// estimated by five-point finite differences of the stored values only
// (independent of the integrator's internal state).
double radial_ode_residual_max(const RadialProfile& prof);

// u₀(|x|) sampled on a grid (real-valued field). Requires the grid's far
// corner to stay within r_max so no node falls off the profile.
ComplexField radial_interpolant(const RadialProfile& prof, const Grid& g);

// ∂_j u₀ = u₀′(r)·x_j/r sampled on a grid (0 at the origin node).
ComplexField radial_partial(const RadialProfile& prof, const Grid& g, int axis);

} // namespace mnls
