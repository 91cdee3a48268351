#pragma once

#include "mnls/grid.hpp"
#include "mnls/magnetics.hpp"
#include "mnls/solver.hpp"
#include "mnls/variational.hpp"

#include <array>
#include <string>
#include <vector>

namespace mnls {

/// Mass-weighted barycenter (∫x|u|²)/(∫|u|²). Unused trailing components are
/// zero. Throws std::invalid_argument on a zero field.
std::array<double, 3> center_of_mass(const ComplexField& u);

/// Max over `samples` rotations R preserving |A|² of ‖u∘R − u‖_{L²}/‖u‖_{L²},
/// rotated values obtained by bilinear (trilinear) interpolation. In dim 2 the
/// rotations are about the origin; in dim 3 the field must be axis-aligned and
/// the sampled maps are rotations about that axis plus the reflection across
/// the transversal plane. Nodes whose rotated image leaves the reliable box
/// (2h inside the boundary) are excluded from both norms. The caller is
/// expected to pass a recentred field. Throws on a zero field.
double symmetry_defect(const ComplexField& u, const MagneticData& m, int samples);

/// Max increase of |u| along lattice rays from the node nearest `a`: the
/// largest positive successive difference over all 3^dim − 1 ray directions.
/// Zero for a field radially nonincreasing about `a`.
double monotonicity_defect(const ComplexField& u, const std::array<double, 3>& a);

struct DecayFit {
    double r_lo = 0.0;
    double r_hi = 0.0;
    double log_c = 0.0;    // mean of the law-compensated g over the window
    double residual = 0.0; // max |g(r) − log_c| over the window
    std::string law;       // "2d-exact", "exponential"
    std::vector<double> radii;
    std::vector<double> mean_abs; // angle-averaged |u| per radius
    std::vector<double> g;        // law-compensated profile per radius
};

/// Fits the 2D magnetic decay law: computes the angle-averaged
///   g(r) = log|u| + b r²/4 + ½ log r + (½ + 1/b) log(1 + b r)
/// over a window of at least 20 radii in [r_lo, r_hi]. A flat g certifies the
/// law; log c is its window mean. Refuses b < 0.02 (the 1/b exponent
/// degenerates; use fit_decay_exponential there). Throws
/// window-outside-reliable-region if the window reaches within 2h of the
/// boundary or touches values below 1e-250.
DecayFit fit_decay_2d(const ComplexField& u, double b, double r_lo, double r_hi);

/// Control fit against the zero-field law: g(r) = log|u| + r. Same windowing
/// rules as fit_decay_2d. On a magnetic groundstate this law is wrong and the
/// residual should be much larger than the 2d-exact one.
DecayFit fit_decay_exponential(const ComplexField& u, double r_lo, double r_hi);

/// Kato-type subsolution margin: with C fixed from the window maximum of
/// |u|·e^{(1−η)r} on the innermost radius ring, returns the max over the
/// window of |u(x)| − C·e^{−(1−η)r}. Nonpositive means the pointwise bound
/// |u| ≤ C e^{−(1−η)r} holds across the window.
double kato_bound_margin(const ComplexField& u, double r_lo, double r_hi, double eta);

/// Transversal Gaussian bound statistic in 3D. With a = center of mass and
/// B the field vector along b_axis, returns
///   max over reliable nodes of |u(x)|·exp(|B×(x−a)|²/(4|B|)) − M_axis,
/// where M_axis is the same compensated quantity maximized near the axis.
/// A bounded (small) value certifies |u| = O(exp(−|B×(x−a)|²/(4|B|))).
double gaussian_bound_3d(const ComplexField& u, const std::array<double, 3>& b_axis);

struct EnergyCurveRow {
    double b = 0.0;
    double energy = 0.0;
    double second_moment = 0.0; // ∫|x|²|u|²
};

struct EnergyCurve {
    std::vector<EnergyCurveRow> rows; // sorted by b, b = 0 present
    double c2_fit = 0.0;              // least-squares coefficient of E(b)−E(0) ≈ c₂b²
    double fit_residual = 0.0;        // rms misfit of the quadratic model
    double convexity_margin = 0.0;    // minimum (divided) second difference of E
};

/// Solves the groundstate for every strength in b_list (uniform 2D field or
/// axis-aligned 3D field by grid dimension) and tabulates the energy curve.
/// The quadratic coefficient is fitted over the four smallest |b| values
/// only, matching the o(|b|²) character of the expansion. `workers` > 1 runs
/// the independent solves concurrently.
EnergyCurve sweep_energy(const std::vector<double>& b_list, const FunctionalParams& fp,
                         const Grid& grid, const SolverConfig& cfg, int workers = 1);

struct DerivativeReport {
    double b_star = 0.0;
    double delta = 0.0;
    double finite_difference = 0.0; // (E(b+δ) − E(b−δ))/(2δ)
    double predicted = 0.0;         // ¼∫(B*x)·(Ḃx)|u*|² with unit-strength Ḃ
    double mismatch = 0.0;          // relative gap between the two
};

/// Central-difference check of E′(b) against the Hadamard-derivative formula
/// evaluated on the converged groundstate at b_star. Requires
/// 0 < delta ≤ b_star/4.
DerivativeReport energy_derivative_check(double b_star, double delta, const FunctionalParams& fp,
                                         const Grid& grid, const SolverConfig& cfg);

struct EquivalenceReport {
    double b = 0.0;
    double energy_magnetic = 0.0;
    double energy_decoupled = 0.0;
    double energy_gap = 0.0;       // |E_mag − E_dec|/|E_dec|
    double field_gap = 0.0;        // ‖|u_mag| − u_dec‖_{L²}/‖u_dec‖_{L²}
    double defect = 0.0;           // decoupling_defect of the magnetic groundstate
};

/// Runs the magnetic and the decoupled minimization at strength b and reports
/// how close the two groundstates are (both solvers recentre; the modulus of
/// the magnetic field removes the remaining phase freedom).
EquivalenceReport decoupled_equivalence(double b, const FunctionalParams& fp, const Grid& grid,
                                        const SolverConfig& cfg);

} // namespace mnls
