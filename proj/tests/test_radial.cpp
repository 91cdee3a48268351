#include "mnls/grid.hpp"
#include "mnls/radial.hpp"
#include "mnls/variational.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace mnls;

// Anchor values for the zero-field radial groundstates, computed with an
// independent adaptive shooting integrator (bisection on u(0), relative
// tolerance 1e-13, adaptive spherical quadrature with an analytic Bessel
// tail). The 2D integrals satisfy the exact identities E = M/2 = P/4 to
// 2e-9; the 3D ones satisfy G = M, P = 2M to 1e-9.
namespace anchors {
// N = 2, p = 4
constexpr double townes_u0 = 2.2062008646509446;
constexpr double townes_mass = 11.7008965245;
constexpr double townes_p_integral = 23.4017930491;
constexpr double townes_moment = 13.8948616353;
constexpr double townes_energy = 5.8504482623;
// N = 3, p = 3
constexpr double n3_u0 = 4.1916829544417595;
constexpr double n3_mass = 130.98071014875828;
constexpr double n3_p_integral = 261.96142029747796;
constexpr double n3_moment = 318.9462056912009;
constexpr double n3_energy = 43.66023671625162;
} // namespace anchors

TEST_CASE("solve_radial validates its arguments") {
    CHECK_THROWS_AS(solve_radial(1, FunctionalParams{4.0}, 30.0, 6000), std::invalid_argument);
    CHECK_THROWS_AS(solve_radial(2, FunctionalParams{2.0}, 30.0, 6000), std::invalid_argument);
    CHECK_THROWS_AS(solve_radial(3, FunctionalParams{6.0}, 30.0, 6000), std::invalid_argument);
    CHECK_THROWS_AS(solve_radial(2, FunctionalParams{4.0}, 10.0, 6000), std::invalid_argument);
    CHECK_THROWS_AS(solve_radial(2, FunctionalParams{4.0}, 30.0, 50), std::invalid_argument);
}

TEST_CASE("2D p=4 groundstate reproduces the frozen anchor values") {
    const RadialProfile prof = solve_radial(2, FunctionalParams{4.0}, 30.0, 6000);

    CHECK(prof.u_at_origin == doctest::Approx(anchors::townes_u0).epsilon(1e-8));
    CHECK(prof.mass == doctest::Approx(anchors::townes_mass).epsilon(1e-6));
    CHECK(prof.p_integral == doctest::Approx(anchors::townes_p_integral).epsilon(2e-5));
    CHECK(prof.second_moment == doctest::Approx(anchors::townes_moment).epsilon(1e-5));
    CHECK(prof.energy == doctest::Approx(anchors::townes_energy).epsilon(1e-6));
}

TEST_CASE("3D p=3 groundstate reproduces the frozen anchor values") {
    const RadialProfile prof = solve_radial(3, FunctionalParams{3.0}, 30.0, 6000);

    CHECK(prof.u_at_origin == doctest::Approx(anchors::n3_u0).epsilon(1e-7));
    CHECK(prof.mass == doctest::Approx(anchors::n3_mass).epsilon(1e-6));
    CHECK(prof.p_integral == doctest::Approx(anchors::n3_p_integral).epsilon(1e-6));
    CHECK(prof.second_moment == doctest::Approx(anchors::n3_moment).epsilon(1e-5));
    CHECK(prof.energy == doctest::Approx(anchors::n3_energy).epsilon(1e-6));
}

TEST_CASE("profile satisfies positivity, monotonicity and the variational identities") {
    for (const auto& [dim, p] : {std::pair{2, 4.0}, std::pair{3, 3.0}}) {
        const RadialProfile prof = solve_radial(dim, FunctionalParams{p}, 30.0, 6000);

        // Positive and strictly decreasing on the mesh.
        double prev = prof.u[0] + 1.0;
        for (std::size_t k = 0; k < prof.u.size(); ++k) {
            CHECK(prof.u[k] > 0.0);
            CHECK(prof.u[k] < prev);
            prev = prof.u[k];
        }

        // Gradient integral via the stored derivative (trapezoid is enough
        // for a 1e-4 identity check).
        const double dr = prof.r_max / static_cast<double>(prof.u.size() - 1);
        const double area = (dim == 2) ? 2.0 * M_PI : 4.0 * M_PI;
        double grad = 0.0;
        for (std::size_t k = 0; k + 1 < prof.u.size(); ++k) {
            const double r0 = prof.r[k], r1 = prof.r[k + 1];
            const double f0 = prof.du[k] * prof.du[k] * std::pow(r0, dim - 1);
            const double f1 = prof.du[k + 1] * prof.du[k + 1] * std::pow(r1, dim - 1);
            grad += 0.5 * (f0 + f1) * dr;
        }
        grad *= area;

        // Nehari: ∫|∇u|² + ∫u² = ∫u^p.
        CHECK(grad + prof.mass == doctest::Approx(prof.p_integral).epsilon(1e-4));
        // Pohozaev: (N-2)/2 ∫|∇u|² + N/2 ∫u² = N/p ∫u^p.
        const double poho = 0.5 * (dim - 2) * grad + 0.5 * dim * prof.mass;
        CHECK(poho == doctest::Approx(dim / p * prof.p_integral).epsilon(1e-4));
        // Together they force E = (1/2 - 1/p) ∫u^p.
        CHECK(prof.energy == doctest::Approx((0.5 - 1.0 / p) * prof.p_integral).epsilon(1e-6));
    }
}

TEST_CASE("the stored profile satisfies the ODE to high order") {
    const RadialProfile prof = solve_radial(2, FunctionalParams{4.0}, 30.0, 6000);
    CHECK(radial_ode_residual_max(prof) < 1e-6);
}

TEST_CASE("tail follows the linear asymptotics") {
    const RadialProfile prof = solve_radial(2, FunctionalParams{4.0}, 30.0, 6000);
    // 2D: u ~ C e^{-r}/sqrt(r), so log(u(r1)/u(r2)) ~ (r2-r1) + log sqrt(r2/r1).
    const double u15 = profile_value(prof, 15.0);
    const double u20 = profile_value(prof, 20.0);
    const double measured = std::log(u15 / u20);
    const double expected = 5.0 + 0.5 * std::log(20.0 / 15.0);
    // The subleading 1/r corrections contribute ~1/15 - 1/20 here.
    CHECK(measured == doctest::Approx(expected).epsilon(2e-3));

    const RadialProfile p3 = solve_radial(3, FunctionalParams{3.0}, 30.0, 6000);
    // 3D: u ~ C e^{-r}/r.
    const double v15 = profile_value(p3, 15.0);
    const double v20 = profile_value(p3, 20.0);
    CHECK(std::log(v15 / v20) == doctest::Approx(5.0 + std::log(20.0 / 15.0)).epsilon(2e-3));
}

TEST_CASE("interpolation reproduces mesh values and stays smooth between them") {
    const RadialProfile prof = solve_radial(2, FunctionalParams{4.0}, 25.0, 5000);
    const double dr = prof.r_max / static_cast<double>(prof.u.size() - 1);

    CHECK(profile_value(prof, 0.0) == doctest::Approx(prof.u_at_origin).epsilon(1e-14));
    CHECK(profile_value(prof, 100.0 * dr) == doctest::Approx(prof.u[100]).epsilon(1e-14));
    CHECK(profile_derivative(prof, 100.0 * dr) == doctest::Approx(prof.du[100]).epsilon(1e-14));

    // Hermite interpolation error between nodes is O(dr^4).
    const double mid = 100.5 * dr;
    const double coarse = 0.5 * (prof.u[100] + prof.u[101]);
    const double interp = profile_value(prof, mid);
    // The interpolant must beat the linear average by orders of magnitude;
    // compare both against a fine re-solve.
    const RadialProfile fine = solve_radial(2, FunctionalParams{4.0}, 25.0, 20000);
    const double truth = profile_value(fine, mid);
    CHECK(std::abs(interp - truth) < 1e-3 * std::abs(coarse - truth) + 1e-12);

    // Beyond the mesh the profile is defined as zero (the grids that consume
    // it are validated to sit inside r_max).
    CHECK(profile_value(prof, prof.r_max + 1.0) == 0.0);
    CHECK(profile_derivative(prof, prof.r_max + 1.0) == 0.0);
}

TEST_CASE("radial_interpolant puts the profile on a grid with the right symmetry") {
    const RadialProfile prof = solve_radial(2, FunctionalParams{4.0}, 30.0, 6000);
    const Grid g = make_grid(2, 8.0, 65);
    const ComplexField u = radial_interpolant(prof, g);

    // Center node carries u(0); the field is real and even in both axes.
    const int c = g.center_node(0);
    CHECK(u.values[g.index(c, c)].real() == doctest::Approx(prof.u_at_origin).epsilon(1e-12));
    CHECK(u.values[g.index(c, c)].imag() == 0.0);
    CHECK(u.values[g.index(c + 7, c + 3)] == u.values[g.index(c - 7, c - 3)]);
    CHECK(u.values[g.index(c + 7, c + 3)] == u.values[g.index(c - 7, c + 3)]);

    // A grid whose corner sticks out beyond the profile is rejected.
    const Grid big = make_grid(2, 25.0, 65);
    CHECK_THROWS_AS(radial_interpolant(prof, big), std::invalid_argument);
}

TEST_CASE("radial_partial approximates the true partial derivative") {
    const RadialProfile prof = solve_radial(2, FunctionalParams{4.0}, 30.0, 6000);
    const Grid g = make_grid(2, 8.0, 129);
    const ComplexField dx = radial_partial(prof, g, 0);

    // Compare against d_x u0 = (x/r) u0'(r) at a few off-axis nodes.
    for (const auto& [i0, i1] : {std::pair{80, 70}, std::pair{40, 90}, std::pair{100, 64}}) {
        const double x = g.coord(0, i0), y = g.coord(1, i1);
        const double r = std::hypot(x, y);
        const double expected = (x / r) * profile_derivative(prof, r);
        CHECK(dx.values[g.index(i0, i1)].real() == doctest::Approx(expected).epsilon(1e-10));
    }
}
