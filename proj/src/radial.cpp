#include "mnls/radial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mnls {

namespace {

// |u|^{p-2} u, continuous through u = 0 for p > 2.
double nonlinearity(double u, double p) {
    const double a = std::abs(u);
    if (a < 1e-300) return 0.0;
    return std::pow(a, p - 2.0) * u;
}

struct OdeState {
    double u;
    double v; // u'
};

// u″ = u − |u|^{p−2}u − (N−1)u′/r; at r = 0 the friction term limits to
// (N−1)u″(0), so u″(0) = (u − f(u))/N.
OdeState rhs(double r, const OdeState& y, int N, double p) {
    const double force = y.u - nonlinearity(y.u, p);
    double friction;
    if (r < 1e-14) {
        return OdeState{y.v, force / N};
    }
    friction = (N - 1) * y.v / r;
    return OdeState{y.v, force - friction};
}

OdeState rk4_step(double r, const OdeState& y, double h, int N, double p) {
    const OdeState k1 = rhs(r, y, N, p);
    const OdeState k2 = rhs(r + 0.5 * h, OdeState{y.u + 0.5 * h * k1.u, y.v + 0.5 * h * k1.v}, N, p);
    const OdeState k3 = rhs(r + 0.5 * h, OdeState{y.u + 0.5 * h * k2.u, y.v + 0.5 * h * k2.v}, N, p);
    const OdeState k4 = rhs(r + h, OdeState{y.u + h * k3.u, y.v + h * k3.v}, N, p);
    return OdeState{y.u + h / 6.0 * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u),
                    y.v + h / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v)};
}

enum class Shot { overshoot, undershoot, undecided };

// Integrate from the origin with fixed steps and classify: crossing u = 0
// is an overshoot (u(0) too large), u′ turning positive while u > 0 an
// undershoot (u(0) too small).
Shot classify(double s, int N, double p, double r_end, double h) {
    OdeState y{s, 0.0};
    double r = 0.0;
    while (r < r_end) {
        y = rk4_step(r, y, h, N, p);
        r += h;
        if (y.u <= 0.0) return Shot::overshoot;
        if (y.v > 0.0) return Shot::undershoot;
    }
    return Shot::undecided;
}

// Decaying solution of the linearized far field w″ + (N−1)w′/r − w = 0:
// K₀(r) in 2D, e^{−r}/r in 3D.
double tail_value(int N, double r) {
    if (N == 2) return std::cyl_bessel_k(0.0, r);
    return std::exp(-r) / r;
}

double tail_derivative(int N, double r) {
    if (N == 2) return -std::cyl_bessel_k(1.0, r);
    return -std::exp(-r) * (r + 1.0) / (r * r);
}

// Quintic smoothstep and its derivative (C² blend weight).
double smooth5(double t) { return t * t * t * (10.0 + t * (-15.0 + 6.0 * t)); }
double smooth5_d(double t) { return 30.0 * t * t * (1.0 - t) * (1.0 - t); }

// Composite Simpson over the uniform mesh (falls back to a trapezoid on the
// last interval when the count is even).
double simpson(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    double s = 0.0;
    std::size_t k = 0;
    for (; k + 2 < n; k += 2) s += h / 3.0 * (f[k] + 4.0 * f[k + 1] + f[k + 2]);
    if (k + 1 < n) s += 0.5 * h * (f[k] + f[k + 1]);
    return s;
}

} // namespace

RadialProfile solve_radial(int N, const FunctionalParams& fp, double r_max, int mesh) {
    if (N != 2 && N != 3) throw std::invalid_argument("radial dimension must be 2 or 3");
    validate_exponent(fp, N);
    if (fp.p < 2.05) throw std::invalid_argument("exponent floor: refuse p < 2.05");
    if (r_max < 20.0) throw std::invalid_argument("r_max must be at least 20");
    if (mesh < 100) throw std::invalid_argument("radial mesh too coarse (need >= 100 cells)");

    const double p = fp.p;
    const double h_shoot = 0.005;
    const double r_shoot = 40.0;

    // Energy lower bound for the shooting parameter: reaching u = 0 against
    // friction needs u²/2 − u^p/p < 0, i.e. s > (p/2)^{1/(p−2)}.
    double lo = std::pow(0.5 * p, 1.0 / (p - 2.0));
    double hi = lo;
    bool bracketed = false;
    for (int i = 0; i < 60; ++i) {
        hi *= 1.5;
        const Shot shot = classify(hi, N, p, r_shoot, h_shoot);
        if (shot == Shot::overshoot) {
            bracketed = true;
            break;
        }
        lo = hi;
    }
    if (!bracketed) throw std::runtime_error("bracket-not-found: no overshoot up to huge u(0)");

    // Bisect to machine tightness; the far tail quality depends directly on
    // how small the residual growing-mode seed is.
    for (int i = 0; i < 200 && (hi - lo) > 1e-15 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const Shot shot = classify(mid, N, p, r_shoot, h_shoot);
        if (shot == Shot::overshoot)
            hi = mid;
        else
            lo = mid; // undershoot and undecided both raise the floor
    }
    const double s_star = 0.5 * (lo + hi);

    // Final pass on the output mesh, four RK4 substeps per cell.
    RadialProfile prof;
    prof.dim = N;
    prof.p = p;
    prof.r_max = r_max;
    const std::size_t count = static_cast<std::size_t>(mesh) + 1;
    prof.r.resize(count);
    prof.u.resize(count);
    prof.du.resize(count);
    const double dr = r_max / mesh;
    for (std::size_t k = 0; k < count; ++k) prof.r[k] = dr * static_cast<double>(k);

    // Stop the forward integration once the omitted far-field nonlinearity
    // |u|^{p−1} is below the residual budget (or at r = 16, past which the
    // growing-mode contamination of the bisected shot builds up).
    const double u_switch = std::clamp(std::pow(5e-10, 1.0 / (p - 1.0)), 1e-6, 1e-3);
    const double r_freeze = 16.0;

    OdeState y{s_star, 0.0};
    prof.u[0] = y.u;
    prof.du[0] = y.v;
    std::size_t cut = count - 1;
    for (std::size_t k = 1; k < count; ++k) {
        const double r0 = prof.r[k - 1];
        const double sub = dr / 4.0;
        for (int j = 0; j < 4; ++j) y = rk4_step(r0 + j * sub, y, sub, N, p);
        prof.u[k] = y.u;
        prof.du[k] = y.v;
        if (y.u <= u_switch || prof.r[k] >= r_freeze) {
            cut = k;
            break;
        }
    }
    if (prof.u[cut] <= 0.0)
        throw std::runtime_error("non-monotone-profile: forward solution lost positivity");

    // Tail coefficient by least squares of u against the decaying solution
    // over the blend window [r_cut − 1, r_cut].
    const double blend_width = 1.0;
    const std::size_t blend_cells = static_cast<std::size_t>(std::ceil(blend_width / dr));
    if (cut <= blend_cells + 2)
        throw std::runtime_error("non-monotone-profile: decay region starts before the blend window");
    const std::size_t blend_lo = cut - blend_cells;
    double num = 0.0;
    double den = 0.0;
    for (std::size_t k = blend_lo; k <= cut; ++k) {
        const double w = tail_value(N, prof.r[k]);
        num += prof.u[k] * w;
        den += w * w;
    }
    const double c_tail = num / den;

    // Smooth C² blend from the ODE samples into C·tail(r).
    for (std::size_t k = blend_lo; k <= cut; ++k) {
        const double t = (prof.r[k] - prof.r[blend_lo]) / (prof.r[cut] - prof.r[blend_lo]);
        const double w = 1.0 - smooth5(t);
        const double wd = -smooth5_d(t) / (prof.r[cut] - prof.r[blend_lo]);
        const double tv = c_tail * tail_value(N, prof.r[k]);
        const double td = c_tail * tail_derivative(N, prof.r[k]);
        const double uo = prof.u[k];
        const double vo = prof.du[k];
        prof.u[k] = w * uo + (1.0 - w) * tv;
        prof.du[k] = w * vo + (1.0 - w) * td + wd * (uo - tv);
    }
    for (std::size_t k = cut + 1; k < count; ++k) {
        prof.u[k] = c_tail * tail_value(N, prof.r[k]);
        prof.du[k] = c_tail * tail_derivative(N, prof.r[k]);
    }

    prof.u_at_origin = prof.u[0];

    for (std::size_t k = 0; k + 1 < count; ++k) {
        if (!(prof.u[k] > 0.0) || prof.u[k + 1] >= prof.u[k])
            throw std::runtime_error("non-monotone-profile: samples must decrease strictly at r = " +
                                     std::to_string(prof.r[k]));
    }

    // ∫_{ℝ^N} g(|x|) dx = ω_{N−1} ∫ g(r) r^{N−1} dr with ω₁ = 2π, ω₂ = 4π.
    const double omega = (N == 2) ? 2.0 * M_PI : 4.0 * M_PI;
    std::vector<double> w(count);
    auto weighted = [&](auto&& f) {
        for (std::size_t k = 0; k < count; ++k)
            w[k] = f(k) * std::pow(prof.r[k], N - 1);
        return omega * simpson(w, dr);
    };
    prof.mass = weighted([&](std::size_t k) { return prof.u[k] * prof.u[k]; });
    prof.p_integral = weighted([&](std::size_t k) { return std::pow(prof.u[k], p); });
    prof.second_moment = weighted([&](std::size_t k) { return prof.r[k] * prof.r[k] * prof.u[k] * prof.u[k]; });
    const double grad_sq = weighted([&](std::size_t k) { return prof.du[k] * prof.du[k]; });
    prof.energy = 0.5 * (grad_sq + prof.mass) - prof.p_integral / p;

    return prof;
}

namespace {

// Hermite basis on the cell containing r; clamps to the mesh.
struct CellEval {
    double value;
    double derivative;
};

CellEval hermite_eval(const RadialProfile& prof, double r) {
    const std::size_t cells = prof.u.size() - 1;
    const double dr = prof.r_max / static_cast<double>(cells);
    double pos = r / dr;
    std::size_t k = static_cast<std::size_t>(pos);
    if (k >= cells) k = cells - 1;
    const double t = pos - static_cast<double>(k);
    const double u0 = prof.u[k], u1 = prof.u[k + 1];
    const double m0 = prof.du[k] * dr, m1 = prof.du[k + 1] * dr;
    const double t2 = t * t, t3 = t2 * t;
    const double value = (2 * t3 - 3 * t2 + 1) * u0 + (t3 - 2 * t2 + t) * m0 +
                         (-2 * t3 + 3 * t2) * u1 + (t3 - t2) * m1;
    const double deriv = ((6 * t2 - 6 * t) * u0 + (3 * t2 - 4 * t + 1) * m0 +
                          (-6 * t2 + 6 * t) * u1 + (3 * t2 - 2 * t) * m1) /
                         dr;
    return CellEval{value, deriv};
}

} // namespace

double profile_value(const RadialProfile& prof, double r) {
    if (r < 0.0 || r >= prof.r_max) return 0.0;
    return hermite_eval(prof, r).value;
}

double profile_derivative(const RadialProfile& prof, double r) {
    if (r < 0.0 || r >= prof.r_max) return 0.0;
    return hermite_eval(prof, r).derivative;
}

double radial_ode_residual_max(const RadialProfile& prof) {
    const std::size_t n = prof.u.size();
    const double dr = prof.r_max / static_cast<double>(n - 1);
    double worst = 0.0;
    for (std::size_t k = 3; k + 2 < n; ++k) {
        const double r = prof.r[k];
        // Five-point central differences of the stored values.
        const double d1 = (-prof.u[k + 2] + 8.0 * prof.u[k + 1] - 8.0 * prof.u[k - 1] + prof.u[k - 2]) /
                          (12.0 * dr);
        const double d2 = (-prof.u[k + 2] + 16.0 * prof.u[k + 1] - 30.0 * prof.u[k] +
                           16.0 * prof.u[k - 1] - prof.u[k - 2]) /
                          (12.0 * dr * dr);
        const double res = d2 + (prof.dim - 1) * d1 / r - prof.u[k] + nonlinearity(prof.u[k], prof.p);
        worst = std::max(worst, std::abs(res));
    }
    return worst;
}

ComplexField radial_interpolant(const RadialProfile& prof, const Grid& g) {
    double corner = 0.0;
    for (int a = 0; a < g.dim; ++a) corner += g.half_extent[a] * g.half_extent[a];
    if (std::sqrt(corner) > prof.r_max)
        throw std::invalid_argument("grid corner radius exceeds the radial profile extent");

    ComplexField out = zeros(g);
    const int n2 = (g.dim == 3) ? g.points[2] : 1;
    std::size_t idx = 0;
    for (int i0 = 0; i0 < g.points[0]; ++i0) {
        for (int i1 = 0; i1 < g.points[1]; ++i1) {
            for (int i2 = 0; i2 < n2; ++i2, ++idx) {
                const double x0 = g.coord(0, i0);
                const double x1 = g.coord(1, i1);
                const double x2 = (g.dim == 3) ? g.coord(2, i2) : 0.0;
                const double r = std::sqrt(x0 * x0 + x1 * x1 + x2 * x2);
                out.values[idx] = Complex{profile_value(prof, r), 0.0};
            }
        }
    }
    return out;
}

ComplexField radial_partial(const RadialProfile& prof, const Grid& g, int axis) {
    if (axis < 0 || axis >= g.dim) throw std::invalid_argument("axis out of range");
    ComplexField out = zeros(g);
    const int n2 = (g.dim == 3) ? g.points[2] : 1;
    std::size_t idx = 0;
    for (int i0 = 0; i0 < g.points[0]; ++i0) {
        for (int i1 = 0; i1 < g.points[1]; ++i1) {
            for (int i2 = 0; i2 < n2; ++i2, ++idx) {
                const double x[3] = {g.coord(0, i0), g.coord(1, i1),
                                     (g.dim == 3) ? g.coord(2, i2) : 0.0};
                const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
                if (r < 1e-14) continue; // u₀′(0) = 0, so the limit is 0
                out.values[idx] = Complex{profile_derivative(prof, r) * x[axis] / r, 0.0};
            }
        }
    }
    return out;
}

} // namespace mnls
