#include "mnls/solver.hpp"

#include "mnls/analysis.hpp"
#include "mnls/kernels.hpp"
#include "geom.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace mnls {

namespace {

// ---- conjugate gradients on (−Δ_A + 1) -------------------------------------
// The operator is Hermitian positive definite (the A·∇ term commutes with
// the central difference, and −Δ_h ⪰ 0 with zero exterior), so CG over the
// real pairing of the complex values is plain symmetric CG on ℝ^{2n}.

constexpr int kCgCap = 20000;

int cg_solve(const kernels::StencilGeom& geom, const std::vector<Complex>& f,
             std::vector<Complex>& x, double rel_tol) {
    const std::size_t n = f.size();
    const double fn = std::sqrt(kernels::sum_abs_sq(f.data(), n));
    if (fn == 0.0) {
        std::fill(x.begin(), x.end(), Complex(0.0));
        return 0;
    }
    const double target = rel_tol * fn;

    std::vector<Complex> r(n), p(n), ap(n);
    kernels::helmholtz_apply(geom, x.data(), ap.data()); // warm start residual
    r = f;
    kernels::axpy(-1.0, ap.data(), r.data(), n);
    p = r;
    double rr = kernels::sum_abs_sq(r.data(), n);
    if (std::sqrt(rr) <= target) return 0;

    for (int it = 1; it <= kCgCap; ++it) {
        kernels::helmholtz_apply(geom, p.data(), ap.data());
        const double pap = kernels::dot_re(p.data(), ap.data(), n);
        if (!(pap > 0.0)) throw std::runtime_error("no-convergence: CG lost positive definiteness");
        const double alpha = rr / pap;
        kernels::axpy(alpha, p.data(), x.data(), n);
        kernels::axpy(-alpha, ap.data(), r.data(), n);
        const double rr_next = kernels::sum_abs_sq(r.data(), n);
        if (std::sqrt(rr_next) <= target) return it;
        kernels::xpay(r.data(), rr_next / rr, p.data(), n);
        rr = rr_next;
    }
    throw std::runtime_error("no-convergence: CG hit the iteration cap");
}

// ---- initialization ---------------------------------------------------------

ComplexField gaussian_init(const Grid& g, unsigned long seed) {
    double l_min = g.half_extent[0];
    for (int a = 1; a < g.dim; ++a) l_min = std::min(l_min, g.half_extent[a]);
    // mass outside the box for e^{−|x|²}: bounded by dim·e^{−L²} relative.
    if (g.dim * std::exp(-l_min * l_min) > 1e-8)
        throw std::invalid_argument("box too small: gaussian init mass outside the box exceeds 1e-8");

    std::array<double, 3> centre{0.0, 0.0, 0.0};
    Complex phase{1.0, 0.0};
    if (seed != 0) {
        // Robustness scrambling: shift the centre by up to one node per axis
        // and apply a constant phase. Deterministic in the seed.
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<int> off(-1, 1);
        for (int a = 0; a < g.dim; ++a) centre[static_cast<std::size_t>(a)] = off(rng) * g.spacing[static_cast<std::size_t>(a)];
        std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
        const double th = angle(rng);
        phase = Complex{std::cos(th), std::sin(th)};
    }

    ComplexField u = zeros(g);
    const int n2 = (g.dim == 3) ? g.points[2] : 1;
    std::size_t idx = 0;
    for (int i0 = 0; i0 < g.points[0]; ++i0) {
        for (int i1 = 0; i1 < g.points[1]; ++i1) {
            for (int i2 = 0; i2 < n2; ++i2, ++idx) {
                const double x0 = g.coord(0, i0) - centre[0];
                const double x1 = g.coord(1, i1) - centre[1];
                const double x2 = (g.dim == 3) ? g.coord(2, i2) - centre[2] : 0.0;
                u.values[idx] = phase * std::exp(-0.5 * (x0 * x0 + x1 * x1 + x2 * x2));
            }
        }
    }
    return u;
}

ComplexField oracle_init(const Grid& g, const FunctionalParams& fp) {
    double corner = 0.0;
    for (int a = 0; a < g.dim; ++a) corner += g.half_extent[a] * g.half_extent[a];
    const double r_max = std::max(20.0, std::ceil(std::sqrt(corner)) + 3.0);
    const int mesh = static_cast<int>(std::ceil(r_max / 0.005));
    const RadialProfile prof = solve_radial(g.dim, fp, r_max, mesh);

    // Init-mass precondition: the profile mass beyond the smallest
    // half-extent must be ≤ 1e−8 of the total.
    double l_min = g.half_extent[0];
    for (int a = 1; a < g.dim; ++a) l_min = std::min(l_min, g.half_extent[a]);
    const double dr = prof.r_max / static_cast<double>(prof.u.size() - 1);
    double outside = 0.0;
    for (std::size_t k = 0; k + 1 < prof.u.size(); ++k) {
        if (prof.r[k] < l_min) continue;
        const double rho0 = prof.u[k] * prof.u[k] * std::pow(prof.r[k], g.dim - 1);
        const double rho1 = prof.u[k + 1] * prof.u[k + 1] * std::pow(prof.r[k + 1], g.dim - 1);
        outside += 0.5 * dr * (rho0 + rho1);
    }
    outside *= (g.dim == 2) ? 2.0 * M_PI : 4.0 * M_PI;
    if (outside > 1e-8 * prof.mass)
        throw std::invalid_argument("box too small: radial init mass outside the box exceeds 1e-8");

    return radial_interpolant(prof, g);
}

// ---- fused functional evaluation -------------------------------------------
// One stencil pass gives (−Δ_A+1)u; the quadratic form, the ∫|u|^p integral,
// and the energy all come from it, so the reported energy and quotient are
// consistent to rounding by construction.

struct Eval {
    double q = 0.0; // ⟨(−Δ_A+1)u, u⟩
    double P = 0.0; // ∫|u|^p
    double E = 0.0;
};

Eval evaluate(const kernels::StencilGeom& geom, const std::vector<Complex>& u,
              std::vector<Complex>& hu, double vol, double p) {
    kernels::helmholtz_apply(geom, u.data(), hu.data());
    Eval ev;
    ev.q = kernels::dot_re(hu.data(), u.data(), u.size()) * vol;
    ev.P = kernels::sum_abs_pow(u.data(), u.size(), p) * vol;
    ev.E = 0.5 * ev.q - ev.P / p;
    return ev;
}

std::size_t node_nearest(const Grid& g, const std::array<double, 3>& x) {
    int idx[3] = {0, 0, 0};
    for (int a = 0; a < g.dim; ++a) {
        const double pos = (x[static_cast<std::size_t>(a)] + g.half_extent[static_cast<std::size_t>(a)]) /
                           g.spacing[static_cast<std::size_t>(a)];
        idx[a] = std::clamp(static_cast<int>(std::lround(pos)), 0, g.points[static_cast<std::size_t>(a)] - 1);
    }
    return (g.dim == 3) ? g.index(idx[0], idx[1], idx[2]) : g.index(idx[0], idx[1]);
}

void phase_normalize(ComplexField& u, std::size_t node) {
    const Complex z = u.values[node];
    const double mag = std::abs(z);
    if (mag < 1e-300) return;
    const Complex rot = std::conj(z) / mag;
    for (auto& v : u.values) v *= rot;
}

// The common minimization driver. `magnetic_terms` distinguishes the full
// covariant operator from the decoupled −Δ + |A|² + 1 one (same |A|²
// potential, no A·∇ coupling, real-valued iterates).
GroundstateResult run_minimize(const MagneticData& m, const FunctionalParams& fp,
                               const Grid& grid, const SolverConfig& cfg, bool magnetic_terms) {
    validate_exponent(fp, grid.dim);
    if (fp.p < 2.05) throw std::invalid_argument("exponent floor: refuse p < 2.05");
    if (m.dim != grid.dim) throw std::invalid_argument("grid-mismatch: field vs grid dimension");
    if (cfg.max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
    if (!(cfg.residual_tol > 0.0)) throw std::invalid_argument("residual_tol must be positive");

    const std::array<double, 9> bmat = m.kernel_matrix();
    const bool use_magnetic = magnetic_terms && !m.is_zero();
    const kernels::StencilGeom geom = detail::make_geom(grid, bmat.data(), use_magnetic, 1.0);
    // Recentring must not introduce magnetic phases in the decoupled (real)
    // problem; there the translation is a plain lattice shift.
    const MagneticData m_translate = magnetic_terms ? m : MagneticData::zero(grid.dim);

    ComplexField u = [&] {
        switch (cfg.init) {
            case InitKind::gaussian: return gaussian_init(grid, cfg.seed);
            case InitKind::radial_oracle: return oracle_init(grid, fp);
            case InitKind::file: {
                if (!cfg.init_field.has_value())
                    throw std::invalid_argument("init=file requires an init field");
                if (!(cfg.init_field->grid == grid))
                    throw std::invalid_argument("grid-mismatch: init field grid differs");
                return *cfg.init_field;
            }
        }
        throw std::invalid_argument("unknown init kind");
    }();
    if (!magnetic_terms) {
        // The decoupled problem is real-valued: project the init onto |u|.
        for (auto& v : u.values) v = Complex{std::abs(v), 0.0};
    }

    const double vol = cell_volume(grid);
    const std::size_t n = u.values.size();
    const double p = fp.p;

    std::vector<Complex> hu(n), work(n), d(n, Complex(0.0));
    std::vector<Complex> trial(n), hu_trial(n);
    std::vector<Complex> u_prev, d_prev;

    Eval ev = evaluate(geom, u.values, hu, vol, p);
    if (ev.P <= 0.0) throw std::invalid_argument("zero-field: cannot start the minimization");
    {
        const double t = std::pow(ev.q / ev.P, 1.0 / (p - 2.0));
        kernels::scale(t, u.values.data(), n);
        kernels::scale(t, hu.data(), n);
        ev.q *= t * t;
        ev.P *= std::pow(t, p);
        ev.E = 0.5 * ev.q - ev.P / p;
    }

    double alpha = (cfg.step_rule == StepRule::fixed) ? cfg.fixed_step : 1.0;
    bool have_prev = false;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;

    for (int iter = 1; iter <= cfg.max_iters; ++iter) {
        // g = (−Δ_A+1)u − |u|^{p−2}u, reusing the stored operator apply.
        kernels::power_nonlinearity(u.values.data(), work.data(), n, p);
        kernels::xpay(hu.data(), -1.0, work.data(), n); // work = hu − work
        residual = std::sqrt(kernels::sum_abs_sq(work.data(), n) * vol);
        if (residual <= cfg.residual_tol) {
            converged = true;
            iterations = iter - 1;
            break;
        }

        const double cg_tol = std::clamp(1e-3 * residual, 1e-12, 1e-3);
        cg_solve(geom, work, d, cg_tol); // warm-started on the previous direction

        if (cfg.step_rule == StepRule::adaptive_two_point && have_prev) {
            // Two-point (Barzilai-Borwein) step from the previous accepted
            // move and the change of the preconditioned gradient.
            double ss = 0.0, sy = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const Complex s = u.values[i] - u_prev[i];
                const Complex y = d[i] - d_prev[i];
                ss += s.real() * s.real() + s.imag() * s.imag();
                sy += s.real() * y.real() + s.imag() * y.imag();
            }
            // The upper clamp must admit very large steps: near-zero-curvature
            // magnetic-translation modes need α ≈ 1/μ to traverse, and the
            // energy backtracking below already guards against overshoot.
            alpha = (sy > 0.0) ? std::clamp(ss / sy, 0.05, 1e4) : 1.0;
        }
        if (cfg.step_rule == StepRule::adaptive_two_point) {
            u_prev = u.values;
            d_prev = d;
            have_prev = true;
        }

        bool accepted = false;
        double step = alpha;
        for (int tries = 0; tries < 30; ++tries) {
            trial = u.values;
            kernels::axpy(-step, d.data(), trial.data(), n);
            Eval et = evaluate(geom, trial, hu_trial, vol, p);
            if (et.P > 0.0) {
                const double t = std::pow(et.q / et.P, 1.0 / (p - 2.0));
                const double e_scaled = 0.5 * t * t * et.q - std::pow(t, p) * et.P / p;
                if (e_scaled <= ev.E + 1e-14 * std::abs(ev.E)) {
                    kernels::scale(t, trial.data(), n);
                    kernels::scale(t, hu_trial.data(), n);
                    u.values.swap(trial);
                    hu.swap(hu_trial);
                    ev.q = t * t * et.q;
                    ev.P = std::pow(t, p) * et.P;
                    ev.E = e_scaled;
                    accepted = true;
                    break;
                }
            }
            if (cfg.step_rule == StepRule::fixed)
                throw std::runtime_error("energy-increase-detected: fixed step raised the energy");
            step *= 0.5;
        }
        if (!accepted)
            throw std::runtime_error("energy-increase-detected: backtracking exhausted");
        iterations = iter;

        // Recentre immediately on the first pass (inits displaced by whole
        // nodes snap home before the flow builds transients) and
        // periodically afterwards.
        if (cfg.recentre_every > 0 && (iter == 1 || iter % cfg.recentre_every == 0)) {
            const std::array<double, 3> com = center_of_mass(u);
            std::array<double, 3> shift{0.0, 0.0, 0.0};
            bool moved = false;
            for (int a = 0; a < grid.dim; ++a) {
                shift[static_cast<std::size_t>(a)] =
                    -std::round(com[static_cast<std::size_t>(a)] / grid.spacing[static_cast<std::size_t>(a)]) *
                    grid.spacing[static_cast<std::size_t>(a)];
                if (shift[static_cast<std::size_t>(a)] != 0.0) moved = true;
            }
            if (moved) {
                u = magnetic_translate(u, m_translate, shift);
                // Carry the two-point history into the new frame instead of
                // resetting it: the shallow translation modes need the
                // accumulated curvature estimate to stay traversable.
                if (have_prev) {
                    ComplexField tmp{grid, std::move(u_prev)};
                    u_prev = magnetic_translate(tmp, m_translate, shift).values;
                    tmp.values = std::move(d_prev);
                    d_prev = magnetic_translate(tmp, m_translate, shift).values;
                }
                ev = evaluate(geom, u.values, hu, vol, p);
            }
        }
    }

    if (!converged && residual > cfg.residual_tol)
        throw std::runtime_error("max-iters-exceeded: residual " + std::to_string(residual) +
                                 " after " + std::to_string(cfg.max_iters) + " iterations");

    // Final recentring and phase normalization, then recompute everything on
    // the exact field being returned.
    if (cfg.recentre_every > 0) {
        const std::array<double, 3> com = center_of_mass(u);
        std::array<double, 3> shift{0.0, 0.0, 0.0};
        bool moved = false;
        for (int a = 0; a < grid.dim; ++a) {
            shift[static_cast<std::size_t>(a)] =
                -std::round(com[static_cast<std::size_t>(a)] / grid.spacing[static_cast<std::size_t>(a)]) *
                grid.spacing[static_cast<std::size_t>(a)];
            if (shift[static_cast<std::size_t>(a)] != 0.0) moved = true;
        }
        if (moved) u = magnetic_translate(u, m_translate, shift);
    }
    phase_normalize(u, node_nearest(grid, center_of_mass(u)));

    ev = evaluate(geom, u.values, hu, vol, p);
    kernels::power_nonlinearity(u.values.data(), work.data(), n, p);
    kernels::xpay(hu.data(), -1.0, work.data(), n);

    GroundstateResult res;
    res.residual = std::sqrt(kernels::sum_abs_sq(work.data(), n) * vol);
    res.energy = ev.E;
    res.quotient = ev.q / std::pow(ev.P, 2.0 / p);
    res.iterations = iterations;
    res.center_of_mass = center_of_mass(u);
    res.magnetic = m;
    res.p = p;
    res.field = std::move(u);
    return res;
}

} // namespace

ComplexField resolvent_solve(const MagneticData& m, const ComplexField& f, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("resolvent tolerance must be positive");
    if (m.dim != f.grid.dim) throw std::invalid_argument("grid-mismatch in resolvent_solve");
    const std::array<double, 9> bmat = m.kernel_matrix();
    const kernels::StencilGeom geom = detail::make_geom(f.grid, bmat.data(), !m.is_zero(), 1.0);
    ComplexField v = zeros(f.grid);
    cg_solve(geom, f.values, v.values, tol);
    return v;
}

GroundstateResult minimize_groundstate(const MagneticData& m, const FunctionalParams& fp,
                                       const Grid& grid, const SolverConfig& cfg) {
    return run_minimize(m, fp, grid, cfg, true);
}

GroundstateResult solve_decoupled(const MagneticData& m, const FunctionalParams& fp,
                                  const Grid& grid, const SolverConfig& cfg) {
    return run_minimize(m, fp, grid, cfg, false);
}

} // namespace mnls
