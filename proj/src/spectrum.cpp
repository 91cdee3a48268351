#include "mnls/spectrum.hpp"

#include "mnls/kernels.hpp"
#include "geom.hpp"
#include "pool.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace mnls {

namespace {

using VecC = std::vector<Complex>;

// W[w] on raw value arrays; the stable grouped form from the header.
void w_apply(const VecC& u, double p, const VecC& w, VecC& out) {
    const std::size_t n = u.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double mag = std::abs(u[i]);
        const double pot = std::pow(mag, p - 2.0);
        if (mag > 1e-30) {
            const Complex uh = u[i] / mag;
            const double cross = (p - 2.0) * (uh.real() * w[i].real() + uh.imag() * w[i].imag());
            out[i] = pot * (w[i] + cross * uh);
        } else {
            out[i] = pot * w[i];
        }
    }
}

// Plain CG on (−Δ_A+1), identical contract to the solver's resolvent but on
// raw arrays with a warm start. Throws no-convergence at the cap.
int cg_solve(const kernels::StencilGeom& geom, const VecC& f, VecC& x, double rel_tol) {
    const std::size_t n = f.size();
    const double fn = std::sqrt(kernels::sum_abs_sq(f.data(), n));
    if (fn == 0.0) {
        std::fill(x.begin(), x.end(), Complex(0.0));
        return 0;
    }
    const double target = rel_tol * fn;
    VecC r(n), p(n), ap(n);
    kernels::helmholtz_apply(geom, x.data(), ap.data());
    r = f;
    kernels::axpy(-1.0, ap.data(), r.data(), n);
    p = r;
    double rr = kernels::sum_abs_sq(r.data(), n);
    if (std::sqrt(rr) <= target) return 0;
    for (int it = 1; it <= 20000; ++it) {
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

// Eigen-decomposition of a symmetric tridiagonal matrix by the implicit QL
// method with Wilkinson shifts (classic tql2). d holds the diagonal on entry
// and the eigenvalues on exit; e the subdiagonal (e[i] couples i and i+1).
// z (m×m row-major, initialized to identity by this routine) returns the
// eigenvectors in columns. Returns false if an eigenvalue fails to converge.
bool tql2(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z, int m) {
    z.assign(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) z[static_cast<std::size_t>(i) * m + i] = 1.0;
    if (m == 1) return true;
    e.resize(static_cast<std::size_t>(m), 0.0);
    e[static_cast<std::size_t>(m) - 1] = 0.0;

    for (int l = 0; l < m; ++l) {
        int iter = 0;
        int mm;
        do {
            for (mm = l; mm < m - 1; ++mm) {
                const double dd = std::abs(d[mm]) + std::abs(d[mm + 1]);
                if (std::abs(e[mm]) <= DBL_EPSILON * dd) break;
            }
            if (mm != l) {
                if (iter++ == 50) return false;
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[mm] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i = mm - 1;
                for (; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[mm] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    for (int k = 0; k < m; ++k) {
                        f = z[static_cast<std::size_t>(k) * m + i + 1];
                        z[static_cast<std::size_t>(k) * m + i + 1] = s * z[static_cast<std::size_t>(k) * m + i] + c * f;
                        z[static_cast<std::size_t>(k) * m + i] = c * z[static_cast<std::size_t>(k) * m + i] - s * f;
                    }
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[mm] = 0.0;
            }
        } while (mm != l);
    }
    return true;
}

struct LockedPair {
    double lambda = 0.0;
    double residual = 0.0;
    VecC y;
};

MagneticData field_of_strength(int dim, double b) {
    return (dim == 2) ? MagneticData::uniform_2d(b) : MagneticData::axis_3d(b);
}

} // namespace

ComplexField linearized_potential_apply(const ComplexField& u, const FunctionalParams& fp,
                                        const ComplexField& w) {
    if (!(u.grid == w.grid)) throw std::invalid_argument("grid-mismatch in linearized_potential_apply");
    ComplexField out = zeros(u.grid);
    w_apply(u.values, fp.p, w.values, out.values);
    return out;
}

ComplexField linearized_operator_apply(const ComplexField& u, const MagneticData& m,
                                       const FunctionalParams& fp, const ComplexField& w,
                                       double resolvent_tol) {
    return resolvent_solve(m, linearized_potential_apply(u, fp, w), resolvent_tol);
}

SpectrumResult top_eigenvalues(const ComplexField& u, const MagneticData& m,
                               const FunctionalParams& fp, int k, double tol) {
    if (k < 1 || k > 12) throw std::invalid_argument("top_eigenvalues supports 1 <= k <= 12");
    if (!(tol > 0.0)) throw std::invalid_argument("eigenvalue tolerance must be positive");
    if (m.dim != u.grid.dim) throw std::invalid_argument("grid-mismatch in top_eigenvalues");
    validate_exponent(fp, u.grid.dim);

    const Grid& g = u.grid;
    const std::size_t n = u.values.size();
    const double vol = cell_volume(g);
    const std::array<double, 9> bmat = m.kernel_matrix();
    const kernels::StencilGeom geom = detail::make_geom(g, bmat.data(), !m.is_zero(), 1.0);
    const double cg_tol = 1e-2 * tol;

    auto apply_h = [&](const VecC& x, VecC& out) { kernels::helmholtz_apply(geom, x.data(), out.data()); };
    // ⟨x, y⟩_{H_A} given hx = (−Δ_A+1)x.
    auto ip_h = [&](const VecC& hx, const VecC& y) { return kernels::dot_re(hx.data(), y.data(), n) * vol; };

    std::vector<LockedPair> locked;
    VecC scratch_h(n);

    // Project w H_A-orthogonal to the locked eigenvectors (two passes).
    auto deflate = [&](VecC& w) {
        for (int pass = 0; pass < 2 && !locked.empty(); ++pass) {
            apply_h(w, scratch_h);
            for (const auto& lp : locked) {
                const double c = ip_h(scratch_h, lp.y);
                kernels::axpy(-c, lp.y.data(), w.data(), n);
            }
        }
    };

    constexpr int kMaxRounds = 8;
    constexpr unsigned long long kSeedBase = 0x6d6e6c73ULL;

    // Lock two pairs beyond the request: a single-seed Lanczos run surfaces
    // one copy of a degenerate eigenvalue at a time, so the buffer lets the
    // deflated restarts dig out the remaining copies before the final top-k
    // cut (the deflated complement's top IS the missing copy).
    const int k_target = k + 2;

    for (int round = 0; round < kMaxRounds && static_cast<int>(locked.size()) < k_target; ++round) {
        // Fresh random seed vector, deflated against everything already locked.
        std::mt19937_64 rng(kSeedBase + static_cast<unsigned long long>(round));
        std::normal_distribution<double> gauss(0.0, 1.0);
        VecC w(n);
        for (auto& v : w) v = Complex{gauss(rng), gauss(rng)};
        deflate(w);
        apply_h(w, scratch_h);
        double nrm = std::sqrt(ip_h(scratch_h, w));
        if (!(nrm > 1e-12)) continue;
        kernels::scale(1.0 / nrm, w.data(), n);

        const int need = k_target - static_cast<int>(locked.size());
        const int m_max = std::min<int>(120, static_cast<int>(2 * n));
        std::vector<VecC> basis;
        basis.push_back(w);
        std::vector<double> alpha, beta;
        VecC f(n), lv(n, Complex(0.0)), z(n);

        bool run_done = false;
        while (!run_done) {
            const int j = static_cast<int>(basis.size()) - 1;
            w_apply(u.values, fp.p, basis[static_cast<std::size_t>(j)], f);
            cg_solve(geom, f, lv, cg_tol); // warm-started on the previous L-apply
            // α_j = ⟨L v_j, v_j⟩_{H_A} = ⟨W v_j, v_j⟩_{L²}: exact even with CG error.
            alpha.push_back(ip_h(f, basis[static_cast<std::size_t>(j)]));

            w = lv;
            kernels::axpy(-alpha.back(), basis[static_cast<std::size_t>(j)].data(), w.data(), n);
            if (j > 0) kernels::axpy(-beta.back(), basis[static_cast<std::size_t>(j) - 1].data(), w.data(), n);

            // Full reorthogonalization (two classical Gram-Schmidt passes)
            // against the run basis and the locked eigenvectors.
            for (int pass = 0; pass < 2; ++pass) {
                apply_h(w, scratch_h);
                for (const auto& vb : basis) {
                    const double c = ip_h(scratch_h, vb);
                    kernels::axpy(-c, vb.data(), w.data(), n);
                }
                for (const auto& lp : locked) {
                    const double c = ip_h(scratch_h, lp.y);
                    kernels::axpy(-c, lp.y.data(), w.data(), n);
                }
            }
            apply_h(w, scratch_h);
            const double b_next = std::sqrt(std::max(0.0, ip_h(scratch_h, w)));

            const bool breakdown = !(b_next > 1e-10);
            const bool at_cap = static_cast<int>(basis.size()) >= m_max;

            bool estimates_converged = false;
            if (!breakdown && !at_cap && basis.size() % 8 == 0) {
                // Cheap convergence probe on the tridiagonal Ritz values.
                std::vector<double> d = alpha, e = beta, zz;
                const int mdim = static_cast<int>(d.size());
                e.push_back(0.0);
                if (tql2(d, e, zz, mdim)) {
                    std::vector<int> order(static_cast<std::size_t>(mdim));
                    std::iota(order.begin(), order.end(), 0);
                    std::sort(order.begin(), order.end(), [&](int a, int b) { return d[a] > d[b]; });
                    estimates_converged = mdim >= need;
                    for (int t = 0; t < need && estimates_converged; ++t) {
                        const double est = std::abs(b_next * zz[static_cast<std::size_t>(mdim - 1) * mdim + order[static_cast<std::size_t>(t)]]);
                        if (est > 0.3 * tol) estimates_converged = false;
                    }
                }
            }

            if (breakdown || at_cap || estimates_converged) {
                run_done = true;
            } else {
                beta.push_back(b_next);
                kernels::scale(1.0 / b_next, w.data(), n);
                basis.push_back(w);
            }
        }

        // Rayleigh-Ritz on the accumulated tridiagonal matrix.
        std::vector<double> d = alpha, e = beta, zz;
        const int mdim = static_cast<int>(d.size());
        e.push_back(0.0);
        if (!tql2(d, e, zz, mdim))
            throw std::runtime_error("breakdown: tridiagonal eigensolve stalled");
        std::vector<int> order(static_cast<std::size_t>(mdim));
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) { return d[a] > d[b]; });

        for (int t = 0; t < mdim && static_cast<int>(locked.size()) < k_target; ++t) {
            const int col = order[static_cast<std::size_t>(t)];
            VecC y(n, Complex(0.0));
            for (int j = 0; j < mdim; ++j)
                kernels::axpy(zz[static_cast<std::size_t>(j) * mdim + col], basis[static_cast<std::size_t>(j)].data(), y.data(), n);

            // Honest Rayleigh residual of the Ritz pair in the H_A norm.
            apply_h(y, scratch_h);
            const double ny = std::sqrt(ip_h(scratch_h, y));
            if (!(ny > 1e-12)) continue;
            w_apply(u.values, fp.p, y, f);
            VecC ly(n, Complex(0.0));
            cg_solve(geom, f, ly, cg_tol);
            kernels::axpy(-d[static_cast<std::size_t>(col)], y.data(), ly.data(), n); // ly = L y − λ y
            apply_h(ly, scratch_h);
            const double res = std::sqrt(std::max(0.0, ip_h(scratch_h, ly))) / ny;
            if (res > tol) break; // lower Ritz pairs are no better: restart deflated

            kernels::scale(1.0 / ny, y.data(), n);
            locked.push_back(LockedPair{d[static_cast<std::size_t>(col)], res, std::move(y)});
        }
    }

    if (static_cast<int>(locked.size()) < k)
        throw std::runtime_error("breakdown: eigensolver could not converge the requested pairs");

    std::sort(locked.begin(), locked.end(),
              [](const LockedPair& a, const LockedPair& b) { return a.lambda > b.lambda; });
    locked.resize(static_cast<std::size_t>(k));

    SpectrumResult out;
    out.inner_product = "H_A";
    for (auto& lp : locked) {
        out.eigenvalues.push_back(lp.lambda);
        out.rayleigh_residuals.push_back(lp.residual);
        ComplexField ef = zeros(g);
        ef.values = std::move(lp.y);
        out.eigenvectors.push_back(std::move(ef));
    }
    return out;
}

SpectrumSweep spectrum_convergence_sweep(const std::vector<double>& b_list,
                                         const FunctionalParams& fp, const Grid& grid,
                                         const SolverConfig& cfg, double tol, int workers) {
    if (b_list.empty()) throw std::invalid_argument("sweep needs at least one field strength");
    std::vector<double> bs = b_list;
    std::sort(bs.begin(), bs.end());
    if (std::none_of(bs.begin(), bs.end(), [](double b) { return b == 0.0; }))
        throw std::invalid_argument("sweep needs the zero-field row");

    const int k = grid.dim + 3;
    SpectrumSweep sweep;
    sweep.rows.resize(bs.size());
    detail::run_indexed(bs.size(), workers, [&](std::size_t i) {
        const MagneticData m = field_of_strength(grid.dim, bs[i]);
        const GroundstateResult gs = minimize_groundstate(m, fp, grid, cfg);
        const SpectrumResult spec = top_eigenvalues(gs.field, m, fp, k, tol);
        sweep.rows[i].b = bs[i];
        sweep.rows[i].lambda = spec.eigenvalues;
        sweep.rows[i].residual = spec.rayleigh_residuals;
    });

    const auto it0 = std::find_if(sweep.rows.begin(), sweep.rows.end(),
                                  [](const SpectrumSweepRow& r) { return r.b == 0.0; });
    for (auto& row : sweep.rows) {
        row.deviation.resize(row.lambda.size());
        for (std::size_t j = 0; j < row.lambda.size(); ++j)
            row.deviation[j] = std::abs(row.lambda[j] - it0->lambda[j]);
    }
    return sweep;
}

} // namespace mnls
