// Acceptance gate: one criterion per invocation (argv[1] in 1..9), each
// printing a single PASS/FAIL line with the measured statistics and the
// tolerances pinned below. The process exits 0 only if the criterion holds.

#include "mnls/analysis.hpp"
#include "mnls/grid.hpp"
#include "mnls/io.hpp"
#include "mnls/magnetics.hpp"
#include "mnls/radial.hpp"
#include "mnls/solver.hpp"
#include "mnls/spectrum.hpp"
#include "mnls/variational.hpp"
#include "mnls/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <sys/wait.h>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace mnls;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

SolverConfig standard_config() {
    SolverConfig cfg;
    cfg.residual_tol = 1e-8;
    cfg.max_iters = 800;
    cfg.init = InitKind::radial_oracle;
    return cfg;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double field_mass(const ComplexField& u) {
    double acc = 0.0;
    for (const auto& z : u.values) acc += std::norm(z);
    return acc * cell_volume(u.grid);
}

double field_moment(const ComplexField& u) {
    const Grid& g = u.grid;
    const int n2 = (g.dim == 3) ? g.points[2] : 1;
    double acc = 0.0;
    std::size_t idx = 0;
    for (int i0 = 0; i0 < g.points[0]; ++i0)
        for (int i1 = 0; i1 < g.points[1]; ++i1)
            for (int i2 = 0; i2 < n2; ++i2, ++idx) {
                const double x = g.coord(0, i0), y = g.coord(1, i1);
                const double z = (g.dim == 3) ? g.coord(2, i2) : 0.0;
                acc += (x * x + y * y + z * z) * std::norm(u.values[idx]);
            }
    return acc * cell_volume(u.grid);
}

// --- criterion 1: radial-oracle equivalence --------------------------------
// N=2, p=4, B=0, L=12, n=257: energy, mass and second moment of the grid
// minimizer against the shooting oracle, 1e-3 relative each, under two
// minutes on one thread.
int criterion_1() {
    constexpr double kTol = 1e-3;
    constexpr double kBudget = 120.0;

#ifdef _OPENMP
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
#endif
    const auto t0 = Clock::now();

    const FunctionalParams fp{4.0};
    const RadialProfile oracle = solve_radial(2, fp, 30.0, 6000);
    const Grid g = make_grid(2, 12.0, 257);
    const GroundstateResult gs =
        minimize_groundstate(MagneticData::zero(2), fp, g, standard_config());

    const double elapsed = seconds_since(t0);
#ifdef _OPENMP
    omp_set_num_threads(saved);
#endif

    const double de = rel(gs.energy, oracle.energy);
    const double dm = rel(field_mass(gs.field), oracle.mass);
    const double dx = rel(field_moment(gs.field), oracle.second_moment);
    const bool ok = de <= kTol && dm <= kTol && dx <= kTol && elapsed <= kBudget;

    std::printf("%s criterion-1 radial-oracle-equivalence dE=%.3e dMass=%.3e dMoment=%.3e "
                "tol=%.0e time=%.0fs budget=%.0fs\n",
                ok ? "PASS" : "FAIL", de, dm, dx, kTol, elapsed, kBudget);
    return ok ? 0 : 1;
}

// --- criterion 2: nondegeneracy spectrum ------------------------------------
// λ1 = p-1 within 1e-2, λ2..λ4 = 1 within 2e-2, unit eigenspace within 5
// degrees of span{∂1 u0, ∂2 u0, i u0}, five-minute budget.
int criterion_2() {
    constexpr double kTolTop = 1e-2;
    constexpr double kTolUnit = 2e-2;
    constexpr double kMaxAngleDeg = 5.0;
    constexpr double kBudget = 300.0;

    const auto t0 = Clock::now();
    const FunctionalParams fp{4.0};
    const Grid g = make_grid(2, 12.0, 257);
    const MagneticData m = MagneticData::zero(2);
    const GroundstateResult gs = minimize_groundstate(m, fp, g, standard_config());
    const SpectrumResult spec = top_eigenvalues(gs.field, m, fp, 4, 1e-8);

    const double d1 = std::abs(spec.eigenvalues[0] - (fp.p - 1.0));
    double dunit = 0.0;
    for (int j = 1; j < 4; ++j) dunit = std::max(dunit, std::abs(spec.eigenvalues[j] - 1.0));

    // Real-orthonormalize the predicted eigenspace: the linearized operator
    // is only real-linear, so the span uses real coefficients and the real
    // L2 pairing (i∂u lives at eigenvalue 1/(p-1), not 1).
    const VectorField du = gradient_fd(gs.field);
    std::vector<ComplexField> basis;
    for (int a = 0; a < 2; ++a) {
        ComplexField f = zeros(g);
        f.values = du.comp[static_cast<std::size_t>(a)];
        basis.push_back(std::move(f));
    }
    ComplexField iu = gs.field;
    for (auto& z : iu.values) z *= Complex(0.0, 1.0);
    basis.push_back(std::move(iu));
    for (std::size_t i = 0; i < basis.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j)
            add_scaled(basis[i], -inner_product(basis[j], basis[i]), basis[j]);
        scale(basis[i], 1.0 / l2_norm(basis[i]));
    }

    double worst_angle = 0.0;
    for (int j = 1; j < 4; ++j) {
        ComplexField resid = spec.eigenvectors[static_cast<std::size_t>(j)];
        scale(resid, 1.0 / l2_norm(resid));
        for (const auto& b : basis) add_scaled(resid, -inner_product(b, resid), b);
        const double sine = std::min(1.0, l2_norm(resid));
        worst_angle = std::max(worst_angle, std::asin(sine) * 180.0 / M_PI);
    }

    const double elapsed = seconds_since(t0);
    const bool ok =
        d1 <= kTolTop && dunit <= kTolUnit && worst_angle < kMaxAngleDeg && elapsed <= kBudget;

    std::printf("%s criterion-2 nondegeneracy-spectrum |l1-3|=%.3e(tol %.0e) "
                "|l2..4-1|=%.3e(tol %.0e) angle=%.2fdeg(max %.0f) time=%.0fs budget=%.0fs\n",
                ok ? "PASS" : "FAIL", d1, kTolTop, dunit, kTolUnit, worst_angle, kMaxAngleDeg,
                elapsed, kBudget);
    return ok ? 0 : 1;
}

// --- criterion 3: spectrum convergence --------------------------------------
// |λ_k(b) − λ_k(0)| shrinks every time b halves, k = 1..4. Two of the four
// modes never move: λ₁ = p−1 (the state is an eigenfunction of its own
// linearization at every strength) and one unit eigenvalue (the phase mode iu
// survives every field). Their deviations are eigensolver noise, so pairs
// already below the eigensolver tolerance count as converged; the translation
// pair carries the real signal and must decrease strictly.
int criterion_3() {
    const FunctionalParams fp{4.0};
    const Grid g = make_grid(2, 12.0, 129);
    const std::vector<double> bs{0.0, 0.025, 0.05, 0.1, 0.2};
    const double eig_tol = 1e-6;

    const SpectrumSweep sweep = spectrum_convergence_sweep(bs, fp, g, standard_config(), eig_tol, 2);

    // rows sorted ascending: index 1..4 are the nonzero strengths.
    bool ok = true;
    int floored = 0;
    double worst_ratio = 0.0; // max of dev(b/2)/dev(b) above the floor, must stay < 1
    for (int k = 0; k < 4; ++k) {
        for (std::size_t i = 1; i + 1 < sweep.rows.size(); ++i) {
            const double smaller = sweep.rows[i].deviation[static_cast<std::size_t>(k)];
            const double larger = sweep.rows[i + 1].deviation[static_cast<std::size_t>(k)];
            if (smaller <= eig_tol && larger <= eig_tol) {
                ++floored;
                continue;
            }
            worst_ratio = std::max(worst_ratio, smaller / larger);
            if (!(smaller < larger)) ok = false;
        }
    }

    std::printf("%s criterion-3 spectrum-convergence worst-halving-ratio=%.3f (must be < 1) "
                "floored-pairs=%d(floor %.0e) dev(b=0.025,k=3)=%.3e dev(b=0.2,k=3)=%.3e\n",
                ok ? "PASS" : "FAIL", worst_ratio, floored, eig_tol,
                sweep.rows[1].deviation[2], sweep.rows[4].deviation[2]);
    return ok ? 0 : 1;
}

// --- criterion 4: energy curve ----------------------------------------------
// E minimal at b=0, monotone, convex to -1e-4 E(0), and the quadratic
// coefficient within 5% of (1/(4N)) ∫|x|² u0² from the oracle.
int criterion_4() {
    constexpr double kC2Tol = 0.05;
    constexpr double kBudget = 900.0;

    const auto t0 = Clock::now();
    const FunctionalParams fp{4.0};
    const Grid g = make_grid(2, 12.0, 257);
    const std::vector<double> bs{0.0, 0.05, 0.1, 0.15, 0.2};

    const EnergyCurve curve = sweep_energy(bs, fp, g, standard_config(), 4);
    const RadialProfile oracle = solve_radial(2, fp, 30.0, 6000);
    const double c2_oracle = oracle.second_moment / (4.0 * 2.0);

    const double e0 = curve.rows[0].energy;
    bool monotone = true;
    for (std::size_t i = 0; i + 1 < curve.rows.size(); ++i)
        if (!(curve.rows[i].energy < curve.rows[i + 1].energy)) monotone = false;
    const bool min_at_zero = monotone; // ascending list starting at b = 0
    const bool convex = curve.convexity_margin >= -1e-4 * e0;
    const double dc2 = rel(curve.c2_fit, c2_oracle);
    const double elapsed = seconds_since(t0);

    const bool ok = min_at_zero && monotone && convex && dc2 <= kC2Tol && elapsed <= kBudget;
    std::printf("%s criterion-4 energy-curve monotone=%d convexity-margin=%.3e(>=%.3e) "
                "c2=%.5f oracle=%.5f dc2=%.3f(tol %.2f) time=%.0fs budget=%.0fs\n",
                ok ? "PASS" : "FAIL", monotone ? 1 : 0, curve.convexity_margin, -1e-4 * e0,
                curve.c2_fit, c2_oracle, dc2, kC2Tol, elapsed, kBudget);
    return ok ? 0 : 1;
}

// --- criterion 5: energy derivative ------------------------------------------
// Central difference of E at b=0.2 against the moment formula, within 5%.
int criterion_5() {
    constexpr double kTol = 0.05;
    const FunctionalParams fp{4.0};
    const Grid g = make_grid(2, 12.0, 257);

    const DerivativeReport rep = energy_derivative_check(0.2, 0.05, fp, g, standard_config());

    const bool ok = rep.mismatch <= kTol;
    std::printf("%s criterion-5 energy-derivative fd=%.6f predicted=%.6f mismatch=%.3f "
                "tol=%.2f\n",
                ok ? "PASS" : "FAIL", rep.finite_difference, rep.predicted, rep.mismatch, kTol);
    return ok ? 0 : 1;
}

// --- criterion 6: decoupled equivalence --------------------------------------
// Magnetic vs decoupled energies within 1e-3 relative at b=0.2, and the
// decoupling defect of the magnetic groundstate falls at order h² between
// n=129 and n=257.
int criterion_6() {
    constexpr double kTol = 1e-3;
    constexpr double kMinRatio = 3.0; // h² would give 4

    const FunctionalParams fp{4.0};
    const double b = 0.2;

    const Grid fine = make_grid(2, 12.0, 257);
    const EquivalenceReport rep = decoupled_equivalence(b, fp, fine, standard_config());

    const Grid coarse = make_grid(2, 12.0, 129);
    const GroundstateResult gs_coarse =
        minimize_groundstate(MagneticData::uniform_2d(b), fp, coarse, standard_config());
    const double defect_coarse = decoupling_defect(gs_coarse.field, gs_coarse.magnetic);
    const double ratio = defect_coarse / rep.defect;

    const bool ok = rep.energy_gap <= kTol && ratio >= kMinRatio;
    std::printf("%s criterion-6 decoupled-equivalence energy-gap=%.3e(tol %.0e) "
                "defect129=%.3e defect257=%.3e ratio=%.2f(min %.1f)\n",
                ok ? "PASS" : "FAIL", rep.energy_gap, kTol, defect_coarse, rep.defect, ratio,
                kMinRatio);
    return ok ? 0 : 1;
}

// --- criterion 7: 2D decay law ------------------------------------------------
// Law-compensated tail flat to 0.05 over [6,10] on the L=14 box, at least
// five times flatter than the pure-exponential control.
int criterion_7() {
    constexpr double kFlatTol = 0.05;
    constexpr double kControlFactor = 5.0;

    const FunctionalParams fp{4.0};
    const double b = 0.2;
    const Grid g = make_grid(2, 14.0, 257);
    const GroundstateResult gs =
        minimize_groundstate(MagneticData::uniform_2d(b), fp, g, standard_config());

    const DecayFit fit = fit_decay_2d(gs.field, b, 6.0, 10.0);
    const DecayFit control = fit_decay_exponential(gs.field, 6.0, 10.0);
    const double factor = control.residual / fit.residual;

    const bool ok = fit.residual <= kFlatTol && factor >= kControlFactor;
    std::printf("%s criterion-7 2d-decay-law g-deviation=%.4f(tol %.2f) control=%.4f "
                "factor=%.1fx(min %.0fx)\n",
                ok ? "PASS" : "FAIL", fit.residual, kFlatTol, control.residual, factor,
                kControlFactor);
    return ok ? 0 : 1;
}

// --- criterion 8: 3D gaussian bound --------------------------------------------
// N=3, p=3, b=0.2 on 97³: the compensated statistic stays within a small
// margin of the on-axis maximum, and under a 20 minute budget.
int criterion_8() {
    constexpr double kMarginRel = 0.05; // allowed excess relative to max|u|
    constexpr double kBudget = 1200.0;

    const auto t0 = Clock::now();
    const FunctionalParams fp{3.0};
    const double b = 0.2;
    const Grid g = make_grid(3, 12.0, 97);
    const GroundstateResult gs =
        minimize_groundstate(MagneticData::axis_3d(b), fp, g, standard_config());

    const std::array<double, 3> axis{0.0, 0.0, b};
    const double stat = gaussian_bound_3d(gs.field, axis);
    const double scale = max_abs(gs.field);
    const double elapsed = seconds_since(t0);

    const bool ok = stat <= kMarginRel * scale && elapsed <= kBudget;
    std::printf("%s criterion-8 3d-gaussian-bound excess=%.4e margin=%.4e maxu=%.4f "
                "time=%.0fs budget=%.0fs\n",
                ok ? "PASS" : "FAIL", stat, kMarginRel * scale, scale, elapsed, kBudget);
    return ok ? 0 : 1;
}

// --- criterion 9: invariant suite ----------------------------------------------
// verify --quick: every check passes in under 60 s. Runs through the CLI
// binary when MNLS_BIN is set, in-process otherwise.
int criterion_9() {
    constexpr double kBudget = 60.0;

    const char* bin = std::getenv("MNLS_BIN");
    if (bin != nullptr) {
        const auto t0 = Clock::now();
        const std::string cmd = std::string(bin) + " verify --quick > /dev/null 2>&1";
        const int status = std::system(cmd.c_str());
        const double elapsed = seconds_since(t0);
        const int code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
        const bool ok = code == 0 && elapsed <= kBudget;
        std::printf("%s criterion-9 invariant-suite exit=%d time=%.1fs budget=%.0fs\n",
                    ok ? "PASS" : "FAIL", code, elapsed, kBudget);
        return ok ? 0 : 1;
    }

    const VerifyReport rep = run_quick_suite();
    int failed = 0;
    for (const auto& c : rep.checks)
        if (!c.pass) ++failed;
    const bool ok = rep.all_pass && rep.seconds <= kBudget;
    std::printf("%s criterion-9 invariant-suite checks=%zu failed=%d time=%.1fs budget=%.0fs\n",
                ok ? "PASS" : "FAIL", rep.checks.size(), failed, rep.seconds, kBudget);
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::fprintf(stderr, "usage: acceptance <criterion 1..9>\n");
        return 2;
    }
    const int crit = std::atoi(argv[1]);
    try {
        switch (crit) {
        case 1: return criterion_1();
        case 2: return criterion_2();
        case 3: return criterion_3();
        case 4: return criterion_4();
        case 5: return criterion_5();
        case 6: return criterion_6();
        case 7: return criterion_7();
        case 8: return criterion_8();
        case 9: return criterion_9();
        default:
            std::fprintf(stderr, "usage: acceptance <criterion 1..9>\n");
            return 2;
        }
    } catch (const std::exception& e) {
        std::printf("FAIL criterion-%d exception: %s\n", crit, e.what());
        return 1;
    }
}
