// Timing harness for the stencil and reduction kernels: runs each one through
// the OpenMP path and the serial reference, reports the speedup, and checks
// that both produce bitwise-identical results (the reductions are chunked so
// the summation order does not depend on the thread count).

#include "mnls/grid.hpp"
#include "mnls/kernels.hpp"
#include "mnls/magnetics.hpp"
#include "../src/geom.hpp"

#include <chrono>
#include <cstring>
#include <iomanip>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using mnls::Complex;

std::vector<Complex> random_field(std::size_t n, unsigned long seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<Complex> v(n);
    for (auto& z : v) z = Complex(dist(rng), dist(rng));
    return v;
}

template <typename Fn>
double time_best_of(int reps, Fn&& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        best = std::min(best, s);
    }
    return best;
}

bool bitwise_equal(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    return a.size() == b.size() &&
           std::memcmp(a.data(), b.data(), a.size() * sizeof(Complex)) == 0;
}

void report(const std::string& name, double t_ref, double t_par, bool same) {
    std::cout << "  " << std::left << std::setw(22) << name << std::right << std::fixed
              << std::setprecision(3) << std::setw(9) << t_ref * 1e3 << " ms" << std::setw(9)
              << t_par * 1e3 << " ms" << std::setprecision(2) << std::setw(8) << t_ref / t_par
              << "x   " << (same ? "bitwise-equal" : "MISMATCH") << "\n";
}

void bench_grid(const mnls::Grid& grid, double b_strength, int reps) {
    const mnls::MagneticData m = (grid.dim == 2) ? mnls::MagneticData::uniform_2d(b_strength)
                                                 : mnls::MagneticData::axis_3d(b_strength);
    const auto geom = mnls::detail::make_geom(grid, m.kernel_matrix().data(), true, 1.0);
    const std::size_t n = grid.size();

    const std::vector<Complex> u = random_field(n, 0x62656e63);
    const std::vector<Complex> v = random_field(n, 0x6b65726e);
    std::vector<Complex> out_ref(n), out_par(n);

    std::cout << grid.dim << "D grid, " << grid.points[0] << " points per axis (" << n
              << " nodes)\n";
    std::cout << "  " << std::left << std::setw(22) << "kernel" << std::right << std::setw(12)
              << "serial" << std::setw(12) << "openmp" << std::setw(9) << "speedup" << "\n";

    double t_ref = time_best_of(reps, [&] { mnls::kernels::ref::helmholtz_apply(geom, u.data(), out_ref.data()); });
    double t_par = time_best_of(reps, [&] { mnls::kernels::helmholtz_apply(geom, u.data(), out_par.data()); });
    report("helmholtz_apply", t_ref, t_par, bitwise_equal(out_ref, out_par));

    t_ref = time_best_of(reps, [&] { mnls::kernels::ref::laplacian(geom, u.data(), out_ref.data()); });
    t_par = time_best_of(reps, [&] { mnls::kernels::laplacian(geom, u.data(), out_par.data()); });
    report("laplacian", t_ref, t_par, bitwise_equal(out_ref, out_par));

    t_ref = time_best_of(reps, [&] { mnls::kernels::ref::gradient_axis(geom, 0, u.data(), out_ref.data()); });
    t_par = time_best_of(reps, [&] { mnls::kernels::gradient_axis(geom, 0, u.data(), out_par.data()); });
    report("gradient_axis(0)", t_ref, t_par, bitwise_equal(out_ref, out_par));

    t_ref = time_best_of(reps, [&] { mnls::kernels::ref::power_nonlinearity(u.data(), out_ref.data(), n, 3.5); });
    t_par = time_best_of(reps, [&] { mnls::kernels::power_nonlinearity(u.data(), out_par.data(), n, 3.5); });
    report("power_nonlinearity", t_ref, t_par, bitwise_equal(out_ref, out_par));

    double s_ref = 0.0, s_par = 0.0;
    t_ref = time_best_of(reps, [&] { s_ref = mnls::kernels::ref::dot_re(u.data(), v.data(), n); });
    t_par = time_best_of(reps, [&] { s_par = mnls::kernels::dot_re(u.data(), v.data(), n); });
    report("dot_re", t_ref, t_par, s_ref == s_par);

    t_ref = time_best_of(reps, [&] { s_ref = mnls::kernels::ref::sum_abs_pow(u.data(), n, 3.5); });
    t_par = time_best_of(reps, [&] { s_par = mnls::kernels::sum_abs_pow(u.data(), n, 3.5); });
    report("sum_abs_pow", t_ref, t_par, s_ref == s_par);

    t_ref = time_best_of(reps, [&] { s_ref = mnls::kernels::ref::sum_abs_sq(u.data(), n); });
    t_par = time_best_of(reps, [&] { s_par = mnls::kernels::sum_abs_sq(u.data(), n); });
    report("sum_abs_sq", t_ref, t_par, s_ref == s_par);

    out_ref = u;
    out_par = u;
    t_ref = time_best_of(reps, [&] { mnls::kernels::ref::axpy(0.25, v.data(), out_ref.data(), n); });
    t_par = time_best_of(reps, [&] { mnls::kernels::axpy(0.25, v.data(), out_par.data(), n); });
    report("axpy", t_ref, t_par, bitwise_equal(out_ref, out_par));
    std::cout << "\n";
}

} // namespace

int main(int argc, char** argv) {
    int reps = 5;
    if (argc > 1) reps = std::max(1, std::atoi(argv[1]));

#ifdef _OPENMP
    std::cout << "threads: " << omp_get_max_threads() << ", best of " << reps << " runs\n\n";
#else
    std::cout << "built without OpenMP, best of " << reps << " runs\n\n";
#endif

    bench_grid(mnls::make_grid(2, 12.0, 257), 0.2, reps);
    bench_grid(mnls::make_grid(3, 8.0, 97), 0.2, reps);
    return 0;
}
