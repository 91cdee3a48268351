#include "mnls/kernels.hpp"

#include "kernels_body.hpp"

#include <cmath>
#include <vector>

// OpenMP drivers. Reductions collect per-chunk partial sums first and add
// them in chunk order afterwards, so results do not depend on the thread
// count and match the serial reference bit-for-bit.

namespace mnls::kernels {

namespace {

using ChunkFn = double (*)(const Complex*, std::size_t, std::size_t);

template <class F>
double reduce_chunks(std::size_t n, F&& chunk) {
    const std::ptrdiff_t nc = static_cast<std::ptrdiff_t>(body::chunk_count(n));
    std::vector<double> partial(static_cast<std::size_t>(nc));
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < nc; ++c) {
        const std::size_t lo = static_cast<std::size_t>(c) * kReduceChunk;
        const std::size_t hi = std::min(n, lo + kReduceChunk);
        partial[static_cast<std::size_t>(c)] = chunk(lo, hi);
    }
    double s = 0.0;
    for (double v : partial) s += v;
    return s;
}

template <class F>
void for_chunks(std::size_t n, F&& range) {
    const std::ptrdiff_t nc = static_cast<std::ptrdiff_t>(body::chunk_count(n));
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < nc; ++c) {
        const std::size_t lo = static_cast<std::size_t>(c) * kReduceChunk;
        const std::size_t hi = std::min(n, lo + kReduceChunk);
        range(lo, hi);
    }
}

} // namespace

void helmholtz_apply(const StencilGeom& g, const Complex* u, Complex* out) {
    if (g.dim == 2) {
#pragma omp parallel for schedule(static)
        for (int i0 = 0; i0 < g.n[0]; ++i0) body::helmholtz_row_2d(g, u, out, i0);
    } else {
#pragma omp parallel for schedule(static)
        for (int i0 = 0; i0 < g.n[0]; ++i0) body::helmholtz_plane_3d(g, u, out, i0);
    }
}

void gradient_axis(const StencilGeom& g, int axis, const Complex* u, Complex* out) {
    if (g.dim == 2) {
#pragma omp parallel for schedule(static)
        for (int i0 = 0; i0 < g.n[0]; ++i0) body::gradient_row_2d(g, axis, u, out, i0);
    } else {
#pragma omp parallel for schedule(static)
        for (int i0 = 0; i0 < g.n[0]; ++i0) body::gradient_plane_3d(g, axis, u, out, i0);
    }
}

void laplacian(const StencilGeom& g, const Complex* u, Complex* out) {
    if (g.dim == 2) {
#pragma omp parallel for schedule(static)
        for (int i0 = 0; i0 < g.n[0]; ++i0) body::laplacian_row_2d(g, u, out, i0);
    } else {
#pragma omp parallel for schedule(static)
        for (int i0 = 0; i0 < g.n[0]; ++i0) body::laplacian_plane_3d(g, u, out, i0);
    }
}

double sum(const double* a, std::size_t n) {
    return reduce_chunks(n, [a](std::size_t lo, std::size_t hi) { return body::sum_chunk(a, lo, hi); });
}

double dot(const double* a, const double* b, std::size_t n) {
    return reduce_chunks(n, [a, b](std::size_t lo, std::size_t hi) { return body::dot_chunk(a, b, lo, hi); });
}

double dot_re(const Complex* a, const Complex* b, std::size_t n) {
    return reduce_chunks(n, [a, b](std::size_t lo, std::size_t hi) { return body::dot_re_chunk(a, b, lo, hi); });
}

double sum_abs_sq(const Complex* a, std::size_t n) {
    return reduce_chunks(n, [a](std::size_t lo, std::size_t hi) { return body::abs_sq_chunk(a, lo, hi); });
}

double sum_abs_pow(const Complex* a, std::size_t n, double p) {
    return reduce_chunks(n, [a, p](std::size_t lo, std::size_t hi) { return body::abs_pow_chunk(a, lo, hi, p); });
}

double max_abs(const Complex* a, std::size_t n) {
    const std::ptrdiff_t nc = static_cast<std::ptrdiff_t>(body::chunk_count(n));
    std::vector<double> partial(static_cast<std::size_t>(nc));
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < nc; ++c) {
        const std::size_t lo = static_cast<std::size_t>(c) * kReduceChunk;
        const std::size_t hi = std::min(n, lo + kReduceChunk);
        partial[static_cast<std::size_t>(c)] = body::max_abs_sq_chunk(a, lo, hi);
    }
    double m = 0.0;
    for (double v : partial) m = std::max(m, v);
    return std::sqrt(m);
}

void axpy(double alpha, const Complex* x, Complex* y, std::size_t n) {
    for_chunks(n, [&](std::size_t lo, std::size_t hi) { body::axpy_range(alpha, x, y, lo, hi); });
}

void xpay(const Complex* x, double alpha, Complex* y, std::size_t n) {
    for_chunks(n, [&](std::size_t lo, std::size_t hi) { body::xpay_range(x, alpha, y, lo, hi); });
}

void scale(double alpha, Complex* x, std::size_t n) {
    for_chunks(n, [&](std::size_t lo, std::size_t hi) { body::scale_range(alpha, x, lo, hi); });
}

void power_nonlinearity(const Complex* u, Complex* out, std::size_t n, double p) {
    for_chunks(n, [&](std::size_t lo, std::size_t hi) { body::power_nonlinearity_range(u, out, lo, hi, p); });
}

} // namespace mnls::kernels
