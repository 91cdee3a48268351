#include "mnls/kernels.hpp"

#include "kernels_body.hpp"

#include <cmath>
#include <vector>

// Serial reference drivers: same loop bodies as the OpenMP versions, plain
// loops instead of parallel regions. Kept as ground truth for the kernel
// tests and the benchmark.

namespace mnls::kernels::ref {

namespace {

template <class F>
double reduce_chunks(std::size_t n, F&& chunk) {
    const std::size_t nc = body::chunk_count(n);
    double s = 0.0;
    for (std::size_t c = 0; c < nc; ++c) {
        const std::size_t lo = c * kReduceChunk;
        const std::size_t hi = std::min(n, lo + kReduceChunk);
        s += chunk(lo, hi);
    }
    return s;
}

} // namespace

void helmholtz_apply(const StencilGeom& g, const Complex* u, Complex* out) {
    if (g.dim == 2) {
        for (int i0 = 0; i0 < g.n[0]; ++i0) body::helmholtz_row_2d(g, u, out, i0);
    } else {
        for (int i0 = 0; i0 < g.n[0]; ++i0) body::helmholtz_plane_3d(g, u, out, i0);
    }
}

void gradient_axis(const StencilGeom& g, int axis, const Complex* u, Complex* out) {
    if (g.dim == 2) {
        for (int i0 = 0; i0 < g.n[0]; ++i0) body::gradient_row_2d(g, axis, u, out, i0);
    } else {
        for (int i0 = 0; i0 < g.n[0]; ++i0) body::gradient_plane_3d(g, axis, u, out, i0);
    }
}

void laplacian(const StencilGeom& g, const Complex* u, Complex* out) {
    if (g.dim == 2) {
        for (int i0 = 0; i0 < g.n[0]; ++i0) body::laplacian_row_2d(g, u, out, i0);
    } else {
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
    const std::size_t nc = body::chunk_count(n);
    double m = 0.0;
    for (std::size_t c = 0; c < nc; ++c) {
        const std::size_t lo = c * kReduceChunk;
        const std::size_t hi = std::min(n, lo + kReduceChunk);
        m = std::max(m, body::max_abs_sq_chunk(a, lo, hi));
    }
    return std::sqrt(m);
}

void axpy(double alpha, const Complex* x, Complex* y, std::size_t n) {
    body::axpy_range(alpha, x, y, 0, n);
}

void xpay(const Complex* x, double alpha, Complex* y, std::size_t n) {
    body::xpay_range(x, alpha, y, 0, n);
}

void scale(double alpha, Complex* x, std::size_t n) {
    body::scale_range(alpha, x, 0, n);
}

void power_nonlinearity(const Complex* u, Complex* out, std::size_t n, double p) {
    body::power_nonlinearity_range(u, out, 0, n, p);
}

} // namespace mnls::kernels::ref
