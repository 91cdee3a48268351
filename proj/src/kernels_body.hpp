#pragma once

#include "mnls/kernels.hpp"

#include <algorithm>
#include <cmath>

// Shared loop bodies for the kernel pair. Both the OpenMP drivers
// (kernels.cpp) and the serial reference drivers (kernels_ref.cpp) call these
// exact functions, so the two variants perform identical arithmetic per node
// and per chunk; tests may compare them bit-for-bit.

namespace mnls::kernels::body {

inline std::size_t chunk_count(std::size_t n) {
    return (n + kReduceChunk - 1) / kReduceChunk;
}

// The magnitude floor of the |u|^p evaluations: amplitudes at or below it
// count as exact zeros, the continuous extension of t ↦ t^{p-1} at 0.
inline constexpr double kMagnitudeFloor = 1e-300;

// ---- chunk reducers (serial by design) -----------------------------------

inline double sum_chunk(const double* a, std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += a[i];
    return s;
}

inline double dot_chunk(const double* a, const double* b, std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += a[i] * b[i];
    return s;
}

inline double dot_re_chunk(const Complex* a, const Complex* b, std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i)
        s += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    return s;
}

inline double abs_sq_chunk(const Complex* a, std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i)
        s += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
    return s;
}

inline double abs_pow_chunk(const Complex* a, std::size_t lo, std::size_t hi, double p) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        const double m = std::sqrt(a[i].real() * a[i].real() + a[i].imag() * a[i].imag());
        if (m > kMagnitudeFloor) s += std::pow(m, p);
    }
    return s;
}

inline double max_abs_sq_chunk(const Complex* a, std::size_t lo, std::size_t hi) {
    double m = 0.0;
    for (std::size_t i = lo; i < hi; ++i)
        m = std::max(m, a[i].real() * a[i].real() + a[i].imag() * a[i].imag());
    return m;
}

// ---- elementwise ranges ----------------------------------------------------

inline void axpy_range(double alpha, const Complex* x, Complex* y, std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) y[i] += alpha * x[i];
}

inline void xpay_range(const Complex* x, double alpha, Complex* y, std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) y[i] = x[i] + alpha * y[i];
}

inline void scale_range(double alpha, Complex* x, std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) x[i] *= alpha;
}

inline void power_nonlinearity_range(const Complex* u, Complex* out, std::size_t lo,
                                     std::size_t hi, double p) {
    for (std::size_t i = lo; i < hi; ++i) {
        const double m = std::sqrt(u[i].real() * u[i].real() + u[i].imag() * u[i].imag());
        out[i] = (m > kMagnitudeFloor) ? u[i] * std::pow(m, p - 2.0) : Complex(0.0);
    }
}

// ---- stencil rows ----------------------------------------------------------
// 2D kernels work one i0-row at a time, 3D ones one i0-plane; the drivers
// parallelize over i0 only, so the bodies stay serial and deterministic.

inline void helmholtz_row_2d(const StencilGeom& g, const Complex* u, Complex* out, int i0) {
    const int n0 = g.n[0], n1 = g.n[1];
    const double ih0 = 1.0 / (g.h[0] * g.h[0]);
    const double ih1 = 1.0 / (g.h[1] * g.h[1]);
    const double d0 = 0.5 / g.h[0];
    const double d1 = 0.5 / g.h[1];
    const double xc0 = g.x0[0] + i0 * g.h[0];
    const std::size_t row = static_cast<std::size_t>(i0) * n1;
    for (int i1 = 0; i1 < n1; ++i1) {
        const std::size_t k = row + i1;
        const Complex uc = u[k];
        const Complex uL = (i0 > 0)      ? u[k - n1] : Complex(0.0);
        const Complex uR = (i0 < n0 - 1) ? u[k + n1] : Complex(0.0);
        const Complex uD = (i1 > 0)      ? u[k - 1]  : Complex(0.0);
        const Complex uU = (i1 < n1 - 1) ? u[k + 1]  : Complex(0.0);
        const double xc1 = g.x0[1] + i1 * g.h[1];
        // Symmetric gauge A = ½ b·x; the antisymmetry of b means A_j never
        // depends on x_j, which makes the discrete A·∇ term exactly
        // self-adjoint (it commutes with the central difference).
        const double a0 = 0.5 * (g.b[0] * xc0 + g.b[1] * xc1);
        const double a1 = 0.5 * (g.b[2] * xc0 + g.b[3] * xc1);
        const double asq = a0 * a0 + a1 * a1;
        Complex r = (2.0 * uc - uL - uR) * ih0 + (2.0 * uc - uD - uU) * ih1;
        r += (asq + g.shift) * uc;
        if (g.magnetic) {
            const Complex g0 = (uR - uL) * d0;
            const Complex g1 = (uU - uD) * d1;
            const Complex adg = a0 * g0 + a1 * g1;
            r += Complex(2.0 * adg.imag(), -2.0 * adg.real()); // −2i (A·∇u)
        }
        out[k] = r;
    }
}

inline void helmholtz_plane_3d(const StencilGeom& g, const Complex* u, Complex* out, int i0) {
    const int n0 = g.n[0], n1 = g.n[1], n2 = g.n[2];
    const double ih0 = 1.0 / (g.h[0] * g.h[0]);
    const double ih1 = 1.0 / (g.h[1] * g.h[1]);
    const double ih2 = 1.0 / (g.h[2] * g.h[2]);
    const double d0 = 0.5 / g.h[0];
    const double d1 = 0.5 / g.h[1];
    const double d2 = 0.5 / g.h[2];
    const double xc0 = g.x0[0] + i0 * g.h[0];
    const std::size_t s0 = static_cast<std::size_t>(n1) * n2;
    for (int i1 = 0; i1 < n1; ++i1) {
        const double xc1 = g.x0[1] + i1 * g.h[1];
        const std::size_t row = (static_cast<std::size_t>(i0) * n1 + i1) * n2;
        for (int i2 = 0; i2 < n2; ++i2) {
            const std::size_t k = row + i2;
            const Complex uc = u[k];
            const Complex uL = (i0 > 0)      ? u[k - s0] : Complex(0.0);
            const Complex uR = (i0 < n0 - 1) ? u[k + s0] : Complex(0.0);
            const Complex uD = (i1 > 0)      ? u[k - n2] : Complex(0.0);
            const Complex uU = (i1 < n1 - 1) ? u[k + n2] : Complex(0.0);
            const Complex uB = (i2 > 0)      ? u[k - 1]  : Complex(0.0);
            const Complex uF = (i2 < n2 - 1) ? u[k + 1]  : Complex(0.0);
            const double xc2 = g.x0[2] + i2 * g.h[2];
            const double a0 = 0.5 * (g.b[0] * xc0 + g.b[1] * xc1 + g.b[2] * xc2);
            const double a1 = 0.5 * (g.b[3] * xc0 + g.b[4] * xc1 + g.b[5] * xc2);
            const double a2 = 0.5 * (g.b[6] * xc0 + g.b[7] * xc1 + g.b[8] * xc2);
            const double asq = a0 * a0 + a1 * a1 + a2 * a2;
            Complex r = (2.0 * uc - uL - uR) * ih0 + (2.0 * uc - uD - uU) * ih1
                      + (2.0 * uc - uB - uF) * ih2;
            r += (asq + g.shift) * uc;
            if (g.magnetic) {
                const Complex g0 = (uR - uL) * d0;
                const Complex g1 = (uU - uD) * d1;
                const Complex g2 = (uF - uB) * d2;
                const Complex adg = a0 * g0 + a1 * g1 + a2 * g2;
                r += Complex(2.0 * adg.imag(), -2.0 * adg.real());
            }
            out[k] = r;
        }
    }
}

inline void gradient_row_2d(const StencilGeom& g, int axis, const Complex* u, Complex* out, int i0) {
    const int n0 = g.n[0], n1 = g.n[1];
    const double d = 0.5 / g.h[axis];
    const std::size_t row = static_cast<std::size_t>(i0) * n1;
    for (int i1 = 0; i1 < n1; ++i1) {
        const std::size_t k = row + i1;
        Complex up, um;
        if (axis == 0) {
            um = (i0 > 0)      ? u[k - n1] : Complex(0.0);
            up = (i0 < n0 - 1) ? u[k + n1] : Complex(0.0);
        } else {
            um = (i1 > 0)      ? u[k - 1] : Complex(0.0);
            up = (i1 < n1 - 1) ? u[k + 1] : Complex(0.0);
        }
        out[k] = (up - um) * d;
    }
}

inline void gradient_plane_3d(const StencilGeom& g, int axis, const Complex* u, Complex* out, int i0) {
    const int n0 = g.n[0], n1 = g.n[1], n2 = g.n[2];
    const double d = 0.5 / g.h[axis];
    const std::size_t s0 = static_cast<std::size_t>(n1) * n2;
    for (int i1 = 0; i1 < n1; ++i1) {
        const std::size_t row = (static_cast<std::size_t>(i0) * n1 + i1) * n2;
        for (int i2 = 0; i2 < n2; ++i2) {
            const std::size_t k = row + i2;
            Complex up, um;
            if (axis == 0) {
                um = (i0 > 0)      ? u[k - s0] : Complex(0.0);
                up = (i0 < n0 - 1) ? u[k + s0] : Complex(0.0);
            } else if (axis == 1) {
                um = (i1 > 0)      ? u[k - n2] : Complex(0.0);
                up = (i1 < n1 - 1) ? u[k + n2] : Complex(0.0);
            } else {
                um = (i2 > 0)      ? u[k - 1] : Complex(0.0);
                up = (i2 < n2 - 1) ? u[k + 1] : Complex(0.0);
            }
            out[k] = (up - um) * d;
        }
    }
}

inline void laplacian_row_2d(const StencilGeom& g, const Complex* u, Complex* out, int i0) {
    const int n0 = g.n[0], n1 = g.n[1];
    const double ih0 = 1.0 / (g.h[0] * g.h[0]);
    const double ih1 = 1.0 / (g.h[1] * g.h[1]);
    const std::size_t row = static_cast<std::size_t>(i0) * n1;
    for (int i1 = 0; i1 < n1; ++i1) {
        const std::size_t k = row + i1;
        const Complex uc = u[k];
        const Complex uL = (i0 > 0)      ? u[k - n1] : Complex(0.0);
        const Complex uR = (i0 < n0 - 1) ? u[k + n1] : Complex(0.0);
        const Complex uD = (i1 > 0)      ? u[k - 1]  : Complex(0.0);
        const Complex uU = (i1 < n1 - 1) ? u[k + 1]  : Complex(0.0);
        out[k] = (uL - 2.0 * uc + uR) * ih0 + (uD - 2.0 * uc + uU) * ih1;
    }
}

inline void laplacian_plane_3d(const StencilGeom& g, const Complex* u, Complex* out, int i0) {
    const int n0 = g.n[0], n1 = g.n[1], n2 = g.n[2];
    const double ih0 = 1.0 / (g.h[0] * g.h[0]);
    const double ih1 = 1.0 / (g.h[1] * g.h[1]);
    const double ih2 = 1.0 / (g.h[2] * g.h[2]);
    const std::size_t s0 = static_cast<std::size_t>(n1) * n2;
    for (int i1 = 0; i1 < n1; ++i1) {
        const std::size_t row = (static_cast<std::size_t>(i0) * n1 + i1) * n2;
        for (int i2 = 0; i2 < n2; ++i2) {
            const std::size_t k = row + i2;
            const Complex uc = u[k];
            const Complex uL = (i0 > 0)      ? u[k - s0] : Complex(0.0);
            const Complex uR = (i0 < n0 - 1) ? u[k + s0] : Complex(0.0);
            const Complex uD = (i1 > 0)      ? u[k - n2] : Complex(0.0);
            const Complex uU = (i1 < n1 - 1) ? u[k + n2] : Complex(0.0);
            const Complex uB = (i2 > 0)      ? u[k - 1]  : Complex(0.0);
            const Complex uF = (i2 < n2 - 1) ? u[k + 1]  : Complex(0.0);
            out[k] = (uL - 2.0 * uc + uR) * ih0 + (uD - 2.0 * uc + uU) * ih1
                   + (uB - 2.0 * uc + uF) * ih2;
        }
    }
}

} // namespace mnls::kernels::body
