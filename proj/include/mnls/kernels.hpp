#pragma once

#include <complex>
#include <cstddef>

// Data-parallel inner loops behind the field operations. Every kernel here
// exists twice with the same contract: the primary version in mnls::kernels
// runs the node loop under OpenMP, the twin in mnls::kernels::ref is a plain
// serial loop kept as ground truth for tests and for the kernel benchmark.
//
// Reductions are deterministic by construction: the input is cut into fixed
// chunks, each chunk is summed serially into its own slot, and the partials
// are combined in chunk order. The result is therefore independent of the
// thread count and bit-identical between the parallel and serial versions.

namespace mnls::kernels {

using Complex = std::complex<double>;

inline constexpr std::size_t kReduceChunk = 8192;

// Grid/operator geometry for the stencil kernels. Unused axes have n=1.
struct StencilGeom {
    int dim = 2;
    int n[3] = {1, 1, 1};        // nodes per axis, row-major, last fastest
    double h[3] = {1, 1, 1};     // spacing per axis
    double x0[3] = {0, 0, 0};    // coordinate of node 0 per axis
    double b[9] = {0};           // antisymmetric dim×dim matrix, row-major
    bool magnetic = false;       // include the -2i A·∇ term (A = ½ b·x)
    double shift = 0.0;          // constant c in (−Δ_A + c)
};

// out = −Δu − 2i A·(∇u) [if magnetic] + (¼|b·x|² + shift)·u, exterior = 0.
// The scalar potential ¼|b·x|² is computed from coordinates on the fly;
// it is exactly |A(x)|² in the symmetric gauge.
void helmholtz_apply(const StencilGeom& g, const Complex* u, Complex* out);

// Central difference along one axis, exterior = 0.
void gradient_axis(const StencilGeom& g, int axis, const Complex* u, Complex* out);

// 2*dim+1 point Laplacian, exterior = 0.
void laplacian(const StencilGeom& g, const Complex* u, Complex* out);

// Deterministic reductions.
double sum(const double* a, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
// Σ Re(a)Re(b) + Im(a)Im(b): the real L² pairing before quadrature weights.
double dot_re(const Complex* a, const Complex* b, std::size_t n);
double sum_abs_sq(const Complex* a, std::size_t n);
// Σ |a_i|^p with |a|^p evaluated as (|a|²)^{p/2}; values below the 1e-300
// magnitude floor contribute 0 (continuous extension at 0, valid for p > 0).
double sum_abs_pow(const Complex* a, std::size_t n, double p);
double max_abs(const Complex* a, std::size_t n);

// Elementwise updates.
void axpy(double alpha, const Complex* x, Complex* y, std::size_t n);   // y += αx
void xpay(const Complex* x, double alpha, Complex* y, std::size_t n);   // y = x + αy
void scale(double alpha, Complex* x, std::size_t n);
// out = |u|^{p-2} u, with the same magnitude floor as sum_abs_pow.
void power_nonlinearity(const Complex* u, Complex* out, std::size_t n, double p);

namespace ref {
void helmholtz_apply(const StencilGeom& g, const Complex* u, Complex* out);
void gradient_axis(const StencilGeom& g, int axis, const Complex* u, Complex* out);
void laplacian(const StencilGeom& g, const Complex* u, Complex* out);
double sum(const double* a, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
double dot_re(const Complex* a, const Complex* b, std::size_t n);
double sum_abs_sq(const Complex* a, std::size_t n);
double sum_abs_pow(const Complex* a, std::size_t n, double p);
double max_abs(const Complex* a, std::size_t n);
void axpy(double alpha, const Complex* x, Complex* y, std::size_t n);
void xpay(const Complex* x, double alpha, Complex* y, std::size_t n);
void scale(double alpha, Complex* x, std::size_t n);
void power_nonlinearity(const Complex* u, Complex* out, std::size_t n, double p);
} // namespace ref

} // namespace mnls::kernels
