#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

// Uniform tensor grids on centered boxes [-L, L]^dim with the discrete
// calculus used everywhere else: central differences, the 2*dim+1 point
// Laplacian, rectangle-rule quadrature and the real L² pairing. Fields are
// truncated with a zero exterior (Dirichlet), so every stencil treats
// out-of-box neighbours as 0.

namespace mnls {

using Complex = std::complex<double>;

struct Grid {
    int dim = 0;                              // 2 or 3
    std::array<int, 3> points{1, 1, 1};       // nodes per axis (odd)
    std::array<double, 3> half_extent{0, 0, 0};
    std::array<double, 3> spacing{0, 0, 0};   // h = 2L/(n-1)

    std::size_t size() const {
        std::size_t n = 1;
        for (int a = 0; a < dim; ++a) n *= static_cast<std::size_t>(points[a]);
        return n;
    }
    // Coordinate of node k on an axis; node (n-1)/2 sits at the origin.
    double coord(int axis, int k) const {
        return -half_extent[axis] + k * spacing[axis];
    }
    int center_node(int axis) const { return (points[axis] - 1) / 2; }

    // Row-major linear index, last axis fastest.
    std::size_t index(int i0, int i1) const {
        return static_cast<std::size_t>(i0) * points[1] + i1;
    }
    std::size_t index(int i0, int i1, int i2) const {
        return (static_cast<std::size_t>(i0) * points[1] + i1) * points[2] + i2;
    }

    bool operator==(const Grid&) const = default;
};

// Throws std::invalid_argument unless dim ∈ {2,3}, points odd and ≥ 33,
// half_extent > 0.
Grid make_grid(int dim, double half_extent, int points);

struct RealField {
    Grid grid;
    std::vector<double> values;
};

struct ComplexField {
    Grid grid;
    std::vector<Complex> values;
};

// One complex component per axis (holds ∇u and D_A u).
struct VectorField {
    Grid grid;
    std::array<std::vector<Complex>, 3> comp;
};

RealField zeros_real(const Grid& g);
ComplexField zeros(const Grid& g);

// h^dim, the quadrature weight of one node.
double cell_volume(const Grid& g);

// Rectangle rule: Σ f(x_i) h^dim. Throws on non-finite input.
double integrate(const RealField& f);

// ∫ <u,v> with the canonical real pairing <a,b> = Re a·Re b + Im a·Im b.
// Throws on grid mismatch.
double inner_product(const ComplexField& u, const ComplexField& v);

double l2_norm(const ComplexField& u);

// Second-order central differences; at the boundary ring the exterior
// neighbour counts as zero, which keeps each difference matrix exactly
// antisymmetric (summation by parts holds with no boundary terms).
VectorField gradient_fd(const ComplexField& u);

// Standard 2*dim+1 point stencil, zero exterior.
ComplexField laplacian_fd(const ComplexField& u);

// --------------------------------------------------------------------------
// Small field utilities shared by the solvers (thin wrappers over kernels).
// --------------------------------------------------------------------------

// y += alpha*x
void add_scaled(ComplexField& y, double alpha, const ComplexField& x);
void scale(ComplexField& u, double alpha);
// Pointwise |u| as a real field.
RealField magnitude(const ComplexField& u);
// Σ |u|^p h^dim (the ∫|u|^p quadrature, evaluated in one fused pass).
double integrate_abs_pow(const ComplexField& u, double p);
double max_abs(const ComplexField& u);

} // namespace mnls
