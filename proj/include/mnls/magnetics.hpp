#pragma once

#include "mnls/grid.hpp"

#include <array>

// Constant magnetic field data and the covariant calculus built on it. The
// gauge is fixed once and for all to the symmetric gauge A(x)[v] = ½B[x,v],
// which satisfies div A = 0 and A(x)·x = 0 identically; all solver code
// relies on both identities.

namespace mnls {

// B is a constant 2-form represented by an antisymmetric matrix:
// B[x,v] = xᵀ b v. As a vector, the potential covector A(x) = ½B[x,·]
// reads A(x) = ½ bᵀ x (in 2D with strength s this is the familiar
// A = (s/2)(−x₂, x₁)).
struct MagneticData {
    int dim = 2;
    std::array<double, 9> b{}; // row-major dim×dim, antisymmetric

    static MagneticData zero(int dim);
    // 2D: b_matrix [[0,s],[−s,0]], i.e. B(e₁,e₂) = s.
    static MagneticData uniform_2d(double strength);
    // 3D field along e₃: B[x,v] = s(x₁v₂ − x₂v₁), the ½(s e₃ × x)·v gauge.
    static MagneticData axis_3d(double strength);
    // Validates antisymmetry to machine precision, then symmetrizes exactly.
    static MagneticData from_matrix(int dim, const std::array<double, 9>& entries);

    bool is_zero() const;

    double entry(int j, int k) const { return b[static_cast<std::size_t>(j) * dim + k]; }

    // A(x) as a vector (½ bᵀ x); unused axes are 0.
    std::array<double, 3> potential_vector(const std::array<double, 3>& x) const;

    // |B| with the 2-form norm convention |B|² = ½ Σ_{j,m} B(e_j,e_m)²;
    // for the 2D matrix [[0,s],[−s,0]] this gives exactly |s|.
    double field_norm() const;

    // Matrix S with A(x) = ½ S x (the transpose of b), packed dim×dim
    // row-major for the stencil kernels.
    std::array<double, 9> kernel_matrix() const;
};

// A(x)[v] = ½ xᵀ b v. Throws on dimension mismatch. Antisymmetric in (x,v).
double potential_apply(const MagneticData& m, const std::array<double, 3>& x,
                       const std::array<double, 3>& v);

// |A(x)|² sampled on a grid (= ¼|b·x|²; in 2D with strength s, s²|x|²/4).
RealField potential_squared(const MagneticData& m, const Grid& g);

// D_A u = ∇u + iAu, componentwise (gradient_fd u)_j + i A_j(x) u(x).
VectorField covariant_gradient(const ComplexField& u, const MagneticData& m);

// −Δ_A u = −Δu − 2i A·∇u + |A|²u (div A = 0 in the symmetric gauge).
ComplexField magnetic_laplacian(const ComplexField& u, const MagneticData& m);

// Magnetic translation τ^A_a u(x) = e^{−iA(a)[x]} u(x−a) for a lattice shift
// a (integer multiple of the spacing per axis). Nodes shifted outside the
// box are dropped, vacated nodes become 0. Throws on off-lattice shifts.
ComplexField magnetic_translate(const ComplexField& u, const MagneticData& m,
                                const std::array<double, 3>& a);

// ũ = e^{−iψ}u. The caller pairs it with the shifted potential A + dψ.
ComplexField gauge_transform(const ComplexField& u, const RealField& psi);

// Symmetry diagnostic from the decoupling identity: for fields invariant
// under the rotations preserving A, the coupling term A·(ūDu) vanishes
// identically. Returns max over interior nodes of |A(x)·(conj(u)∇u)(x)|
// (complex modulus, so both the real and imaginary pairings are covered:
// the real part is ½A·∇|u|², the imaginary part the current coupling).
double decoupling_defect(const ComplexField& u, const MagneticData& m);

} // namespace mnls
