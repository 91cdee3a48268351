#include "mnls/magnetics.hpp"

#include "mnls/kernels.hpp"
#include "geom.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace mnls {

namespace {

void require_dim(const MagneticData& m, const Grid& g) {
    if (m.dim != g.dim)
        throw std::invalid_argument("grid-mismatch: field dimension " + std::to_string(m.dim) +
                                    " vs grid dimension " + std::to_string(g.dim));
}

} // namespace

MagneticData MagneticData::zero(int dim) {
    if (dim != 2 && dim != 3) throw std::invalid_argument("dimension must be 2 or 3");
    MagneticData m;
    m.dim = dim;
    return m;
}

MagneticData MagneticData::uniform_2d(double strength) {
    MagneticData m;
    m.dim = 2;
    m.b[0 * 2 + 1] = strength;
    m.b[1 * 2 + 0] = -strength;
    return m;
}

MagneticData MagneticData::axis_3d(double strength) {
    MagneticData m;
    m.dim = 3;
    m.b[0 * 3 + 1] = strength;
    m.b[1 * 3 + 0] = -strength;
    return m;
}

MagneticData MagneticData::from_matrix(int dim, const std::array<double, 9>& entries) {
    MagneticData m = zero(dim);
    double scale = 0.0;
    for (int j = 0; j < dim; ++j)
        for (int k = 0; k < dim; ++k) scale = std::max(scale, std::abs(entries[static_cast<std::size_t>(j) * dim + k]));
    for (int j = 0; j < dim; ++j) {
        for (int k = 0; k < dim; ++k) {
            const double bjk = entries[static_cast<std::size_t>(j) * dim + k];
            const double bkj = entries[static_cast<std::size_t>(k) * dim + j];
            if (std::abs(bjk + bkj) > 1e-12 * std::max(1.0, scale))
                throw std::invalid_argument("b_matrix is not antisymmetric");
            m.b[static_cast<std::size_t>(j) * dim + k] = 0.5 * (bjk - bkj);
        }
    }
    return m;
}

bool MagneticData::is_zero() const {
    for (int j = 0; j < dim; ++j)
        for (int k = 0; k < dim; ++k)
            if (entry(j, k) != 0.0) return false;
    return true;
}

std::array<double, 3> MagneticData::potential_vector(const std::array<double, 3>& x) const {
    std::array<double, 3> a{0.0, 0.0, 0.0};
    for (int j = 0; j < dim; ++j) {
        double s = 0.0;
        for (int k = 0; k < dim; ++k) s += entry(k, j) * x[static_cast<std::size_t>(k)];
        a[static_cast<std::size_t>(j)] = 0.5 * s;
    }
    return a;
}

double MagneticData::field_norm() const {
    double s = 0.0;
    for (int j = 0; j < dim; ++j)
        for (int k = 0; k < dim; ++k) s += entry(j, k) * entry(j, k);
    return std::sqrt(0.5 * s);
}

std::array<double, 9> MagneticData::kernel_matrix() const {
    std::array<double, 9> s{};
    for (int j = 0; j < dim; ++j)
        for (int k = 0; k < dim; ++k) s[static_cast<std::size_t>(j) * dim + k] = entry(k, j);
    return s;
}

double potential_apply(const MagneticData& m, const std::array<double, 3>& x,
                       const std::array<double, 3>& v) {
    double s = 0.0;
    for (int j = 0; j < m.dim; ++j)
        for (int k = 0; k < m.dim; ++k)
            s += x[static_cast<std::size_t>(j)] * m.entry(j, k) * v[static_cast<std::size_t>(k)];
    return 0.5 * s;
}

RealField potential_squared(const MagneticData& m, const Grid& g) {
    if (m.dim != g.dim) throw std::invalid_argument("grid-mismatch in potential_squared");
    RealField out = zeros_real(g);
    const int n2 = (g.dim == 3) ? g.points[2] : 1;
    std::size_t idx = 0;
    for (int i0 = 0; i0 < g.points[0]; ++i0) {
        for (int i1 = 0; i1 < g.points[1]; ++i1) {
            for (int i2 = 0; i2 < n2; ++i2, ++idx) {
                const std::array<double, 3> x{g.coord(0, i0), g.coord(1, i1),
                                              g.dim == 3 ? g.coord(2, i2) : 0.0};
                const std::array<double, 3> a = m.potential_vector(x);
                out.values[idx] = a[0] * a[0] + a[1] * a[1] + a[2] * a[2];
            }
        }
    }
    return out;
}

VectorField covariant_gradient(const ComplexField& u, const MagneticData& m) {
    require_dim(m, u.grid);
    VectorField grad = gradient_fd(u);
    if (m.is_zero()) return grad;
    const Grid& g = u.grid;
    const int n2 = (g.dim == 3) ? g.points[2] : 1;
    std::size_t idx = 0;
    for (int i0 = 0; i0 < g.points[0]; ++i0) {
        for (int i1 = 0; i1 < g.points[1]; ++i1) {
            for (int i2 = 0; i2 < n2; ++i2, ++idx) {
                const std::array<double, 3> x{g.coord(0, i0), g.coord(1, i1),
                                              g.dim == 3 ? g.coord(2, i2) : 0.0};
                const std::array<double, 3> a = m.potential_vector(x);
                for (int j = 0; j < g.dim; ++j) {
                    const Complex term{-a[static_cast<std::size_t>(j)] * u.values[idx].imag(),
                                       a[static_cast<std::size_t>(j)] * u.values[idx].real()};
                    grad.comp[static_cast<std::size_t>(j)][idx] += term;
                }
            }
        }
    }
    return grad;
}

ComplexField magnetic_laplacian(const ComplexField& u, const MagneticData& m) {
    require_dim(m, u.grid);
    ComplexField out = zeros(u.grid);
    const std::array<double, 9> s = m.kernel_matrix();
    const kernels::StencilGeom geom = detail::make_geom(u.grid, s.data(), !m.is_zero(), 0.0);
    kernels::helmholtz_apply(geom, u.values.data(), out.values.data());
    return out;
}

ComplexField magnetic_translate(const ComplexField& u, const MagneticData& m,
                                const std::array<double, 3>& a) {
    require_dim(m, u.grid);
    const Grid& g = u.grid;
    std::array<long, 3> shift{0, 0, 0};
    for (int j = 0; j < g.dim; ++j) {
        const double steps = a[static_cast<std::size_t>(j)] / g.spacing[static_cast<std::size_t>(j)];
        const double rounded = std::round(steps);
        if (std::abs(steps - rounded) > 1e-9 * std::max(1.0, std::abs(steps)))
            throw std::invalid_argument("off-lattice shift: component " + std::to_string(j) +
                                        " is not an integer multiple of the spacing");
        shift[static_cast<std::size_t>(j)] = static_cast<long>(rounded);
    }

    ComplexField out = zeros(g);
    const int n2 = (g.dim == 3) ? g.points[2] : 1;
    std::size_t idx = 0;
    for (int i0 = 0; i0 < g.points[0]; ++i0) {
        const long s0 = i0 - shift[0];
        for (int i1 = 0; i1 < g.points[1]; ++i1) {
            const long s1 = i1 - shift[1];
            for (int i2 = 0; i2 < n2; ++i2, ++idx) {
                const long s2 = i2 - shift[2];
                if (s0 < 0 || s0 >= g.points[0] || s1 < 0 || s1 >= g.points[1] ||
                    (g.dim == 3 && (s2 < 0 || s2 >= g.points[2])))
                    continue;
                const std::array<double, 3> x{g.coord(0, i0), g.coord(1, i1),
                                              g.dim == 3 ? g.coord(2, i2) : 0.0};
                const double theta = potential_apply(m, a, x);
                const Complex phase{std::cos(theta), -std::sin(theta)};
                const std::size_t src =
                    g.dim == 3 ? g.index(static_cast<int>(s0), static_cast<int>(s1), static_cast<int>(s2))
                               : g.index(static_cast<int>(s0), static_cast<int>(s1));
                out.values[idx] = phase * u.values[src];
            }
        }
    }
    return out;
}

ComplexField gauge_transform(const ComplexField& u, const RealField& psi) {
    if (!(u.grid == psi.grid)) throw std::invalid_argument("grid-mismatch in gauge_transform");
    ComplexField out = zeros(u.grid);
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        const double t = psi.values[i];
        out.values[i] = Complex{std::cos(t), -std::sin(t)} * u.values[i];
    }
    return out;
}

double decoupling_defect(const ComplexField& u, const MagneticData& m) {
    require_dim(m, u.grid);
    if (m.is_zero()) return 0.0;
    const Grid& g = u.grid;
    const VectorField grad = gradient_fd(u);

    double worst = 0.0;
    const int lo2 = (g.dim == 3) ? 1 : 0;
    const int hi2 = (g.dim == 3) ? g.points[2] - 1 : 1;
    for (int i0 = 1; i0 < g.points[0] - 1; ++i0) {
        for (int i1 = 1; i1 < g.points[1] - 1; ++i1) {
            for (int i2 = lo2; i2 < hi2; ++i2) {
                const std::size_t idx = g.dim == 3 ? g.index(i0, i1, i2) : g.index(i0, i1);
                const std::array<double, 3> x{g.coord(0, i0), g.coord(1, i1),
                                              g.dim == 3 ? g.coord(2, i2) : 0.0};
                const std::array<double, 3> a = m.potential_vector(x);
                Complex coupling{0.0, 0.0};
                for (int j = 0; j < g.dim; ++j)
                    coupling += a[static_cast<std::size_t>(j)] *
                                std::conj(u.values[idx]) * grad.comp[static_cast<std::size_t>(j)][idx];
                worst = std::max(worst, std::abs(coupling));
            }
        }
    }
    return worst;
}

} // namespace mnls
