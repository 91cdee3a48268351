#include "mnls/grid.hpp"

#include "geom.hpp"
#include "mnls/kernels.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mnls {

Grid make_grid(int dim, double half_extent, int points) {
    if (dim != 2 && dim != 3)
        throw std::invalid_argument("make_grid: dim must be 2 or 3, got " + std::to_string(dim));
    if (points % 2 == 0)
        throw std::invalid_argument("make_grid: point count must be odd so the origin is a node, got " +
                                    std::to_string(points));
    if (points < 33)
        throw std::invalid_argument("make_grid: need at least 33 points per axis, got " +
                                    std::to_string(points));
    if (!(half_extent > 0.0) || !std::isfinite(half_extent))
        throw std::invalid_argument("make_grid: half extent must be positive and finite");

    Grid g;
    g.dim = dim;
    for (int a = 0; a < dim; ++a) {
        g.points[a] = points;
        g.half_extent[a] = half_extent;
        g.spacing[a] = 2.0 * half_extent / (points - 1);
    }
    return g;
}

RealField zeros_real(const Grid& g) { return RealField{g, std::vector<double>(g.size(), 0.0)}; }

ComplexField zeros(const Grid& g) { return ComplexField{g, std::vector<Complex>(g.size(), Complex(0.0))}; }

double cell_volume(const Grid& g) {
    double v = 1.0;
    for (int a = 0; a < g.dim; ++a) v *= g.spacing[a];
    return v;
}

namespace {

void require_same_grid(const Grid& a, const Grid& b, const char* who) {
    if (!(a == b)) throw std::invalid_argument(std::string(who) + ": fields live on different grids");
}

} // namespace

double integrate(const RealField& f) {
    const double s = kernels::sum(f.values.data(), f.values.size()) * cell_volume(f.grid);
    if (!std::isfinite(s)) throw std::invalid_argument("integrate: non-finite input");
    return s;
}

double inner_product(const ComplexField& u, const ComplexField& v) {
    require_same_grid(u.grid, v.grid, "inner_product");
    return kernels::dot_re(u.values.data(), v.values.data(), u.values.size()) * cell_volume(u.grid);
}

double l2_norm(const ComplexField& u) {
    return std::sqrt(kernels::sum_abs_sq(u.values.data(), u.values.size()) * cell_volume(u.grid));
}

VectorField gradient_fd(const ComplexField& u) {
    VectorField out;
    out.grid = u.grid;
    const auto geom = detail::make_geom(u.grid);
    for (int a = 0; a < u.grid.dim; ++a) {
        out.comp[a].resize(u.values.size());
        kernels::gradient_axis(geom, a, u.values.data(), out.comp[a].data());
    }
    return out;
}

ComplexField laplacian_fd(const ComplexField& u) {
    ComplexField out{u.grid, std::vector<Complex>(u.values.size())};
    const auto geom = detail::make_geom(u.grid);
    kernels::laplacian(geom, u.values.data(), out.values.data());
    return out;
}

void add_scaled(ComplexField& y, double alpha, const ComplexField& x) {
    require_same_grid(y.grid, x.grid, "add_scaled");
    kernels::axpy(alpha, x.values.data(), y.values.data(), y.values.size());
}

void scale(ComplexField& u, double alpha) {
    kernels::scale(alpha, u.values.data(), u.values.size());
}

RealField magnitude(const ComplexField& u) {
    RealField out{u.grid, std::vector<double>(u.values.size())};
    for (std::size_t i = 0; i < u.values.size(); ++i) out.values[i] = std::abs(u.values[i]);
    return out;
}

double integrate_abs_pow(const ComplexField& u, double p) {
    return kernels::sum_abs_pow(u.values.data(), u.values.size(), p) * cell_volume(u.grid);
}

double max_abs(const ComplexField& u) {
    return kernels::max_abs(u.values.data(), u.values.size());
}

} // namespace mnls
