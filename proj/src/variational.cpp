#include "mnls/variational.hpp"

#include "mnls/kernels.hpp"
#include "geom.hpp"

#include <cmath>
#include <stdexcept>

namespace mnls {

void validate_exponent(const FunctionalParams& fp, int dim) {
    if (!std::isfinite(fp.p) || fp.p <= 2.0)
        throw std::invalid_argument("exponent p must be finite and exceed 2");
    if (dim == 3 && fp.p >= 6.0)
        throw std::invalid_argument("supercritical exponent: dimension 3 requires p < 6");
}

namespace detail {

QuadraticData quadratic_data(const ComplexField& u, const MagneticData& m, double p) {
    if (m.dim != u.grid.dim) throw std::invalid_argument("grid-mismatch in variational form");
    const Grid& g = u.grid;
    ComplexField hu = zeros(g);
    const std::array<double, 9> s = m.kernel_matrix();
    const kernels::StencilGeom geom = make_geom(g, s.data(), !m.is_zero(), 1.0);
    kernels::helmholtz_apply(geom, u.values.data(), hu.values.data());

    QuadraticData out;
    out.form = inner_product(hu, u);
    out.p_integral = integrate_abs_pow(u, p);
    return out;
}

} // namespace detail

double energy(const ComplexField& u, const MagneticData& m, const FunctionalParams& fp) {
    validate_exponent(fp, u.grid.dim);
    const detail::QuadraticData qd = detail::quadratic_data(u, m, fp.p);
    return 0.5 * qd.form - qd.p_integral / fp.p;
}

ComplexField euler_gradient(const ComplexField& u, const MagneticData& m,
                            const FunctionalParams& fp) {
    validate_exponent(fp, u.grid.dim);
    if (m.dim != u.grid.dim) throw std::invalid_argument("grid-mismatch in euler_gradient");
    const Grid& g = u.grid;
    ComplexField out = zeros(g);
    const std::array<double, 9> s = m.kernel_matrix();
    const kernels::StencilGeom geom = detail::make_geom(g, s.data(), !m.is_zero(), 1.0);
    kernels::helmholtz_apply(geom, u.values.data(), out.values.data());

    ComplexField nl = zeros(g);
    kernels::power_nonlinearity(u.values.data(), nl.values.data(), u.values.size(), fp.p);
    kernels::axpy(-1.0, nl.values.data(), out.values.data(), out.values.size());
    return out;
}

double rayleigh_quotient(const ComplexField& u, const MagneticData& m,
                         const FunctionalParams& fp) {
    validate_exponent(fp, u.grid.dim);
    const detail::QuadraticData qd = detail::quadratic_data(u, m, fp.p);
    if (qd.p_integral <= 0.0) throw std::invalid_argument("zero-field: Rayleigh quotient undefined");
    return qd.form / std::pow(qd.p_integral, 2.0 / fp.p);
}

NehariScaling nehari_scale(const ComplexField& u, const MagneticData& m,
                           const FunctionalParams& fp) {
    validate_exponent(fp, u.grid.dim);
    const detail::QuadraticData qd = detail::quadratic_data(u, m, fp.p);
    if (qd.p_integral <= 0.0) throw std::invalid_argument("zero-field: Nehari scaling undefined");

    NehariScaling out;
    out.t_star = std::pow(qd.form / qd.p_integral, 1.0 / (fp.p - 2.0));
    out.scaled = u;
    kernels::scale(out.t_star, out.scaled.values.data(), out.scaled.values.size());
    return out;
}

double ground_energy_from_quotient(double q, const FunctionalParams& fp) {
    if (!(q > 0.0)) throw std::invalid_argument("nonpositive-quotient");
    return (0.5 - 1.0 / fp.p) * std::pow(q, fp.p / (fp.p - 2.0));
}

double diamagnetic_gap(const ComplexField& u, const MagneticData& m) {
    if (m.dim != u.grid.dim) throw std::invalid_argument("grid-mismatch in diamagnetic_gap");
    const Grid& g = u.grid;
    const double vol = cell_volume(g);

    const VectorField grad = covariant_gradient(u, m);
    double covariant = 0.0;
    for (int j = 0; j < g.dim; ++j)
        covariant += vol * kernels::sum_abs_sq(grad.comp[static_cast<std::size_t>(j)].data(),
                                               grad.comp[static_cast<std::size_t>(j)].size());

    ComplexField mag = zeros(g);
    const RealField mu = magnitude(u);
    for (std::size_t i = 0; i < mag.values.size(); ++i) mag.values[i] = Complex{mu.values[i], 0.0};
    const VectorField gm = gradient_fd(mag);
    double plain = 0.0;
    for (int j = 0; j < g.dim; ++j)
        plain += vol * kernels::sum_abs_sq(gm.comp[static_cast<std::size_t>(j)].data(),
                                           gm.comp[static_cast<std::size_t>(j)].size());

    return covariant - plain;
}

} // namespace mnls
