#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "subdiff/coefficient.hpp"
#include "subdiff/mesh.hpp"
#include "subdiff/tridiag.hpp"

namespace subdiff {

namespace quad {

// Gauss-Legendre nodes/weights on [-1,1].
inline constexpr std::array<double, 2> gauss2_x = {-0.5773502691896257645091488, 0.5773502691896257645091488};
inline constexpr std::array<double, 2> gauss2_w = {1.0, 1.0};

inline constexpr std::array<double, 4> gauss4_x = {-0.8611363115940525752239465, -0.3399810435848562648026658,
                                                   0.3399810435848562648026658, 0.8611363115940525752239465};
inline constexpr std::array<double, 4> gauss4_w = {0.3478548451374538573730639, 0.6521451548625461426269361,
                                                   0.6521451548625461426269361, 0.3478548451374538573730639};

} // namespace quad

/// Interior-node P1 mass matrix: diag 4h/6, off-diagonals h/6 (exact).
inline TriDiag assemble_mass(const Mesh1d& mesh) {
    const std::size_t n = mesh.dofs();
    const double h = mesh.h;
    TriDiag m(n);
    for (std::size_t i = 0; i < n; ++i) m.diag[i] = 4.0 * h / 6.0;
    for (std::size_t i = 0; i + 1 < n; ++i) m.sub[i] = m.sup[i] = h / 6.0;
    return m;
}

/// Stiffness of -d/dx(a(x,t) d/dx .) at time t, 2-point Gauss per element.
/// Exact whenever a is affine in x on each element.
inline TriDiag assemble_stiffness(const Mesh1d& mesh, const Coefficient& a, double t) {
    const std::size_t n = mesh.dofs();
    const double h = mesh.h;
    TriDiag s(n);
    // Per element [x_{e}, x_{e+1}]: local gradient products are +-1/h^2, so the
    // local 2x2 block is (I_e/h^2) * [[1,-1],[-1,1]] with I_e = \int_e a dx.
    for (std::size_t e = 0; e < mesh.cells; ++e) {
        const double xl = mesh.node(e);
        const double xm = xl + 0.5 * h;
        double ie = 0.0;
        for (std::size_t q = 0; q < 2; ++q)
            ie += quad::gauss2_w[q] * a.eval(xm + 0.5 * h * quad::gauss2_x[q], t);
        ie *= 0.5 * h;
        const double k = ie / (h * h);
        // scatter to interior dofs (global node e and e+1 -> dof indices e-1, e)
        if (e > 0) s.diag[e - 1] += k;
        if (e < mesh.cells - 1) s.diag[e] += k;
        if (e > 0 && e < mesh.cells - 1) {
            s.sub[e - 1] += -k;
            s.sup[e - 1] += -k;
        }
    }
    return s;
}

/// Load vector entries (f(.,t), phi_i), 2-point Gauss per element.
template <typename F>
std::vector<double> load_vector(const Mesh1d& mesh, F&& f, double t) {
    const std::size_t n = mesh.dofs();
    const double h = mesh.h;
    std::vector<double> b(n, 0.0);
    for (std::size_t e = 0; e < mesh.cells; ++e) {
        const double xl = mesh.node(e);
        const double xm = xl + 0.5 * h;
        double il = 0.0, ir = 0.0; // against left/right hat restricted to this element
        for (std::size_t q = 0; q < 2; ++q) {
            const double x = xm + 0.5 * h * quad::gauss2_x[q];
            const double v = f(x, t) * quad::gauss2_w[q];
            const double sr = (x - xl) / h; // right hat value, left hat is 1-sr
            ir += v * sr;
            il += v * (1.0 - sr);
        }
        il *= 0.5 * h;
        ir *= 0.5 * h;
        if (e > 0) b[e - 1] += il;
        if (e < mesh.cells - 1) b[e] += ir;
    }
    return b;
}

/// L2 projection of g onto the P1 space: solves M v = (g, phi_i) with
/// 4-point Gauss element integrals.
template <typename G>
std::vector<double> l2_project(const Mesh1d& mesh, G&& g) {
    const std::size_t n = mesh.dofs();
    const double h = mesh.h;
    std::vector<double> b(n, 0.0);
    for (std::size_t e = 0; e < mesh.cells; ++e) {
        const double xl = mesh.node(e);
        const double xm = xl + 0.5 * h;
        double il = 0.0, ir = 0.0;
        for (std::size_t q = 0; q < 4; ++q) {
            const double x = xm + 0.5 * h * quad::gauss4_x[q];
            const double v = g(x) * quad::gauss4_w[q];
            if (!std::isfinite(v)) throw NumericalError("l2_project: integrand not finite at x=" + std::to_string(x));
            const double sr = (x - xl) / h;
            ir += v * sr;
            il += v * (1.0 - sr);
        }
        il *= 0.5 * h;
        ir *= 0.5 * h;
        if (e > 0) b[e - 1] += il;
        if (e < mesh.cells - 1) b[e] += ir;
    }
    return solve_tridiag(assemble_mass(mesh), b);
}

/// Right-hand side (x^p, phi_i) from the exact antiderivatives of x^p and
/// x^{p+1}; used for the singular initial data x^{-1/4} (any p > -1).
inline std::vector<double> power_load(const Mesh1d& mesh, double p) {
    if (!(p > -1.0)) throw std::invalid_argument("power_load: need p > -1 for integrability");
    const std::size_t n = mesh.dofs();
    const double h = mesh.h;
    std::vector<double> b(n, 0.0);
    const auto ip = [p](double x) { return std::pow(x, p + 1.0) / (p + 1.0); };      // int x^p
    const auto ipp = [p](double x) { return std::pow(x, p + 2.0) / (p + 2.0); };     // int x^{p+1}
    for (std::size_t e = 0; e < mesh.cells; ++e) {
        const double xl = mesh.node(e), xr = mesh.node(e + 1);
        const double m0 = ip(xr) - ip(xl);   // int_e x^p
        const double m1 = ipp(xr) - ipp(xl); // int_e x^{p+1}
        const double ir = (m1 - xl * m0) / h;
        const double il = m0 - ir;
        if (e > 0) b[e - 1] += il;
        if (e < mesh.cells - 1) b[e] += ir;
    }
    return b;
}

/// L2 projection of g(x) = x^p via exact element integrals.
inline std::vector<double> l2_project_power(const Mesh1d& mesh, double p) {
    return solve_tridiag(assemble_mass(mesh), power_load(mesh, p));
}

/// Discrete L2 norm sqrt(v' M v).
inline double l2_norm(const TriDiag& mass, const std::vector<double>& v) {
    if (v.size() != mass.size()) throw std::invalid_argument("l2_norm: size mismatch");
    double s = 0.0;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        double mv = mass.diag[i] * v[i];
        if (i > 0) mv += mass.sub[i - 1] * v[i - 1];
        if (i + 1 < n) mv += mass.sup[i] * v[i + 1];
        s += v[i] * mv;
    }
    return std::sqrt(std::max(s, 0.0));
}

} // namespace subdiff
