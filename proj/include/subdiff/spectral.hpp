#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "subdiff/errors.hpp"
#include "subdiff/fem.hpp"
#include "subdiff/mesh.hpp"
#include "subdiff/mittag_leffler.hpp"

namespace subdiff {

struct SpectralResult {
    std::vector<double> values; // interior nodal values
    bool truncation_ok = true;  // last requested mode contributed < 1e-12
};

namespace detail {

// Fourier sine coefficient c_k = 2 int_0^1 g(x) sin(k pi x) dx by composite
// 4-point Gauss on the given mesh; exact enough for smooth data when the
// mesh resolves mode k.
template <typename G>
double sine_coefficient(const Mesh1d& mesh, G&& g, std::size_t k) {
    const double h = mesh.h;
    const double kpi = static_cast<double>(k) * M_PI;
    double s = 0.0;
    for (std::size_t e = 0; e < mesh.cells; ++e) {
        const double xm = mesh.node(e) + 0.5 * h;
        for (std::size_t q = 0; q < 4; ++q) {
            const double x = xm + 0.5 * h * quad::gauss4_x[q];
            s += quad::gauss4_w[q] * g(x) * std::sin(kpi * x);
        }
    }
    return s * h; // 0.5*h per element integral times the factor 2
}

} // namespace detail

/// Exact solution of d_t^alpha u - a0 u_xx = 0, u(0) = u0, on (0,1) with
/// zero Dirichlet data: u(x,t) = sum_k E_alpha(-a0 (k pi)^2 t^alpha) c_k sin(k pi x),
/// truncated after `modes` terms. truncation_ok reports whether the last
/// mode's contribution fell below 1e-12.
inline SpectralResult exact_homogeneous(const Mesh1d& mesh, double a0, double alpha,
                                        const std::function<double(double)>& u0, double t, std::size_t modes) {
    if (!(a0 > 0.0)) throw std::invalid_argument("exact_homogeneous: a0 must be positive");
    if (!(t >= 0.0)) throw std::invalid_argument("exact_homogeneous: t must be nonnegative");
    if (modes < 1) throw std::invalid_argument("exact_homogeneous: need at least one mode");

    const std::size_t n = mesh.dofs();
    SpectralResult out;
    out.values.assign(n, 0.0);
    const double talpha = std::pow(t, alpha);
    double tail_amp = 0.0; // max over the last two modes; data with even or
                           // odd symmetry zeroes every other coefficient
    for (std::size_t k = 1; k <= modes; ++k) {
        const double kpi = static_cast<double>(k) * M_PI;
        const double ck = detail::sine_coefficient(mesh, u0, k);
        const double decay = (t == 0.0) ? 1.0 : mittag_leffler(alpha, 1.0, -a0 * kpi * kpi * talpha);
        const double amp = ck * decay;
        for (std::size_t i = 0; i < n; ++i) out.values[i] += amp * std::sin(kpi * mesh.node(i + 1));
        if (k + 1 >= modes) tail_amp = std::max(tail_amp, std::abs(amp));
    }
    out.truncation_ok = tail_amp < 1e-12;
    return out;
}

/// Modal Duhamel term int_0^t (t-s)^{alpha-1} E_{alpha,alpha}(-lambda (t-s)^alpha) g(s) ds.
/// The substitution sigma = (t-s)^alpha removes the endpoint singularity:
///   = (1/alpha) int_0^{t^alpha} E_{alpha,alpha}(-lambda sigma) g(t - sigma^{1/alpha}) dsigma.
/// Integrated by adaptive Simpson to absolute tolerance `tol`.
inline double duhamel_mode(double alpha, double lambda, const std::function<double(double)>& g, double t,
                           double tol = 1e-10) {
    if (!(alpha > 0.0) || !(alpha <= 1.0)) throw std::invalid_argument("duhamel_mode: alpha must lie in (0,1]");
    if (!(lambda >= 0.0)) throw std::invalid_argument("duhamel_mode: lambda must be nonnegative");
    if (!(t >= 0.0)) throw std::invalid_argument("duhamel_mode: t must be nonnegative");
    if (t == 0.0) return 0.0;

    const double upper = std::pow(t, alpha);
    const auto integrand = [&](double sigma) {
        const double s = t - std::pow(sigma, 1.0 / alpha);
        const double kernel = mittag_leffler(alpha, alpha, -lambda * sigma);
        return kernel * g(std::min(std::max(s, 0.0), t));
    };

    struct Simpson {
        const std::function<double(double)>& f;
        double tol;
        int max_depth;
        double recurse(double a, double m, double b, double fa, double fm, double fb, double whole, double eps,
                       int depth) const {
            const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
            const double flm = f(lm), frm = f(rm);
            const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            const double delta = left + right - whole;
            if (depth >= max_depth) throw NumericalError("duhamel_mode: adaptive quadrature did not converge");
            if (std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
            return recurse(a, lm, m, fa, flm, fm, left, 0.5 * eps, depth + 1) +
                   recurse(m, rm, b, fm, frm, fb, right, 0.5 * eps, depth + 1);
        }
    };

    std::function<double(double)> f = integrand;
    const double a = 0.0, b = upper, m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    Simpson s{f, tol, 48};
    return s.recurse(a, m, b, fa, fm, fb, whole, tol, 0) / alpha;
}

} // namespace subdiff
