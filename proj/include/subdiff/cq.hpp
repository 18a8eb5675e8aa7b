#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace subdiff {

enum class CqMethod { BDF1, BDF2 };

/// Convolution quadrature weights b_0..b_n: Taylor coefficients of
/// (tau*delta_tau(zeta))^alpha, i.e. (1-z)^alpha for BDF1 and
/// ((3-4z+z^2)/2)^alpha for BDF2. Dimensionless; the stepper applies 1/tau^alpha.
struct CqWeights {
    double alpha = 0.0;
    CqMethod method = CqMethod::BDF2;
    std::vector<double> b;
};

namespace detail {

// Coefficients of (1-z)^alpha: g_0 = 1, g_j = g_{j-1} * (j-1-alpha)/j.
inline std::vector<double> binomial_series(double alpha, std::size_t n) {
    std::vector<double> g(n + 1);
    g[0] = 1.0;
    for (std::size_t j = 1; j <= n; ++j)
        g[j] = g[j - 1] * ((static_cast<double>(j) - 1.0 - alpha) / static_cast<double>(j));
    return g;
}

} // namespace detail

/// Generate b_0..b_n for fractional order alpha in (0,1].
///
/// BDF2 uses the factorization ((3-4z+z^2)/2)^alpha
///   = (3/2)^alpha * (1-z)^alpha * (1-z/3)^alpha
/// and convolves the two binomial series. The (1-z/3)^alpha factor decays
/// geometrically, so the convolution is truncated once 3^-j underflows.
inline CqWeights generate_weights(double alpha, CqMethod method, std::size_t n) {
    if (!(alpha > 0.0) || !(alpha <= 1.0))
        throw std::invalid_argument("generate_weights: alpha must lie in (0,1]");

    CqWeights w;
    w.alpha = alpha;
    w.method = method;

    if (method == CqMethod::BDF1) {
        w.b = detail::binomial_series(alpha, n);
        return w;
    }

    const auto u = detail::binomial_series(alpha, n);
    // v_j = u_j / 3^j; zero in double precision well before j = 700.
    const std::size_t kv = std::min<std::size_t>(n, 700);
    std::vector<double> v(kv + 1);
    v[0] = 1.0;
    for (std::size_t j = 1; j <= kv; ++j)
        v[j] = v[j - 1] * ((static_cast<double>(j) - 1.0 - alpha) / (3.0 * static_cast<double>(j)));

    const double scale = std::pow(1.5, alpha);
    w.b.assign(n + 1, 0.0);
    for (std::size_t j = 0; j <= n; ++j) {
        double s = 0.0;
        const std::size_t imax = std::min(j, kv);
        for (std::size_t i = 0; i <= imax; ++i) s += v[i] * u[j - i];
        w.b[j] = scale * s;
    }
    return w;
}

} // namespace subdiff
