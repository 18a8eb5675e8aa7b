// Test-side oracles, independent of the library code paths they check.
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace oracles {

// Weights of p(z)^alpha through the J.C.P. Miller recurrence
//   j p_0 w_j = sum_{i=1}^{min(j,deg)} ((alpha+1) i - j) p_i w_{j-i},
// derived from p w' = alpha p' w. Independent of the binomial-product route.
inline std::vector<double> power_series_weights(const std::vector<double>& p, double alpha, std::size_t n) {
    std::vector<double> w(n + 1, 0.0);
    w[0] = std::pow(p[0], alpha);
    for (std::size_t j = 1; j <= n; ++j) {
        double s = 0.0;
        const std::size_t imax = std::min(j, p.size() - 1);
        for (std::size_t i = 1; i <= imax; ++i)
            s += ((alpha + 1.0) * static_cast<double>(i) - static_cast<double>(j)) * p[i] * w[j - i];
        w[j] = s / (static_cast<double>(j) * p[0]);
    }
    return w;
}

inline std::vector<double> bdf2_weights_recurrence(double alpha, std::size_t n) {
    return power_series_weights({1.5, -2.0, 0.5}, alpha, n);
}

inline std::vector<double> bdf1_weights_recurrence(double alpha, std::size_t n) {
    return power_series_weights({1.0, -1.0}, alpha, n);
}

// Scaled complementary error function erfcx(x) = e^{x^2} erfc(x) for x > 0.
// Maclaurin series of erf below x = 2, Lentz continued fraction
// erfc(x) = e^{-x^2}/sqrt(pi) / (x + 1/2/(x + 1/(x + 3/2/(x + ...)))) above.
inline double erfcx_cf(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("erfcx_cf: x must be positive");
    if (x < 2.0) {
        double term = x, erf = x;
        for (int n = 1; n < 200; ++n) {
            term *= -x * x / n;
            erf += term / (2 * n + 1);
            if (std::abs(term) < 1e-18 * std::abs(erf))
                return std::exp(x * x) * (1.0 - erf * 2.0 / std::sqrt(M_PI));
        }
        throw std::runtime_error("erfcx_cf: series did not converge");
    }
    const double tiny = 1e-300;
    double f = tiny, c = f, d = 0.0;
    for (int k = 0; k < 400; ++k) {
        const double a = k == 0 ? 1.0 : 0.5 * k;
        const double b = x;
        d = b + a * d;
        if (d == 0.0) d = tiny;
        c = b + a / c;
        if (c == 0.0) c = tiny;
        d = 1.0 / d;
        const double delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < 4e-16) return f / std::sqrt(M_PI);
    }
    throw std::runtime_error("erfcx_cf: continued fraction did not converge");
}

// Dense Gaussian elimination with partial pivoting (row-major square matrix).
inline std::vector<double> dense_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
        std::swap(a[k], a[piv]);
        std::swap(b[k], b[piv]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = a[i][k] / a[k][k];
            for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
            b[i] -= f * b[k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
        x[i] = s / a[i][i];
    }
    return x;
}

// Classical implicit Euler for u_t - a0 u_xx = 0 on (0,1), P1 elements,
// consistent mass matrix; interior nodal values at t = T.
inline std::vector<double> implicit_euler_heat(std::size_t cells, double a0, const std::vector<double>& u0,
                                               double t_end, std::size_t steps) {
    const std::size_t m = cells - 1;
    const double h = 1.0 / static_cast<double>(cells);
    const double tau = t_end / static_cast<double>(steps);
    // (M + tau a0 S) u^{n+1} = M u^n with Thomas elimination written out here
    std::vector<double> diag(m, 4.0 * h / 6.0 + tau * a0 * 2.0 / h);
    std::vector<double> off(m > 0 ? m - 1 : 0, h / 6.0 - tau * a0 / h);
    std::vector<double> u = u0;
    std::vector<double> rhs(m), c(m > 0 ? m - 1 : 0), d(m);
    for (std::size_t n = 0; n < steps; ++n) {
        for (std::size_t i = 0; i < m; ++i) {
            double s = 4.0 * h / 6.0 * u[i];
            if (i > 0) s += h / 6.0 * u[i - 1];
            if (i + 1 < m) s += h / 6.0 * u[i + 1];
            rhs[i] = s;
        }
        double piv = diag[0];
        if (m > 1) c[0] = off[0] / piv;
        d[0] = rhs[0] / piv;
        for (std::size_t i = 1; i < m; ++i) {
            piv = diag[i] - off[i - 1] * c[i - 1];
            if (i + 1 < m) c[i] = off[i] / piv;
            d[i] = (rhs[i] - off[i - 1] * d[i - 1]) / piv;
        }
        u[m - 1] = d[m - 1];
        for (std::size_t i = m - 1; i-- > 0;) u[i] = d[i] - c[i] * u[i + 1];
    }
    return u;
}

// exact integrals of x^p * (linear hat pieces), used as projection oracles
inline double int_power(double p, double a, double b) {
    return (std::pow(b, p + 1.0) - std::pow(a, p + 1.0)) / (p + 1.0);
}

} // namespace oracles
