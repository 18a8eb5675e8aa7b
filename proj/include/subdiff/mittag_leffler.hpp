#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <quadmath.h>

#include "subdiff/errors.hpp"

namespace subdiff {

/// Evaluation controls for E_{alpha,beta}(z) on the negative real axis.
struct MlParams {
    // Series branch is used while |z|^(1/alpha) <= series_exponent_cap.
    // The series is summed in __float128; cancellation grows like
    // exp(|z|^(1/alpha)), and exp(34) * 2^-113 stays below 1e-19.
    double series_exponent_cap = 34.0;
    std::size_t series_term_cap = 4000;
    std::size_t asymp_term_cap = 2000;
    double tol = 1e-12; // relative target for the asymptotic tail
};

namespace detail {

// Power series sum_k z^k / Gamma(alpha k + beta) in quad precision.
inline double ml_series(double alpha, double beta, double z, const MlParams& prm) {
    const __float128 zq = z;
    __float128 sum = 0.0q, term;
    __float128 zpow = 1.0q;
    for (std::size_t k = 0; k < prm.series_term_cap; ++k) {
        const __float128 g = tgammaq(static_cast<__float128>(alpha) * k + static_cast<__float128>(beta));
        term = zpow / g;
        sum += term;
        zpow *= zq;
        // Terms of an entire series eventually decay monotonically; stop once
        // the current term cannot affect 1e-22 of the running value.
        if (k > 4 && fabsq(term) < 1e-25q * (fabsq(sum) + 1e-30q) &&
            fabsq(zpow / tgammaq(static_cast<__float128>(alpha) * (k + 1) + static_cast<__float128>(beta))) <
                fabsq(term))
            return static_cast<double>(sum);
    }
    throw NumericalError("mittag_leffler: series did not converge within term cap");
}

// Asymptotic expansion E_{alpha,beta}(z) ~ -sum_{k>=1} z^-k / Gamma(beta - alpha k)
// for z -> -inf, truncated at the smallest term. With z = -x this is
// sum_{k>=1} (-1)^{k+1} x^-k / Gamma(beta - alpha k); terms are evaluated in
// log space through the reflection formula to avoid Gamma overflow.
inline double ml_asymptotic(double alpha, double beta, double z, const MlParams& prm) {
    const double x = -z; // x > 0
    const double lx = std::log(x);
    double sum = 0.0;
    double prev_mag = HUGE_VAL;
    double smallest = HUGE_VAL;
    double sum_at_smallest = 0.0;
    int growing = 0;
    for (std::size_t k = 1; k < prm.asymp_term_cap; ++k) {
        const double arg = beta - alpha * static_cast<double>(k);
        const double parity = (k % 2 == 1) ? 1.0 : -1.0; // (-1)^{k+1}
        double term;
        if (arg > 0.5) {
            term = parity * std::exp(-static_cast<double>(k) * lx - std::lgamma(arg));
        } else {
            // 1/Gamma(arg) = Gamma(1-arg) sin(pi*arg) / pi; at the poles of
            // Gamma (arg a nonpositive integer) the term vanishes.
            if (std::abs(arg - std::nearbyint(arg)) < 1e-14) continue;
            const double s = std::sin(M_PI * arg);
            const double ln_mag = -static_cast<double>(k) * lx + std::lgamma(1.0 - arg) + std::log(std::abs(s)) -
                                  std::log(M_PI);
            term = parity * std::copysign(std::exp(ln_mag), s);
        }
        const double mag = std::abs(term);
        sum += term;
        if (mag < smallest) {
            smallest = mag;
            sum_at_smallest = sum;
        }
        if (mag < 1e-18 * (std::abs(sum) + 1e-300)) return sum;
        // Magnitudes dip near the Gamma poles; only sustained growth marks
        // the divergent tail. Truncate at the smallest recorded term then.
        growing = (mag > prev_mag) ? growing + 1 : 0;
        prev_mag = mag;
        if (growing >= 4) {
            if (smallest > prm.tol * (std::abs(sum_at_smallest) + 1e-300))
                throw NumericalError("mittag_leffler: asymptotic tail stalls above tolerance at z=" +
                                     std::to_string(z));
            return sum_at_smallest;
        }
    }
    throw NumericalError("mittag_leffler: asymptotic expansion did not converge at z=" + std::to_string(z));
}

} // namespace detail

/// Mittag-Leffler function E_{alpha,beta}(z) for real z <= 0.
/// For alpha in (0,1), E_alpha(-x) decays from 1 to 0 monotonically.
inline double mittag_leffler(double alpha, double beta, double z, const MlParams& prm = {}) {
    if (!(alpha > 0.0) || !(alpha < 2.0))
        throw std::invalid_argument("mittag_leffler: alpha must lie in (0,2)");
    if (!(beta > 0.0)) throw std::invalid_argument("mittag_leffler: beta must be positive");
    if (!(z <= 0.0)) throw std::invalid_argument("mittag_leffler: only z <= 0 is supported");

    if (z == 0.0) return 1.0 / std::tgamma(beta);
    if (alpha == 1.0 && beta == 1.0) return std::exp(z);

    const double x = -z;
    // series while x^(1/alpha) is small enough for quad precision
    if (std::log(x) / alpha <= std::log(prm.series_exponent_cap))
        return detail::ml_series(alpha, beta, z, prm);
    return detail::ml_asymptotic(alpha, beta, z, prm);
}

/// One-parameter form E_alpha(z).
inline double mittag_leffler(double alpha, double z) { return mittag_leffler(alpha, 1.0, z); }

} // namespace subdiff
