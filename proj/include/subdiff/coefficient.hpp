#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace subdiff {

/// Scalar diffusion coefficient a(x,t) with uniform ellipticity bounds
/// 1/lambda <= a(x,t) <= lambda, lambda >= 1. Every quadrature-point
/// evaluation goes through eval(), which enforces the bounds.
struct Coefficient {
    std::function<double(double, double)> value; // a(x, t)
    double lambda = 1.0;

    Coefficient() = default;
    Coefficient(std::function<double(double, double)> a, double lam)
        : value(std::move(a)), lambda(lam) {
        if (!(lambda >= 1.0)) throw std::invalid_argument("Coefficient: lambda must be >= 1");
    }

    static Coefficient constant(double a0) {
        double lam = a0 >= 1.0 ? a0 : 1.0 / a0;
        return Coefficient([a0](double, double) { return a0; }, lam);
    }

    double eval(double x, double t) const {
        const double a = value(x, t);
        if (!(a >= 1.0 / lambda) || !(a <= lambda))
            throw std::domain_error("Coefficient: ellipticity bounds violated at x=" + std::to_string(x) +
                                    ", t=" + std::to_string(t) + " (a=" + std::to_string(a) + ")");
        return a;
    }
};

} // namespace subdiff
