#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "subdiff/errors.hpp"

namespace subdiff {

/// Symmetric-storage-friendly tridiagonal matrix: sub/sup have length n-1.
struct TriDiag {
    std::vector<double> sub, diag, sup;

    TriDiag() = default;
    explicit TriDiag(std::size_t n) : sub(n ? n - 1 : 0, 0.0), diag(n, 0.0), sup(n ? n - 1 : 0, 0.0) {}

    std::size_t size() const { return diag.size(); }

    bool symmetric() const {
        for (std::size_t i = 0; i + 1 < size(); ++i)
            if (sub[i] != sup[i]) return false;
        return true;
    }
};

inline std::vector<double> tridiag_matvec(const TriDiag& a, const std::vector<double>& x) {
    const std::size_t n = a.size();
    if (x.size() != n) throw std::invalid_argument("tridiag_matvec: size mismatch");
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = a.diag[i] * x[i];
        if (i > 0) s += a.sub[i - 1] * x[i - 1];
        if (i + 1 < n) s += a.sup[i] * x[i + 1];
        y[i] = s;
    }
    return y;
}

/// Thomas algorithm without pivoting. All scheme matrices are SPD, so a
/// nonpositive or tiny pivot means the input is not usable.
inline std::vector<double> solve_tridiag(const TriDiag& a, const std::vector<double>& rhs) {
    const std::size_t n = a.size();
    if (rhs.size() != n) throw std::invalid_argument("solve_tridiag: size mismatch");
    if (n == 0) return {};

    std::vector<double> c(n > 1 ? n - 1 : 0), d(n);
    double pivot = a.diag[0];
    if (!(pivot > 0.0) || std::abs(pivot) < 1e-300)
        throw NumericalError("solve_tridiag: singular or indefinite pivot at row 0");
    if (n > 1) c[0] = a.sup[0] / pivot;
    d[0] = rhs[0] / pivot;

    for (std::size_t i = 1; i < n; ++i) {
        pivot = a.diag[i] - a.sub[i - 1] * c[i - 1];
        if (!(pivot > 0.0) || std::abs(pivot) < 1e-300)
            throw NumericalError("solve_tridiag: singular or indefinite pivot at row " + std::to_string(i));
        if (i + 1 < n) c[i] = a.sup[i] / pivot;
        d[i] = (rhs[i] - a.sub[i - 1] * d[i - 1]) / pivot;
    }

    std::vector<double> x(n);
    x[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
    return x;
}

} // namespace subdiff
