#pragma once

#include <cmath>
#include <cstddef>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "subdiff/config.hpp"
#include "subdiff/experiments.hpp"
#include "subdiff/fem.hpp"
#include "subdiff/mittag_leffler.hpp"
#include "subdiff/stepper.hpp"

namespace subdiff {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    bool all_passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
};

namespace detail {

// Dense Gaussian elimination with partial pivoting; the independent check
// for the tridiagonal solver.
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

inline CheckResult check_constant_solution() {
    CheckResult c{"constant-solution reproduction", true, ""};
    const Mesh1d mesh(100);
    const std::size_t m = mesh.dofs();

    // u(t) = u0h (piecewise linear) solves the scheme exactly when the load
    // is supplied as S(t) U0 directly.
    std::vector<double> u0(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double x = mesh.node(i + 1);
        u0[i] = x * (1.0 - x);
    }
    Problem prob;
    prob.alpha = 0.5;
    prob.T = 1.0;
    prob.a = Coefficient([](double, double t) { return 2.0 + std::cos(t); }, 3.0);
    prob.u0 = InitialData::function([&mesh](double x) {
        // piecewise-linear interpolant of x(1-x) on the mesh
        const double s = x / mesh.h;
        const double i0 = std::floor(s);
        const double xl = i0 * mesh.h, xr = xl + mesh.h;
        const double vl = xl * (1.0 - xl), vr = xr * (1.0 - xr);
        return vl + (vr - vl) * (x - xl) / mesh.h;
    });
    prob.f = SourceTerm::load_supplier([a = prob.a, u0](const Mesh1d& msh, double t) {
        return tridiag_matvec(assemble_stiffness(msh, a, t), u0);
    });

    const TriDiag mass = assemble_mass(mesh);
    std::ostringstream detail;
    double worst = 0.0;
    for (Scheme scheme : {Scheme::VanillaBdf2, Scheme::CorrectedBdf2, Scheme::BackwardEuler}) {
        const Trajectory traj = run_stepper(prob, mesh, 40, scheme);
        for (std::size_t n = 0; n <= traj.steps(); ++n) {
            const std::vector<double> u = traj.at(n);
            std::vector<double> d(m);
            for (std::size_t i = 0; i < m; ++i) d[i] = u[i] - u0[i];
            worst = std::max(worst, l2_norm(mass, d));
        }
    }
    detail << "max deviation " << worst << " (tolerance 1e-9)";
    c.detail = detail.str();
    c.passed = worst <= 1e-9;
    return c;
}

inline CheckResult check_stiffness() {
    CheckResult c{"stiffness symmetry and ellipticity", true, ""};
    const Mesh1d mesh(64);
    const Coefficient a([](double x, double t) { return 2.0 + std::cos(t) + 0.5 * std::sin(3.0 * x); }, 4.0);
    const TriDiag s1 = assemble_stiffness(mesh, Coefficient::constant(1.0), 0.0);
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    double min_ratio = 1e300;
    for (double t : {0.0, 0.7, 1.9}) {
        const TriDiag s = assemble_stiffness(mesh, a, t);
        if (!s.symmetric()) {
            c.passed = false;
            c.detail = "stiffness asymmetric at t=" + std::to_string(t);
            return c;
        }
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<double> v(mesh.dofs());
            for (auto& x : v) x = dist(rng);
            const auto sv = tridiag_matvec(s, v);
            const auto s1v = tridiag_matvec(s1, v);
            double q = 0.0, q1 = 0.0;
            for (std::size_t i = 0; i < v.size(); ++i) {
                q += v[i] * sv[i];
                q1 += v[i] * s1v[i];
            }
            min_ratio = std::min(min_ratio, q / q1);
        }
    }
    const double lower = 1.0 / a.lambda;
    c.passed = min_ratio >= lower * (1.0 - 1e-12);
    c.detail = "min v'S(t)v / v'S1v = " + std::to_string(min_ratio) + " (needs >= " + std::to_string(lower) + ")";
    return c;
}

inline CheckResult check_ml_monotonicity() {
    CheckResult c{"Mittag-Leffler monotonicity grid", true, ""};
    for (double alpha : {0.25, 0.5, 0.75}) {
        double prev = 1.0 + 1e-15;
        for (int i = 0; i <= 120; ++i) {
            const double x = std::pow(10.0, -6.0 + 0.1 * i); // 1e-6 .. 1e6
            const double e = mittag_leffler(alpha, 1.0, -x);
            if (!(e > 0.0) || !(e <= 1.0) || !(e < prev)) {
                c.passed = false;
                c.detail = "violation at alpha=" + std::to_string(alpha) + ", x=" + std::to_string(x) +
                           ", E=" + std::to_string(e);
                return c;
            }
            prev = e;
        }
    }
    c.detail = "positive, bounded by 1 and strictly decreasing on 1e-6..1e6";
    return c;
}

inline CheckResult check_tridiag_vs_dense() {
    CheckResult c{"tridiagonal solve vs dense elimination", true, ""};
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> dist(0.1, 1.0);
    double worst = 0.0;
    for (std::size_t n : {5u, 17u, 50u}) {
        TriDiag a(n);
        for (std::size_t i = 0; i < n; ++i) a.diag[i] = 2.0 + dist(rng);
        for (std::size_t i = 0; i + 1 < n; ++i) a.sub[i] = a.sup[i] = -dist(rng);
        std::vector<double> rhs(n);
        for (auto& x : rhs) x = dist(rng) - 0.5;

        std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i) {
            d[i][i] = a.diag[i];
            if (i > 0) d[i][i - 1] = a.sub[i - 1];
            if (i + 1 < n) d[i][i + 1] = a.sup[i];
        }
        const auto x1 = solve_tridiag(a, rhs);
        const auto x2 = dense_solve(d, rhs);
        for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(x1[i] - x2[i]));
    }
    c.passed = worst <= 1e-12;
    c.detail = "max component difference " + std::to_string(worst) + " (tolerance 1e-12)";
    return c;
}

inline CheckResult check_config_roundtrip() {
    CheckResult c{"config round-trip", true, ""};
    RunConfig cfg;
    cfg.output_dir = "results";
    cfg.jobs = 3;
    cfg.verbosity = 2;
    StudySpec s;
    s.preset = Preset::B;
    s.scheme = Scheme::VanillaBdf2;
    s.alphas = {0.25, 0.75};
    s.t_finals = {1.0, 1e-3};
    s.n_steps = {10, 20, 40};
    s.cells = 200;
    s.n_ref = 1000;
    cfg.studies.push_back(s);
    const RunConfig again = parse_config_text(effective_config(cfg));
    c.passed = again == cfg;
    c.detail = c.passed ? "emit + reparse reproduces the configuration" : "reparsed configuration differs";
    return c;
}

} // namespace detail

/// Run the invariant suite backing the `verify` subcommand.
inline VerifyReport run_verification() {
    VerifyReport r;
    r.checks.push_back(detail::check_constant_solution());
    r.checks.push_back(detail::check_stiffness());
    r.checks.push_back(detail::check_ml_monotonicity());
    r.checks.push_back(detail::check_tridiag_vs_dense());
    r.checks.push_back(detail::check_config_roundtrip());
    return r;
}

} // namespace subdiff
