#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "subdiff/cq.hpp"
#include "subdiff/fem.hpp"
#include "subdiff/mesh.hpp"
#include "subdiff/problem.hpp"

namespace subdiff {

enum class Scheme { VanillaBdf2, CorrectedBdf2, BackwardEuler };

inline const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::VanillaBdf2: return "vanilla";
        case Scheme::CorrectedBdf2: return "corrected";
        case Scheme::BackwardEuler: return "backward_euler";
    }
    return "?";
}

/// Fully discrete solution history on a uniform time grid t_n = n*tau.
/// Stores the shifted coefficients w^n = U^n - U^0 (the quantity the
/// convolution acts on); U^n is materialized on demand.
class Trajectory {
public:
    Trajectory(double tau, std::size_t steps, std::vector<double> u0)
        : tau_(tau), steps_(steps), dof_(u0.size()), u0_(std::move(u0)),
          shift_((steps + 1) * u0_.size(), 0.0) {}

    double tau() const { return tau_; }
    std::size_t steps() const { return steps_; }
    std::size_t dofs() const { return dof_; }
    const std::vector<double>& initial() const { return u0_; }

    double* shift_row(std::size_t n) { return shift_.data() + n * dof_; }
    const double* shift_row(std::size_t n) const { return shift_.data() + n * dof_; }

    std::vector<double> at(std::size_t n) const {
        if (n > steps_) throw std::invalid_argument("Trajectory::at: step out of range");
        std::vector<double> u(dof_);
        const double* w = shift_row(n);
        for (std::size_t i = 0; i < dof_; ++i) u[i] = u0_[i] + w[i];
        return u;
    }

    std::vector<double> final_state() const { return at(steps_); }

    const std::vector<double>& raw_shifts() const { return shift_; }

private:
    double tau_;
    std::size_t steps_;
    std::size_t dof_;
    std::vector<double> u0_;
    std::vector<double> shift_;
};

namespace detail {

// History accumulator: h = sum_{j=1}^{n-1} b_j * w^{n-j}. Four rows per pass
// to keep the accumulator traffic down; this loop dominates the runtime.
inline void accumulate_history(const Trajectory& traj, const std::vector<double>& b, std::size_t n,
                               std::vector<double>& h) {
    const std::size_t m = traj.dofs();
    h.assign(m, 0.0);
    double* acc = h.data();
    std::size_t j = 1;
    for (; j + 3 <= n - 1; j += 4) {
        const double b0 = b[j], b1 = b[j + 1], b2 = b[j + 2], b3 = b[j + 3];
        const double* r0 = traj.shift_row(n - j);
        const double* r1 = r0 - m;
        const double* r2 = r1 - m;
        const double* r3 = r2 - m;
        for (std::size_t i = 0; i < m; ++i)
            acc[i] += b0 * r0[i] + b1 * r1[i] + b2 * r2[i] + b3 * r3[i];
    }
    for (; j <= n - 1; ++j) { // the j = n term vanishes: w^0 = 0
        const double bj = b[j];
        const double* r = traj.shift_row(n - j);
        for (std::size_t i = 0; i < m; ++i) acc[i] += bj * r[i];
    }
}

} // namespace detail

/// Advance the fully discrete system
///   (1/tau^alpha) sum_j b_j M (U^{n-j} - U^0) + S(t_n) U^n = F_n
/// over n = 1..N, optionally with the first-step correction
///   ... + (1/2) S(0) U^0 on the left and + (1/2) F_0 on the right at n = 1.
inline Trajectory run_stepper(const Problem& problem, const Mesh1d& mesh, std::size_t n_steps, Scheme scheme) {
    problem.validate();
    if (n_steps < 1) throw std::invalid_argument("run_stepper: need at least one step");

    const double tau = problem.T / static_cast<double>(n_steps);
    const double r = std::pow(tau, -problem.alpha); // 1/tau^alpha
    const CqMethod method = (scheme == Scheme::BackwardEuler) ? CqMethod::BDF1 : CqMethod::BDF2;
    const std::vector<double>& b = generate_weights(problem.alpha, method, n_steps).b;

    const TriDiag mass = assemble_mass(mesh);
    const std::size_t m = mesh.dofs();

    Trajectory traj(tau, n_steps, problem.u0.project(mesh));
    const std::vector<double>& u0 = traj.initial();
    const std::vector<double> mass_u0 = tridiag_matvec(mass, u0);

    // First-step correction data: 1/2 f(0) - 1/2 A(0) u0 on the right.
    std::vector<double> correction;
    if (scheme == Scheme::CorrectedBdf2) {
        correction = problem.f.load(mesh, 0.0);
        const std::vector<double> s0u0 = tridiag_matvec(assemble_stiffness(mesh, problem.a, 0.0), u0);
        for (std::size_t i = 0; i < m; ++i) correction[i] = 0.5 * (correction[i] - s0u0[i]);
    }

    std::vector<double> hist(m), rhs(m);
    for (std::size_t n = 1; n <= n_steps; ++n) {
        const double t = static_cast<double>(n) * tau;

        detail::accumulate_history(traj, b, n, hist);
        const std::vector<double> mass_hist = tridiag_matvec(mass, hist);

        rhs = problem.f.load(mesh, t);
        const double b0r = b[0] * r;
        for (std::size_t i = 0; i < m; ++i) rhs[i] += b0r * mass_u0[i] - r * mass_hist[i];
        if (n == 1 && !correction.empty())
            for (std::size_t i = 0; i < m; ++i) rhs[i] += correction[i];

        TriDiag sys = assemble_stiffness(mesh, problem.a, t);
        for (std::size_t i = 0; i < m; ++i) sys.diag[i] += b0r * mass.diag[i];
        for (std::size_t i = 0; i + 1 < m; ++i) {
            sys.sub[i] += b0r * mass.sub[i];
            sys.sup[i] += b0r * mass.sup[i];
        }

        const std::vector<double> u = solve_tridiag(sys, rhs);
        double* w = traj.shift_row(n);
        for (std::size_t i = 0; i < m; ++i) w[i] = u[i] - u0[i];
    }
    return traj;
}

inline Trajectory run_vanilla_bdf2(const Problem& p, const Mesh1d& mesh, std::size_t n) {
    return run_stepper(p, mesh, n, Scheme::VanillaBdf2);
}
inline Trajectory run_corrected_bdf2(const Problem& p, const Mesh1d& mesh, std::size_t n) {
    return run_stepper(p, mesh, n, Scheme::CorrectedBdf2);
}
inline Trajectory run_backward_euler(const Problem& p, const Mesh1d& mesh, std::size_t n) {
    return run_stepper(p, mesh, n, Scheme::BackwardEuler);
}

} // namespace subdiff
