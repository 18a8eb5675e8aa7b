#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "subdiff/coefficient.hpp"
#include "subdiff/fem.hpp"
#include "subdiff/mesh.hpp"

namespace subdiff {

/// Initial data u0. Either a plain function (projected with Gauss quadrature)
/// or a power law x^p, which is projected from exact element integrals so the
/// endpoint singularity of x^{-1/4} does not pollute convergence studies.
struct InitialData {
    std::function<double(double)> eval; // may be empty for zero data
    std::optional<double> power;        // set: u0(x) = x^power, exact projection

    static InitialData zero() { return {}; }
    static InitialData function(std::function<double(double)> f) { return {std::move(f), std::nullopt}; }
    static InitialData power_law(double p) {
        return {[p](double x) { return std::pow(x, p); }, p};
    }

    bool is_zero() const { return !eval && !power; }

    std::vector<double> project(const Mesh1d& mesh) const {
        if (is_zero()) return std::vector<double>(mesh.dofs(), 0.0);
        if (power) return l2_project_power(mesh, *power);
        return l2_project(mesh, eval);
    }
};

/// Source term. Either a pointwise f(x,t) assembled into load vectors, or a
/// direct supplier of the discrete load (used e.g. to realize f = A(t) u0h
/// exactly for piecewise-linear u0h).
struct SourceTerm {
    std::function<double(double, double)> pointwise;                          // f(x, t)
    std::function<std::vector<double>(const Mesh1d&, double)> discrete_load;  // (mesh, t) -> load

    static SourceTerm zero() { return {}; }
    static SourceTerm function(std::function<double(double, double)> f) { return {std::move(f), nullptr}; }
    static SourceTerm load_supplier(std::function<std::vector<double>(const Mesh1d&, double)> l) {
        return {nullptr, std::move(l)};
    }

    bool is_zero() const { return !pointwise && !discrete_load; }

    std::vector<double> load(const Mesh1d& mesh, double t) const {
        if (is_zero()) return std::vector<double>(mesh.dofs(), 0.0);
        if (discrete_load) return discrete_load(mesh, t);
        return load_vector(mesh, pointwise, t);
    }
};

/// One subdiffusion instance: d_t^alpha u - d_x(a(x,t) d_x u) = f on (0,1).
struct Problem {
    double alpha = 0.5;
    double T = 1.0;
    Coefficient a;
    SourceTerm f;
    InitialData u0;
    std::string label;

    void validate() const {
        if (!(alpha > 0.0) || !(alpha < 1.0))
            throw std::invalid_argument("Problem: alpha must lie in (0,1)");
        if (!(T > 0.0)) throw std::invalid_argument("Problem: T must be positive");
        if (!a.value) throw std::invalid_argument("Problem: missing coefficient");
    }

    /// Copy with the time horizon replaced (used by studies that rescale
    /// the run to end exactly at the evaluation time).
    Problem with_horizon(double t_final) const {
        Problem p = *this;
        p.T = t_final;
        return p;
    }
};

} // namespace subdiff
