#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "subdiff/fem.hpp"
#include "subdiff/mesh.hpp"
#include "subdiff/problem.hpp"
#include "subdiff/stepper.hpp"

namespace subdiff {

enum class Preset { A, B, C };

inline const char* preset_name(Preset p) {
    switch (p) {
        case Preset::A: return "a";
        case Preset::B: return "b";
        case Preset::C: return "c";
    }
    return "?";
}

inline Preset preset_from_name(const std::string& s) {
    if (s == "a") return Preset::A;
    if (s == "b") return Preset::B;
    if (s == "c") return Preset::C;
    throw std::invalid_argument("unknown preset '" + s + "' (expected a, b or c)");
}

/// The three benchmark problems on (0,1), all with a(x,t) = 2 + cos(t):
///   (a) u0 = x^{-1/4},  f = 0
///   (b) u0 = 0,         f = e^t (1 + chi_{(0,1/2)}(x))
///   (c) u0 = 0,         f = sqrt(t) x (1-x)
inline Problem preset_problem(Preset p, double alpha = 0.5) {
    Problem prob;
    prob.alpha = alpha;
    prob.T = 1.0;
    prob.a = Coefficient([](double, double t) { return 2.0 + std::cos(t); }, 3.0);
    prob.label = std::string("example_") + preset_name(p);
    switch (p) {
        case Preset::A:
            prob.u0 = InitialData::power_law(-0.25);
            prob.f = SourceTerm::zero();
            break;
        case Preset::B:
            prob.u0 = InitialData::zero();
            prob.f = SourceTerm::function(
                [](double x, double t) { return std::exp(t) * (x < 0.5 ? 2.0 : 1.0); });
            break;
        case Preset::C:
            prob.u0 = InitialData::zero();
            prob.f = SourceTerm::function([](double x, double t) { return std::sqrt(t) * x * (1.0 - x); });
            break;
    }
    return prob;
}

/// How the pair (t_N, N) maps onto a time grid.
///  - Rescale: run N steps on [0, t_N] (tau = t_N / N). Matches the
///    reference tables for every t_N.
///  - GlobalTau: tau = T / N on [0, T]; evaluation index N * t_N / T must be
///    an integer, which fails for t_N = 1e-3 on the published step counts.
enum class TimeGridInterp { Rescale, GlobalTau };

inline const char* interp_name(TimeGridInterp i) {
    return i == TimeGridInterp::Rescale ? "rescale" : "global";
}

/// Reference solution at t_final: corrected BDF2 with n_ref steps on the
/// same spatial mesh, so the spatial error cancels in comparisons.
inline std::vector<double> reference_solution(const Problem& problem, const Mesh1d& mesh, std::size_t n_ref,
                                              double t_final, TimeGridInterp interp = TimeGridInterp::Rescale) {
    if (!(t_final > 0.0) || t_final > problem.T)
        throw std::invalid_argument("reference_solution: t_final must lie in (0, T]");
    if (interp == TimeGridInterp::Rescale) {
        const Trajectory traj = run_corrected_bdf2(problem.with_horizon(t_final), mesh, n_ref);
        return traj.final_state();
    }
    const double ratio = static_cast<double>(n_ref) * t_final / problem.T;
    const auto idx = static_cast<std::size_t>(std::llround(ratio));
    if (std::abs(ratio - static_cast<double>(idx)) > 1e-9 || idx == 0)
        throw std::invalid_argument("reference_solution: n_ref * t_final / T is not a positive integer");
    const Trajectory traj = run_corrected_bdf2(problem, mesh, n_ref);
    return traj.at(idx);
}

/// Cache of reference solutions shared across studies in one process.
class RefCache {
public:
    std::shared_ptr<const std::vector<double>> get(Preset preset, double alpha, double t_final, std::size_t cells,
                                                   std::size_t n_ref, TimeGridInterp interp) {
        const Key key{preset, alpha, t_final, cells, n_ref, interp};
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = cache_.find(key);
            if (it != cache_.end()) return it->second;
        }
        const Mesh1d mesh(cells);
        const Problem prob = preset_problem(preset, alpha);
        auto ref = std::make_shared<const std::vector<double>>(reference_solution(prob, mesh, n_ref, t_final, interp));
        std::lock_guard<std::mutex> lock(mu_);
        return cache_.emplace(key, std::move(ref)).first->second;
    }

private:
    using Key = std::tuple<Preset, double, double, std::size_t, std::size_t, TimeGridInterp>;
    std::map<Key, std::shared_ptr<const std::vector<double>>> cache_;
    std::mutex mu_;
};

/// One convergence study: a scheme applied to a preset over a grid of
/// fractional orders, evaluation times and step counts.
struct StudySpec {
    Preset preset = Preset::A;
    Scheme scheme = Scheme::CorrectedBdf2;
    std::vector<double> alphas = {0.25, 0.5, 0.75};
    std::vector<double> t_finals = {1.0, 1e-3};
    std::vector<std::size_t> n_steps = {10, 20, 40, 80, 160, 320};
    std::size_t cells = 1000;
    std::size_t n_ref = 5000;
    TimeGridInterp interp = TimeGridInterp::Rescale;

    void validate() const {
        if (alphas.empty() || t_finals.empty() || n_steps.empty())
            throw std::invalid_argument("study: alphas, t_finals and steps must be nonempty");
        for (double a : alphas)
            if (!(a > 0.0) || !(a < 1.0))
                throw std::invalid_argument("study: alpha " + std::to_string(a) + " outside the open interval (0,1)");
        for (double t : t_finals)
            if (!(t > 0.0) || t > 1.0)
                throw std::invalid_argument("study: t_final must lie in (0, 1]");
        for (std::size_t n : n_steps)
            if (n < 1) throw std::invalid_argument("study: step counts must be positive");
        const std::size_t nmax = *std::max_element(n_steps.begin(), n_steps.end());
        if (n_ref < 3 * nmax)
            throw std::invalid_argument("study: reference steps must be at least 3x the largest step count");
        if (cells < 2) throw std::invalid_argument("study: need at least 2 cells");
        if (preset == Preset::B && cells % 2 != 0)
            throw std::invalid_argument("study: preset b needs an even cell count so x=1/2 is a mesh node");
    }
};

/// Pairwise observed rates log2(e_k / e_{k+1}) for doubling step counts.
/// Zero or nonpositive errors yield NaN entries (printed as a dash).
inline std::vector<double> fit_rate(const std::vector<std::pair<std::size_t, double>>& errors) {
    if (errors.size() < 2) throw std::invalid_argument("fit_rate: need at least two entries");
    std::vector<double> rates;
    rates.reserve(errors.size() - 1);
    for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
        const double e0 = errors[i].second, e1 = errors[i + 1].second;
        const double n0 = static_cast<double>(errors[i].first), n1 = static_cast<double>(errors[i + 1].first);
        if (e0 > 0.0 && e1 > 0.0 && n1 > n0)
            rates.push_back(std::log(e0 / e1) / std::log(n1 / n0));
        else
            rates.push_back(std::numeric_limits<double>::quiet_NaN());
    }
    return rates;
}

struct StudyRow {
    double alpha = 0.0;
    double t_final = 0.0;
    std::vector<std::pair<std::size_t, double>> errors; // (N, e(t_N))
    std::vector<double> rates;                          // pairwise
    double tail_rate = std::numeric_limits<double>::quiet_NaN();
};

struct ConvergenceReport {
    StudySpec spec;
    std::vector<StudyRow> rows; // ordered by (t_final, alpha) as configured
};

namespace detail {

template <typename Fn>
void parallel_for(std::size_t count, unsigned jobs, Fn&& fn) {
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, count));
    if (jobs <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex err_mu;
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (unsigned t = 0; t < jobs; ++t)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mu);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace detail

/// Run the full study: per (alpha, t_final), compute the reference once and
/// the error e(t_N) = ||U^N - U_ref||_{L2} for every N. Runs are distributed
/// over `jobs` threads; the report ordering is deterministic.
inline ConvergenceReport run_study(const StudySpec& spec, RefCache& cache, unsigned jobs = 0) {
    spec.validate();
    const Mesh1d mesh(spec.cells);
    const TriDiag mass = assemble_mass(mesh);

    struct Group {
        double alpha, t_final;
    };
    std::vector<Group> groups;
    for (double t : spec.t_finals)
        for (double a : spec.alphas) groups.push_back({a, t});

    // Phase 1: references (the expensive runs).
    detail::parallel_for(groups.size(), jobs, [&](std::size_t gi) {
        cache.get(spec.preset, groups[gi].alpha, groups[gi].t_final, spec.cells, spec.n_ref, spec.interp);
    });

    // Phase 2: all (group, N) runs.
    const std::size_t per = spec.n_steps.size();
    std::vector<double> errs(groups.size() * per, 0.0);
    detail::parallel_for(groups.size() * per, jobs, [&](std::size_t task) {
        const std::size_t gi = task / per, ni = task % per;
        const Group& g = groups[gi];
        const std::size_t n = spec.n_steps[ni];
        const auto ref = cache.get(spec.preset, g.alpha, g.t_final, spec.cells, spec.n_ref, spec.interp);
        Problem prob = preset_problem(spec.preset, g.alpha);

        std::vector<double> u_final;
        if (spec.interp == TimeGridInterp::Rescale) {
            u_final = run_stepper(prob.with_horizon(g.t_final), mesh, n, spec.scheme).final_state();
        } else {
            const double ratio = static_cast<double>(n) * g.t_final / prob.T;
            const auto idx = static_cast<std::size_t>(std::llround(ratio));
            if (std::abs(ratio - static_cast<double>(idx)) > 1e-9 || idx == 0)
                throw std::invalid_argument("run_study: N * t_final / T = " + std::to_string(ratio) +
                                            " is not a positive integer under the global-tau interpretation");
            u_final = run_stepper(prob, mesh, n, spec.scheme).at(idx);
        }
        std::vector<double> diff(u_final.size());
        for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = u_final[i] - (*ref)[i];
        errs[task] = l2_norm(mass, diff);
    });

    ConvergenceReport report;
    report.spec = spec;
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        StudyRow row;
        row.alpha = groups[gi].alpha;
        row.t_final = groups[gi].t_final;
        for (std::size_t ni = 0; ni < per; ++ni) row.errors.emplace_back(spec.n_steps[ni], errs[gi * per + ni]);
        if (row.errors.size() >= 2) {
            row.rates = fit_rate(row.errors);
            row.tail_rate = row.rates.back();
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

inline ConvergenceReport run_study(const StudySpec& spec, unsigned jobs = 0) {
    RefCache cache;
    return run_study(spec, cache, jobs);
}

// ---- report emission ----

namespace detail {

inline std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

} // namespace detail

/// Full-precision CSV: preset,scheme,alpha,t_final,N,error,rate.
/// Byte-identical across runs with the same configuration.
inline std::string to_csv(const ConvergenceReport& r) {
    std::ostringstream os;
    os << "preset,scheme,alpha,t_final,N,error,rate\n";
    for (const auto& row : r.rows)
        for (std::size_t i = 0; i < row.errors.size(); ++i) {
            os << preset_name(r.spec.preset) << ',' << scheme_name(r.spec.scheme) << ','
               << detail::fmt("%.17g", row.alpha) << ',' << detail::fmt("%.17g", row.t_final) << ','
               << row.errors[i].first << ',' << detail::fmt("%.17g", row.errors[i].second) << ',';
            if (i > 0 && !std::isnan(row.rates[i - 1]))
                os << detail::fmt("%.17g", row.rates[i - 1]);
            else
                os << "-";
            os << '\n';
        }
    return os.str();
}

/// Aligned Markdown table in the layout of the reference tables: one row per
/// (t_N, alpha), one column per N, a trailing column with the tail rate.
inline std::string to_markdown(const ConvergenceReport& r) {
    std::ostringstream os;
    os << "### Example (" << preset_name(r.spec.preset) << "), " << scheme_name(r.spec.scheme)
       << " scheme (M=" << r.spec.cells << ", N_ref=" << r.spec.n_ref << ")\n\n";
    os << "| t_N | alpha |";
    for (std::size_t n : r.spec.n_steps) os << " N=" << n << " |";
    os << " rate |\n|---|---|";
    for (std::size_t i = 0; i < r.spec.n_steps.size(); ++i) os << "---|";
    os << "---|\n";
    for (const auto& row : r.rows) {
        os << "| " << detail::fmt("%g", row.t_final) << " | " << detail::fmt("%.2f", row.alpha) << " |";
        for (const auto& [n, e] : row.errors) os << ' ' << detail::fmt("%.2e", e) << " |";
        if (std::isnan(row.tail_rate))
            os << " \xE2\x80\x94 |\n"; // em dash for undefined rates
        else
            os << ' ' << detail::fmt("%.2f", row.tail_rate) << " |\n";
    }
    return os.str();
}

} // namespace subdiff
