// Command-line front end: weight dumps, single solves, convergence studies
// and the invariant suite.
//
// Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 verify failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "subdiff/config.hpp"
#include "subdiff/cq.hpp"
#include "subdiff/experiments.hpp"
#include "subdiff/mesh.hpp"
#include "subdiff/stepper.hpp"
#include "subdiff/verify.hpp"

namespace {

constexpr const char* kVersion = "subdiff 1.0.0";

struct WeightsArgs {
    double alpha = 0.5;
    std::string method = "bdf2";
    std::size_t n = 10;
};

struct SolveArgs {
    std::string preset = "a";
    std::string scheme = "corrected";
    double alpha = 0.5;
    double t_final = 1.0;
    std::size_t steps = 100;
    std::size_t cells = 1000;
    std::string out;
};

struct StudyArgs {
    std::string config_path;
    std::optional<std::string> preset;
    std::optional<std::string> scheme;
    std::vector<double> alphas;
    std::vector<double> t_finals;
    std::vector<std::size_t> steps;
    std::optional<std::size_t> cells;
    std::optional<std::size_t> n_ref;
    std::optional<std::string> interp;
    std::optional<std::string> outdir;
    unsigned jobs = 0;
};

int cmd_weights(const WeightsArgs& a) {
    const subdiff::CqMethod m = a.method == "bdf1" ? subdiff::CqMethod::BDF1 : subdiff::CqMethod::BDF2;
    const subdiff::CqWeights w = subdiff::generate_weights(a.alpha, m, a.n);
    for (std::size_t j = 0; j < w.b.size(); ++j) {
        if (j) std::printf(", ");
        std::printf("%.12g", w.b[j]);
    }
    std::printf("\n");
    return 0;
}

int cmd_solve(const SolveArgs& a) {
    subdiff::Problem prob = subdiff::preset_problem(subdiff::preset_from_name(a.preset), a.alpha);
    const subdiff::Mesh1d mesh(a.cells);
    const subdiff::Scheme scheme = subdiff::detail::scheme_from_name(a.scheme);
    const subdiff::Trajectory traj =
        subdiff::run_stepper(prob.with_horizon(a.t_final), mesh, a.steps, scheme);
    const std::vector<double> u = traj.final_state();

    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!a.out.empty()) {
        file.open(a.out);
        if (!file) {
            std::cerr << "cannot open output file " << a.out << "\n";
            return 1;
        }
        os = &file;
    }
    (*os) << "x,u\n0,0\n";
    char buf[80];
    for (std::size_t i = 0; i < u.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", mesh.node(i + 1), u[i]);
        (*os) << buf;
    }
    (*os) << "1,0\n";
    return 0;
}

subdiff::RunConfig study_config(const StudyArgs& a) {
    subdiff::RunConfig cfg;
    if (!a.config_path.empty()) {
        cfg = subdiff::parse_config(a.config_path);
    } else {
        cfg.studies.emplace_back();
    }
    // flag overrides win over the file
    if (a.outdir) cfg.output_dir = *a.outdir;
    if (a.interp) cfg.interp = subdiff::detail::interp_from_name(*a.interp);
    if (a.jobs) cfg.jobs = a.jobs;
    for (auto& s : cfg.studies) {
        if (a.preset) {
            s.preset = subdiff::preset_from_name(*a.preset);
            if (a.steps.empty() && a.config_path.empty())
                subdiff::detail::apply_preset_step_defaults(s, false);
        }
        if (a.scheme) s.scheme = subdiff::detail::scheme_from_name(*a.scheme);
        if (!a.alphas.empty()) s.alphas = a.alphas;
        if (!a.t_finals.empty()) s.t_finals = a.t_finals;
        if (!a.steps.empty()) s.n_steps = a.steps;
        if (a.cells) s.cells = *a.cells;
        if (a.n_ref) s.n_ref = *a.n_ref;
        s.interp = cfg.interp;
    }
    cfg.validate();
    return cfg;
}

int cmd_study(const StudyArgs& a) {
    const auto t0 = std::chrono::steady_clock::now();
    const subdiff::RunConfig cfg = study_config(a);

    std::filesystem::create_directories(cfg.output_dir);
    subdiff::RefCache cache;

    std::string csv = "preset,scheme,alpha,t_final,N,error,rate\n";
    std::string md;
    for (const auto& spec : cfg.studies) {
        if (cfg.verbosity > 0)
            std::cerr << "study: preset " << subdiff::preset_name(spec.preset) << ", scheme "
                      << subdiff::scheme_name(spec.scheme) << ", M=" << spec.cells << ", N_ref=" << spec.n_ref
                      << "\n";
        const subdiff::ConvergenceReport rep = subdiff::run_study(spec, cache, cfg.jobs);
        const std::string body = subdiff::to_csv(rep);
        csv += body.substr(body.find('\n') + 1); // drop the repeated header
        md += subdiff::to_markdown(rep) + "\n";
    }

    const auto write = [&](const std::string& name, const std::string& content) {
        const std::filesystem::path p = std::filesystem::path(cfg.output_dir) / name;
        std::ofstream f(p);
        if (!f) throw std::runtime_error("cannot write " + p.string());
        f << content;
    };
    write("results.csv", csv);
    write("tables.md", md);
    write("config.effective", subdiff::effective_config(cfg));

    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    {
        std::ostringstream meta;
        meta << kVersion << "\n";
        meta << "runtime_seconds = " << subdiff::detail::fmt("%.3f", secs) << "\n";
        meta << "jobs = " << cfg.jobs << "\n";
        const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        meta << "finished_unix = " << static_cast<long long>(now) << "\n";
        write("metadata.txt", meta.str());
    }
    if (cfg.verbosity > 0)
        std::cerr << "wrote results.csv, tables.md, config.effective, metadata.txt to " << cfg.output_dir << " in "
                  << subdiff::detail::fmt("%.1f", secs) << " s\n";
    return 0;
}

int cmd_verify() {
    const subdiff::VerifyReport rep = subdiff::run_verification();
    for (const auto& c : rep.checks)
        std::printf("%s  %s: %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
    return rep.all_passed() ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Subdiffusion solver: corrected BDF2 convolution quadrature with P1 finite elements"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    WeightsArgs wa;
    auto* weights = app.add_subcommand("weights", "Print convolution quadrature weights b_0..b_n");
    weights->add_option("--alpha", wa.alpha, "fractional order in (0,1]")->required();
    weights->add_option("--method", wa.method, "bdf1 or bdf2")->check(CLI::IsMember({"bdf1", "bdf2"}));
    weights->add_option("-n,--n", wa.n, "last weight index");

    SolveArgs sa;
    auto* solve = app.add_subcommand("solve", "Run a single problem and write the final snapshot");
    solve->add_option("--preset", sa.preset, "a, b or c")->check(CLI::IsMember({"a", "b", "c"}));
    solve->add_option("--scheme", sa.scheme, "corrected, vanilla or backward_euler")
        ->check(CLI::IsMember({"corrected", "vanilla", "backward_euler"}));
    solve->add_option("--alpha", sa.alpha, "fractional order in (0,1)");
    solve->add_option("--t-final", sa.t_final, "final time in (0,1]");
    solve->add_option("--steps", sa.steps, "time steps");
    solve->add_option("--cells", sa.cells, "spatial subintervals");
    solve->add_option("-o,--out", sa.out, "output CSV path (default: stdout)");

    StudyArgs ta;
    auto* study = app.add_subcommand("study", "Run convergence studies and write result artifacts");
    study->add_option("-c,--config", ta.config_path, "configuration file");
    study->add_option("--preset", ta.preset, "preset override");
    study->add_option("--scheme", ta.scheme, "scheme override");
    study->add_option("--alphas", ta.alphas, "alpha list override")->delimiter(',');
    study->add_option("--t-finals", ta.t_finals, "evaluation time list override")->delimiter(',');
    study->add_option("--steps", ta.steps, "step count list override")->delimiter(',');
    study->add_option("--cells", ta.cells, "spatial subintervals");
    study->add_option("--ref-steps", ta.n_ref, "reference step count");
    study->add_option("--interp", ta.interp, "rescale or global");
    study->add_option("-O,--outdir", ta.outdir, "output directory");
    study->add_option("-j,--jobs", ta.jobs, "worker threads (0 = hardware)");

    auto* verify = app.add_subcommand("verify", "Run the oracle-equivalence and invariant suites");

    CLI11_PARSE(app, argc, argv);

    try {
        if (weights->parsed()) return cmd_weights(wa);
        if (solve->parsed()) return cmd_solve(sa);
        if (study->parsed()) return cmd_study(ta);
        if (verify->parsed()) return cmd_verify();
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const subdiff::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
