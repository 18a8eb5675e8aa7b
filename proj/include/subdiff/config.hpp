#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "subdiff/experiments.hpp"

namespace subdiff {

/// Parsed run configuration: global options plus one or more studies.
struct RunConfig {
    std::vector<StudySpec> studies;
    std::string output_dir = "out";
    TimeGridInterp interp = TimeGridInterp::Rescale;
    unsigned jobs = 0; // 0 = hardware concurrency
    int verbosity = 1;

    void validate() const {
        if (studies.empty()) throw std::invalid_argument("config: no study specified");
        for (const auto& s : studies) s.validate();
    }

    friend bool operator==(const RunConfig& a, const RunConfig& b) {
        auto spec_eq = [](const StudySpec& x, const StudySpec& y) {
            return x.preset == y.preset && x.scheme == y.scheme && x.alphas == y.alphas &&
                   x.t_finals == y.t_finals && x.n_steps == y.n_steps && x.cells == y.cells && x.n_ref == y.n_ref &&
                   x.interp == y.interp;
        };
        return a.output_dir == b.output_dir && a.interp == b.interp && a.jobs == b.jobs &&
               a.verbosity == b.verbosity && a.studies.size() == b.studies.size() &&
               std::equal(a.studies.begin(), a.studies.end(), b.studies.begin(), spec_eq);
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

inline double parse_double(const std::string& v, const std::string& key) {
    std::size_t pos = 0;
    double d;
    try {
        d = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("config: value '" + v + "' for key '" + key + "' is not a number");
    }
    if (pos != v.size())
        throw std::invalid_argument("config: value '" + v + "' for key '" + key + "' is not a number");
    return d;
}

inline std::size_t parse_count(const std::string& v, const std::string& key) {
    const double d = parse_double(v, key);
    if (!(d >= 0.0) || d != std::floor(d) || d > 1e12)
        throw std::invalid_argument("config: value '" + v + "' for key '" + key + "' is not a nonnegative integer");
    return static_cast<std::size_t>(d);
}

inline Scheme scheme_from_name(const std::string& s) {
    if (s == "corrected") return Scheme::CorrectedBdf2;
    if (s == "vanilla") return Scheme::VanillaBdf2;
    if (s == "backward_euler") return Scheme::BackwardEuler;
    throw std::invalid_argument("unknown scheme '" + s + "' (expected corrected, vanilla or backward_euler)");
}

inline TimeGridInterp interp_from_name(const std::string& s) {
    if (s == "rescale") return TimeGridInterp::Rescale;
    if (s == "global") return TimeGridInterp::GlobalTau;
    throw std::invalid_argument("unknown interp '" + s + "' (expected rescale or global)");
}

// Paper defaults per preset: example (c) is tabulated on 50..1600 steps.
inline void apply_preset_step_defaults(StudySpec& s, bool steps_given) {
    if (!steps_given && s.preset == Preset::C) s.n_steps = {50, 100, 200, 400, 800, 1600};
}

} // namespace detail

/// Parse the key=value configuration text. Top-level keys before any
/// [study] section set global options; each [study] section yields one
/// StudySpec. Unknown keys are rejected by name.
inline RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    StudySpec current;
    bool in_study = false;
    bool steps_given = false;
    int lineno = 0;

    auto flush_study = [&] {
        if (in_study) {
            detail::apply_preset_step_defaults(current, steps_given);
            current.interp = cfg.interp;
            cfg.studies.push_back(current);
        }
    };

    std::istringstream is(text);
    std::string raw;
    while (std::getline(is, raw)) {
        ++lineno;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = detail::trim(raw);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line != "[study]")
                throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown section '" + line +
                                            "'");
            flush_study();
            current = StudySpec{};
            in_study = true;
            steps_given = false;
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string val = detail::trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key or value");

        if (!in_study) {
            if (key == "output") cfg.output_dir = val;
            else if (key == "interp") cfg.interp = detail::interp_from_name(val);
            else if (key == "jobs") cfg.jobs = static_cast<unsigned>(detail::parse_count(val, key));
            else if (key == "verbosity") cfg.verbosity = static_cast<int>(detail::parse_count(val, key));
            else
                throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
            continue;
        }

        if (key == "preset") current.preset = preset_from_name(val);
        else if (key == "scheme") current.scheme = detail::scheme_from_name(val);
        else if (key == "alphas") {
            current.alphas.clear();
            for (const auto& a : detail::split_list(val)) current.alphas.push_back(detail::parse_double(a, key));
        } else if (key == "t_finals") {
            current.t_finals.clear();
            for (const auto& t : detail::split_list(val)) current.t_finals.push_back(detail::parse_double(t, key));
        } else if (key == "steps") {
            current.n_steps.clear();
            for (const auto& n : detail::split_list(val)) current.n_steps.push_back(detail::parse_count(n, key));
            steps_given = true;
        } else if (key == "cells") current.cells = detail::parse_count(val, key);
        else if (key == "ref_steps") current.n_ref = detail::parse_count(val, key);
        else
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    flush_study();
    cfg.validate();
    return cfg;
}

inline RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

/// Emit the effective configuration; parse_config_text() of the result
/// reproduces the RunConfig exactly.
inline std::string effective_config(const RunConfig& cfg) {
    std::ostringstream os;
    os << "output = " << cfg.output_dir << "\n";
    os << "interp = " << interp_name(cfg.interp) << "\n";
    os << "jobs = " << cfg.jobs << "\n";
    os << "verbosity = " << cfg.verbosity << "\n";
    for (const auto& s : cfg.studies) {
        os << "\n[study]\n";
        os << "preset = " << preset_name(s.preset) << "\n";
        os << "scheme = " << scheme_name(s.scheme) << "\n";
        os << "alphas = ";
        for (std::size_t i = 0; i < s.alphas.size(); ++i) os << (i ? ", " : "") << detail::fmt("%.17g", s.alphas[i]);
        os << "\nt_finals = ";
        for (std::size_t i = 0; i < s.t_finals.size(); ++i)
            os << (i ? ", " : "") << detail::fmt("%.17g", s.t_finals[i]);
        os << "\nsteps = ";
        for (std::size_t i = 0; i < s.n_steps.size(); ++i) os << (i ? ", " : "") << s.n_steps[i];
        os << "\ncells = " << s.cells << "\n";
        os << "ref_steps = " << s.n_ref << "\n";
    }
    return os.str();
}

} // namespace subdiff
