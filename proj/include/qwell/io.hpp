#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qwell/halfline.hpp"
#include "qwell/occupation.hpp"
#include "qwell/physics.hpp"
#include "qwell/rate_fit.hpp"
#include "qwell/scf.hpp"
#include "qwell/spectrum.hpp"
#include "qwell/sweep.hpp"

namespace qwell {

// ---- JSON (nlohmann) serializers ------------------------------------------

inline void to_json(nlohmann::json& j, const Grid& g) {
    j = {{"length", g.length}, {"n", g.n}, {"h", g.h}};
}
inline void from_json(const nlohmann::json& j, Grid& g) {
    j.at("length").get_to(g.length);
    j.at("n").get_to(g.n);
    j.at("h").get_to(g.h);
}

inline void to_json(nlohmann::json& j, const GridFunction& f) {
    j = {{"grid", f.grid}, {"values", f.values}};
}
inline void from_json(const nlohmann::json& j, GridFunction& f) {
    j.at("grid").get_to(f.grid);
    j.at("values").get_to(f.values);
}

inline std::string to_string(RightBc bc) {
    switch (bc) {
        case RightBc::NeumannZero: return "neumann-zero";
        case RightBc::DirichletZero: return "dirichlet-zero";
        case RightBc::Free: return "free";
    }
    return "free";
}
inline RightBc right_bc_from_string(const std::string& s) {
    if (s == "neumann-zero") return RightBc::NeumannZero;
    if (s == "dirichlet-zero") return RightBc::DirichletZero;
    if (s == "free") return RightBc::Free;
    throw InvalidConfiguration("unknown right_bc: " + s);
}

inline void to_json(nlohmann::json& j, const Potential& p) {
    j = {{"f", p.f}, {"left_bc", p.left_bc}, {"right_bc", to_string(p.right_bc)},
         {"nonneg", p.nonneg}};
}
inline void from_json(const nlohmann::json& j, Potential& p) {
    j.at("f").get_to(p.f);
    j.at("left_bc").get_to(p.left_bc);
    p.right_bc = right_bc_from_string(j.at("right_bc").get<std::string>());
    j.at("nonneg").get_to(p.nonneg);
}

inline void to_json(nlohmann::json& j, const Spectrum& s) {
    j = {{"grid", s.grid}, {"energies", s.energies}, {"states", s.states}};
}
inline void from_json(const nlohmann::json& j, Spectrum& s) {
    j.at("grid").get_to(s.grid);
    j.at("energies").get_to(s.energies);
    j.at("states").get_to(s.states);
}

inline std::string to_string(Statistics s) {
    return s == Statistics::Boltzmann ? "boltzmann" : "fermi-dirac";
}
inline Statistics statistics_from_string(const std::string& s) {
    if (s == "boltzmann") return Statistics::Boltzmann;
    if (s == "fermi-dirac") return Statistics::FermiDirac;
    throw InvalidConfiguration("unknown statistics: " + s);
}

inline void to_json(nlohmann::json& j, const OccupationSet& o) {
    j = {{"statistics", to_string(o.statistics)},
         {"weights", o.weights},
         {"partition", o.partition},
         {"fermi_level", o.fermi_level},
         {"levels_used", o.levels_used}};
}
inline void from_json(const nlohmann::json& j, OccupationSet& o) {
    o.statistics = statistics_from_string(j.at("statistics").get<std::string>());
    j.at("weights").get_to(o.weights);
    j.at("partition").get_to(o.partition);
    j.at("fermi_level").get_to(o.fermi_level);
    j.at("levels_used").get_to(o.levels_used);
}

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(RateFit, rate_c, log_prefactor, r_squared, model_exponent)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SPSolution, epsilon, U, spectrum, occupation, functional_value,
                                   residual_h1, iterations, functional_trace)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(FirstLevelSolution, epsilon, U, e1, psi1, multiplier,
                                   functional_value, residual_h1, iterations, functional_trace)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(LimitSolution, truncation, U0, e10, psi10, u_limit_estimate,
                                   j0_value, iterations, stage_history)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(PotentialDistance, l2, h1_semi, h1, unscaled_l2,
                                   unscaled_h1_semi, unscaled_h1)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(OrderingReport, j_first_at_first, j_first_at_full,
                                   j_full_at_full, j_full_at_first, chain_ok, identity_error,
                                   log_tail_term)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SweepEntry, epsilon, n, ok, failure, full_vs_first,
                                   full_vs_first_floored, first_vs_limit, first_vs_limit_floored,
                                   gap, ordering, fd_constraint_residual, fd_tail_ratio, fd_ok,
                                   fd_failure)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ConvergenceReport, epsilons, h, tol, floor_estimate,
                                   include_fermi_dirac, limit_truncation, limit_e10, entries,
                                   fit_full_first_available, fit_full_first,
                                   fit_first_limit_available, fit_first_limit, min_gap,
                                   chain_all_ok)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ScalingEntry, alpha, energy, ratio, expected, deviation,
                                   truncation)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ScalingReport, base_energy, base_truncation, entries,
                                   max_deviation)

// ---- run configuration ------------------------------------------------------

enum class RunMode { SolveFull, SolveFirst, SolveLimit, Sweep, FermiDirac, ScalingCheck };

inline std::string to_string(RunMode m) {
    switch (m) {
        case RunMode::SolveFull: return "solve-full";
        case RunMode::SolveFirst: return "solve-first";
        case RunMode::SolveLimit: return "solve-limit";
        case RunMode::Sweep: return "sweep";
        case RunMode::FermiDirac: return "fermi-dirac";
        case RunMode::ScalingCheck: return "scaling-check";
    }
    return "sweep";
}
inline RunMode run_mode_from_string(const std::string& s) {
    if (s == "solve-full") return RunMode::SolveFull;
    if (s == "solve-first") return RunMode::SolveFirst;
    if (s == "solve-limit") return RunMode::SolveLimit;
    if (s == "sweep") return RunMode::Sweep;
    if (s == "fermi-dirac") return RunMode::FermiDirac;
    if (s == "scaling-check") return RunMode::ScalingCheck;
    throw InvalidConfiguration("unknown mode: " + s);
}

struct RunConfig {
    RunMode mode = RunMode::Sweep;
    std::vector<double> epsilons{0.35, 0.30, 0.25, 0.20, 0.15};
    int n = 0;          // explicit node count; 0 means derive from h
    double h = 0.005;   // spacing in xi when n == 0
    double tol = 1e-10;
    Statistics statistics = Statistics::Boltzmann;
    double truncation_xi_max = 20.0;
    bool truncation_auto = true;
    std::string output_dir = ".";
    std::vector<double> alphas{0.25, 0.5, 2.0, 4.0};
};

inline void validate(const RunConfig& c) {
    for (double e : c.epsilons)
        if (!(e > 0.0 && e < 1.0))
            throw InvalidConfiguration("epsilon must lie in (0,1)");
    if (c.epsilons.empty() && c.mode != RunMode::SolveLimit && c.mode != RunMode::ScalingCheck)
        throw InvalidConfiguration("at least one epsilon is required for this mode");
    if (!(c.tol > 0.0 && c.tol <= 1e-2))
        throw InvalidConfiguration("tol must lie in (0, 1e-2]");
    if (c.n != 0 && c.n < kMinIntervals)
        throw InvalidConfiguration("n must be at least 32");
    if (c.n == 0 && !(c.h > 0.0))
        throw InvalidConfiguration("grid spacing h must be positive");
    if (c.mode == RunMode::ScalingCheck)
        for (double a : c.alphas)
            if (!(a > 0.0)) throw InvalidConfiguration("alphas must be positive");
}

inline void to_json(nlohmann::json& j, const RunConfig& c) {
    j = {{"mode", to_string(c.mode)},
         {"epsilons", c.epsilons},
         {"grid", c.n != 0 ? nlohmann::json{{"n", c.n}} : nlohmann::json{{"h", c.h}}},
         {"tol", c.tol},
         {"statistics", to_string(c.statistics)},
         {"truncation", {{"xi_max", c.truncation_xi_max}, {"auto", c.truncation_auto}}},
         {"output_dir", c.output_dir},
         {"alphas", c.alphas}};
}
inline void from_json(const nlohmann::json& j, RunConfig& c) {
    c.mode = run_mode_from_string(j.at("mode").get<std::string>());
    if (j.contains("epsilons")) j.at("epsilons").get_to(c.epsilons);
    else if (j.contains("epsilon")) c.epsilons = {j.at("epsilon").get<double>()};
    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        if (g.contains("n")) { c.n = g.at("n").get<int>(); }
        else if (g.contains("h")) { c.n = 0; c.h = g.at("h").get<double>(); }
        else throw InvalidConfiguration("grid must specify n or h");
    }
    if (j.contains("tol")) j.at("tol").get_to(c.tol);
    if (j.contains("statistics"))
        c.statistics = statistics_from_string(j.at("statistics").get<std::string>());
    if (j.contains("truncation")) {
        const auto& t = j.at("truncation");
        if (t.contains("xi_max")) t.at("xi_max").get_to(c.truncation_xi_max);
        if (t.contains("auto")) t.at("auto").get_to(c.truncation_auto);
    }
    if (j.contains("output_dir")) j.at("output_dir").get_to(c.output_dir);
    if (j.contains("alphas")) j.at("alphas").get_to(c.alphas);
}

// ---- file helpers -----------------------------------------------------------

inline nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path, path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidConfiguration("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

inline void save_json(const nlohmann::json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path, path);
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed: " + path, path);
}

inline RunConfig read_config(const std::string& path) {
    RunConfig c;
    try {
        load_json(path).get_to(c);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidConfiguration("bad config " + path + ": " + e.what());
    }
    validate(c);
    return c;
}

template <class Solution>
void write_solution(const Solution& sol, const std::string& type_tag, const std::string& path) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["type"] = type_tag;
    j["solution"] = sol;
    save_json(j, path);
}

template <class Solution>
Solution read_solution(const std::string& expected_tag, const std::string& path) {
    const nlohmann::json j = load_json(path);
    if (!j.contains("schema_version") || j.at("schema_version").get<int>() != 1)
        throw InvalidConfiguration("unsupported schema in " + path);
    if (j.at("type").get<std::string>() != expected_tag)
        throw InvalidConfiguration("expected a '" + expected_tag + "' file: " + path);
    return j.at("solution").get<Solution>();
}

// numbers carry 17 significant digits so text CSV round-trips binary doubles
inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Curve file: xi, U, psi1, rho — one row per grid node.
inline void write_curve_csv(const std::string& path, const Grid& grid, const GridFunction& U,
                            const GridFunction& psi1, const GridFunction& rho) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path, path);
    out << "xi,U,psi1,rho\n";
    for (int i = 0; i <= grid.n; ++i)
        out << format_g17(grid.node(i)) << ',' << format_g17(U[i]) << ',' << format_g17(psi1[i])
            << ',' << format_g17(rho[i]) << '\n';
    if (!out) throw IoError("write failed: " + path, path);
}

/// Comparison file: xi, U_full, U_first, U_limit, diff (= U_full - U_first).
inline void write_comparison_csv(const std::string& path, const Grid& grid,
                                 const GridFunction& u_full, const GridFunction& u_first,
                                 const GridFunction& u_limit) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path, path);
    out << "xi,U_full,U_first,U_limit,diff\n";
    for (int i = 0; i <= grid.n; ++i)
        out << format_g17(grid.node(i)) << ',' << format_g17(u_full[i]) << ','
            << format_g17(u_first[i]) << ',' << format_g17(u_limit[i]) << ','
            << format_g17(u_full[i] - u_first[i]) << '\n';
    if (!out) throw IoError("write failed: " + path, path);
}

} // namespace qwell
