// Experiment runners: the method-comparison table, the clustered-spectrum
// gamma sweep, the work-unit comparison, and the perturbed-rate study. Each
// produces a deterministic CSV (leading '#' metadata lines, one header line,
// data rows) and an equivalent JSON document.
#pragma once

#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "eksm.hpp"
#include "lanczos.hpp"
#include "mscg.hpp"
#include "operators.hpp"
#include "predict.hpp"
#include "report.hpp"
#include "restarted.hpp"
#include "shift_invert.hpp"
#include "stieltjes.hpp"

namespace krylov {

inline constexpr const char* kArtifactVersion = "1.0.0";

struct ExperimentConfig {
    std::string experiment = "table2";  // table2 | gamma_sweep | work_units | perturbed_rate | single_run
    int N = 1000;
    double lmin = 0.1;
    double lmax = 200.1;
    std::string f_tag = "inv_sqrt";
    double tol = 1e-6;
    std::vector<std::string> methods = {"two_pass", "mscg", "restarted", "eksm", "si"};
    int m_re = 30;
    std::vector<double> gamma_grid = {0.65, 0.70, 0.75, 0.80, 0.85, 0.90, 0.95, 0.99};
    std::vector<double> M_costs = {10.0, 14.0};
    double work_log10_eps_min = -10.0;  // tightest accuracy of the work grid
    std::string out_path;               // empty = stdout
    bool json_mirror = false;
};

struct ExperimentOutput {
    std::string csv;
    nlohmann::json json;
    bool ok = true;  // all requested methods met tol (where applicable)
};

namespace detail {

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline std::string metadata_line(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os << "# experiment=" << cfg.experiment << " n=" << cfg.N << " lmin=" << fmt(cfg.lmin)
       << " lmax=" << fmt(cfg.lmax) << " f=" << cfg.f_tag << " tol=" << fmt(cfg.tol)
       << " m_re=" << cfg.m_re << " version=" << kArtifactVersion;
    return os.str();
}

// Standard-Lanczos crossing of the relative 2-norm error (full
// reorthogonalization; oracle instrumentation for measured counts).
inline int lanczos_crossing_2norm(const DiagonalOperator& op, const StieltjesFunction& f,
                                  const Vector& b, const Vector& oracle, double tol, int m_max) {
    auto d = lanczos_start(b, /*keep_basis=*/true);
    for (int m = 1; m <= m_max; ++m) {
        lanczos_extend(op, d, 1);
        const Vector it = lanczos_combine(d, f);
        if (rel_error2(it, oracle) <= tol) return m;
        if (d.breakdown) return m;
    }
    return -1;
}

} // namespace detail

// Run one method in oracle mode on the given instance. Returns the report;
// `bounds` is the nominal spectral information handed to the methods.
inline MethodReport run_method(const std::string& method, const DiagonalOperator& op,
                               const StieltjesFunction& f, const Vector& b, double tol,
                               const SpectralBounds& bounds, int m_re, const Vector& oracle) {
    op.reset_count();
    const double nf = norm2(oracle);
    if (method == "two_pass") {
        auto [x, rep] = two_pass_fAb(op, f, b, tol, static_cast<int>(op.dimension()), &oracle);
        return rep;
    }
    if (method == "mscg") {
        auto [x, rep] = mscg_fAb(op, f, b, tol, bounds, &oracle);
        return rep;
    }
    if (method == "restarted") {
        auto [x, rep] = restarted_lanczos_fAb(op, f, b, m_re, tol, 100, &oracle);
        return rep;
    }
    if (method == "si") {
        const auto cfg = inner_tolerance_schedule(tol * nf, f, bounds, optimal_shift(bounds));
        auto [x, rep] = si_lanczos_fAb(op, f, b, tol, bounds, cfg, &oracle);
        return rep;
    }
    if (method == "eksm") {
        const auto cfg = inner_tolerance_schedule(tol * nf, f, bounds, 0.0);
        auto [x, rep] = extended_krylov_fAb(op, f, b, tol, cfg, &oracle);
        return rep;
    }
    throw std::invalid_argument("run_method: unknown method " + method);
}

// Method comparison on the Chebyshev instance: predicted and measured matvec
// counts, achieved errors and work units per method.
inline ExperimentOutput run_table2(const ExperimentConfig& cfg) {
    ExperimentOutput out;
    const SpectralBounds bounds(cfg.lmin, cfg.lmax);
    const auto& f = function_by_tag(cfg.f_tag);
    const auto op = make_diagonal_chebyshev(cfg.N, bounds);
    const auto b = normalized_ones(static_cast<std::size_t>(cfg.N));
    const auto oracle = op.oracle_fAb(f.eval, b);
    const double nf = norm2(oracle);
    const double M_cost = 10.0;

    PredictParams pp;
    pp.m_re = cfg.m_re;

    std::ostringstream csv;
    csv << detail::metadata_line(cfg) << " M_cost=" << detail::fmt(M_cost) << "\n";
    csv << "method,predicted_matvecs,measured_matvecs,outer_iterations,achieved_rel_error,"
           "error_norm,work_units,converged\n";
    nlohmann::json rows = nlohmann::json::array();

    for (const auto& method : cfg.methods) {
        const auto pred = predict_total_matvecs(method, bounds, f, nf, cfg.tol, pp);
        MethodReport rep;
        std::string error_norm = "l2";
        try {
            rep = run_method(method, op, f, b, cfg.tol, bounds, cfg.m_re, oracle);
        } catch (const std::exception&) {
            csv << method << ",,,,,error,,false\n";
            out.ok = false;
            continue;
        }
        // MSCG converges in the energy norm (the natural norm of the
        // underlying CG solves); the others in the 2-norm.
        double err = rep.achieved_error;
        if (method == "mscg" && rep.achieved_error_A >= 0.0) {
            err = rep.achieved_error_A;
            error_norm = "A";
        }
        const double work = rep.matvecs * M_cost + rep.vector_ops;
        out.ok = out.ok && rep.converged && err <= cfg.tol;
        csv << method << "," << pred.total_matvecs << "," << rep.matvecs << ","
            << rep.outer_iterations << "," << detail::fmt(err) << "," << error_norm << ","
            << detail::fmt(work) << "," << (rep.converged ? "true" : "false") << "\n";
        rows.push_back({{"method", method},
                        {"predicted_matvecs", pred.total_matvecs},
                        {"measured_matvecs", rep.matvecs},
                        {"outer_iterations", rep.outer_iterations},
                        {"achieved_rel_error", err},
                        {"error_norm", error_norm},
                        {"work_units", work},
                        {"converged", rep.converged}});
    }
    out.csv = csv.str();
    out.json = {{"experiment", "table2"}, {"rows", rows}};
    return out;
}

// Clustered-spectrum sweep: measured matvec counts (2-norm crossings) per
// method and gamma, ratios to MSCG, and the gamma-independent worst-case
// prediction overlay.
inline ExperimentOutput run_gamma_sweep(const ExperimentConfig& cfg) {
    ExperimentOutput out;
    const SpectralBounds bounds(cfg.lmin, cfg.lmax);
    const auto& f = function_by_tag(cfg.f_tag);
    std::vector<std::string> methods;
    for (const auto& m : cfg.methods)
        if (m == "two_pass" || m == "mscg" || m == "restarted") methods.push_back(m);

    std::ostringstream csv;
    csv << detail::metadata_line(cfg) << "\n";
    csv << "gamma,method,measured_matvecs,predicted_matvecs,ratio_to_mscg,achieved_rel_error,"
           "converged\n";
    nlohmann::json rows = nlohmann::json::array();

    PredictParams pp;
    pp.m_re = cfg.m_re;
    for (double gamma : cfg.gamma_grid) {
        const auto op = make_diagonal_clustered(cfg.N, bounds, gamma);
        const auto b = normalized_ones(static_cast<std::size_t>(cfg.N));
        const auto oracle = op.oracle_fAb(f.eval, b);
        const double nf = norm2(oracle);

        std::map<std::string, long> measured;
        std::map<std::string, double> errs;
        // MSCG first (2-norm oracle stopping), so ratios can be formed.
        {
            op.reset_count();
            auto [x, rep] = mscg_fAb(op, f, b, cfg.tol, bounds, &oracle, 100000,
                                     /*stop_in_A_norm=*/false);
            measured["mscg"] = rep.matvecs;
            errs["mscg"] = rep.achieved_error;
            out.ok = out.ok && rep.converged;
        }
        for (const auto& method : methods) {
            if (method == "two_pass") {
                op.reset_count();
                const int m = detail::lanczos_crossing_2norm(op, f, b, oracle, cfg.tol,
                                                             static_cast<int>(op.dimension()));
                measured["two_pass"] = (m > 0) ? 2L * m : -1;
                errs["two_pass"] = cfg.tol;
                out.ok = out.ok && m > 0;
            } else if (method == "restarted") {
                op.reset_count();
                auto [x, rep] = restarted_lanczos_fAb(op, f, b, cfg.m_re, cfg.tol, 200, &oracle);
                measured["restarted"] = rep.matvecs;
                errs["restarted"] = rep.achieved_error;
                out.ok = out.ok && rep.converged;
            }
        }
        for (const auto& method : methods) {
            const auto pred = predict_total_matvecs(method, bounds, f, nf, cfg.tol, pp);
            const double ratio = static_cast<double>(measured[method]) / measured["mscg"];
            csv << detail::fmt(gamma) << "," << method << "," << measured[method] << ","
                << pred.total_matvecs << "," << detail::fmt(ratio) << ","
                << detail::fmt(errs[method]) << "," << (measured[method] > 0 ? "true" : "false")
                << "\n";
            rows.push_back({{"gamma", gamma},
                            {"method", method},
                            {"measured_matvecs", measured[method]},
                            {"predicted_matvecs", pred.total_matvecs},
                            {"ratio_to_mscg", ratio},
                            {"achieved_rel_error", errs[method]}});
        }
    }
    out.csv = csv.str();
    out.json = {{"experiment", "gamma_sweep"}, {"rows", rows}};
    return out;
}

// Work-unit comparison of MSCG and restarted Lanczos (m_re = 2p) over a grid
// of target accuracies, for each matvec cost M.
inline ExperimentOutput run_work_units(const ExperimentConfig& cfg) {
    ExperimentOutput out;
    const SpectralBounds bounds(cfg.lmin, cfg.lmax);
    const auto& f = function_by_tag(cfg.f_tag);
    // ||f(A)b|| of the reference Chebyshev instance.
    const auto op = make_diagonal_chebyshev(cfg.N, bounds);
    const auto b = normalized_ones(static_cast<std::size_t>(cfg.N));
    const double nf = norm2(op.oracle_fAb(f.eval, b));

    std::ostringstream csv;
    csv << detail::metadata_line(cfg) << "\n";
    csv << "M_cost,eps,p,m_re,mscg_iterations,restarted_matvecs,cycles,work_mscg,"
           "work_restarted,winner\n";
    nlohmann::json rows = nlohmann::json::array();
    for (double M : cfg.M_costs) {
        for (double le = -2.0; le >= cfg.work_log10_eps_min - 1e-9; le -= 0.5) {
            const double eps = std::pow(10.0, le);
            const auto pt = work_curve_point(bounds, f, nf, eps, M);
            const char* winner = pt.work_restarted < pt.work_mscg ? "restarted" : "mscg";
            csv << detail::fmt(M) << "," << detail::fmt(eps) << "," << pt.p << "," << pt.m_re
                << "," << pt.mscg_iterations << "," << pt.restarted_matvecs << "," << pt.cycles
                << "," << detail::fmt(pt.work_mscg) << "," << detail::fmt(pt.work_restarted)
                << "," << winner << "\n";
            rows.push_back({{"M_cost", M},
                            {"eps", eps},
                            {"p", pt.p},
                            {"m_re", pt.m_re},
                            {"work_mscg", pt.work_mscg},
                            {"work_restarted", pt.work_restarted},
                            {"winner", winner}});
        }
    }
    out.csv = csv.str();
    out.json = {{"experiment", "work_units"}, {"rows", rows}};
    return out;
}

// Perturbed-rate study: the rate formula over a perturbation grid, plus an
// inexact-SI trace (per-outer error and tracked ||E_m|| bound).
inline ExperimentOutput run_perturbed_rate(const ExperimentConfig& cfg) {
    ExperimentOutput out;
    const SpectralBounds bounds(cfg.lmin, cfg.lmax);
    const auto& f = function_by_tag(cfg.f_tag);

    std::ostringstream csv;
    csv << detail::metadata_line(cfg) << "\n";
    csv << "kind,eps,rate,m,rel_error,em_bound\n";
    nlohmann::json rows = nlohmann::json::array();
    for (double le = -14.0; le <= -2.0 + 1e-9; le += 0.25) {
        const double eps = std::pow(10.0, le);
        const double rate = perturbed_rate(eps, bounds);
        csv << "rate," << detail::fmt(eps) << "," << detail::fmt(rate) << ",,,\n";
        rows.push_back({{"kind", "rate"}, {"eps", eps}, {"rate", rate}});
    }
    {
        const double eps_star = 1.0 / (bounds.lambda_max - optimal_shift(bounds));
        csv << "rate," << detail::fmt(eps_star) << "," << detail::fmt(perturbed_rate(eps_star, bounds))
            << ",,,\n";
    }
    // Inexact SI trace on the reference instance.
    const auto op = make_diagonal_chebyshev(cfg.N, bounds);
    const auto b = normalized_ones(static_cast<std::size_t>(cfg.N));
    const auto oracle = op.oracle_fAb(f.eval, b);
    const auto icfg = inner_tolerance_schedule(cfg.tol * norm2(oracle), f, bounds,
                                               optimal_shift(bounds));
    auto [x, rep] = si_lanczos_fAb(op, f, b, cfg.tol, bounds, icfg, &oracle);
    out.ok = rep.converged;
    for (std::size_t m = 0; m < rep.error_history.size(); ++m) {
        csv << "si_trace,,," << (m + 1) << "," << detail::fmt(rep.error_history[m]) << ","
            << detail::fmt(rep.em_bound_history[m]) << "\n";
        rows.push_back({{"kind", "si_trace"},
                        {"m", m + 1},
                        {"rel_error", rep.error_history[m]},
                        {"em_bound", rep.em_bound_history[m]}});
    }
    out.csv = csv.str();
    out.json = {{"experiment", "perturbed_rate"}, {"rows", rows}};
    return out;
}

// Single method run with per-iteration error history.
inline ExperimentOutput run_single_run(const ExperimentConfig& cfg) {
    ExperimentOutput out;
    const SpectralBounds bounds(cfg.lmin, cfg.lmax);
    const auto& f = function_by_tag(cfg.f_tag);
    const auto op = make_diagonal_chebyshev(cfg.N, bounds);
    const auto b = normalized_ones(static_cast<std::size_t>(cfg.N));
    const auto oracle = op.oracle_fAb(f.eval, b);
    if (cfg.methods.empty()) throw std::invalid_argument("single_run: no method given");
    const std::string method = cfg.methods.front();
    const auto rep = run_method(method, op, f, b, cfg.tol, bounds, cfg.m_re, oracle);

    std::ostringstream csv;
    csv << detail::metadata_line(cfg) << " method=" << method << "\n";
    csv << "iteration,rel_error,matvecs_total,converged\n";
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < rep.error_history.size(); ++i) {
        csv << (i + 1) << "," << detail::fmt(rep.error_history[i]) << ",,\n";
        rows.push_back({{"iteration", i + 1}, {"rel_error", rep.error_history[i]}});
    }
    csv << "summary," << detail::fmt(rep.achieved_error) << "," << rep.matvecs << ","
        << (rep.converged ? "true" : "false") << "\n";
    out.ok = rep.converged;
    out.csv = csv.str();
    out.json = {{"experiment", "single_run"},
                {"method", method},
                {"matvecs", rep.matvecs},
                {"achieved_rel_error", rep.achieved_error},
                {"converged", rep.converged},
                {"rows", rows}};
    return out;
}

inline ExperimentOutput run_experiment(const ExperimentConfig& cfg) {
    if (cfg.experiment == "table2") return run_table2(cfg);
    if (cfg.experiment == "gamma_sweep") return run_gamma_sweep(cfg);
    if (cfg.experiment == "work_units") return run_work_units(cfg);
    if (cfg.experiment == "perturbed_rate") return run_perturbed_rate(cfg);
    if (cfg.experiment == "single_run") return run_single_run(cfg);
    throw std::invalid_argument("unknown experiment: " + cfg.experiment);
}

} // namespace krylov
