// A-priori prediction engine: asymptotic convergence factors, iteration-count
// predictions for all five methods, the work-unit cost model of the method
// comparison, and the perturbed-rate formula for inexact shift-and-invert.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "operators.hpp"
#include "report.hpp"
#include "shift_invert.hpp"
#include "stieltjes.hpp"
#include "zolotarev.hpp"

namespace krylov {

// Asymptotic linear convergence factor. kind "lanczos": c(t) with
// kappa(t) = (lambda_max + t)/(lambda_min + t) (CG / Lanczos / restarts);
// kind "si_or_ek": the fourth-root factor (kappa^{1/4}-1)/(kappa^{1/4}+1).
inline double convergence_factor(const std::string& kind, const SpectralBounds& bounds,
                                 double t = 0.0) {
    if (kind == "lanczos") {
        const double kap = (bounds.lambda_max + t) / (bounds.lambda_min + t);
        if (kap <= 1.0) return 0.0;
        return (std::sqrt(kap) - 1.0) / (std::sqrt(kap) + 1.0);
    }
    if (kind == "si_or_ek") {
        if (bounds.kappa() <= 1.0) return 0.0;
        return alpha0_fourth_root(bounds);
    }
    throw std::invalid_argument("convergence_factor: unknown kind " + kind);
}

// Transformed condition number kappa_xi(t) of the shifted-inverted problem,
// piecewise in t with seam at t = -xi; kappa_xi(0) and the t -> infinity
// limit both equal sqrt(kappa) at the optimal shift.
inline double kappa_xi(double t, double xi, const SpectralBounds& bounds) {
    if (!(t >= 0.0) || !(xi < 0.0)) throw std::invalid_argument("kappa_xi: need t >= 0, xi < 0");
    const double ratio_inf = (bounds.lambda_max - xi) / (bounds.lambda_min - xi);
    if (t <= -xi)
        return (bounds.lambda_max + t) / (bounds.lambda_min + t) / ratio_inf;
    return (bounds.lambda_min + t) / (bounds.lambda_max + t) * ratio_inf;
}

inline double kappa_xi_infinity(double xi, const SpectralBounds& bounds) {
    return (bounds.lambda_max - xi) / (bounds.lambda_min - xi);
}

// Prefactor estimate C = sqrt(1 - alpha^2) ||f(A)b||.
inline double estimate_C(double norm_fAb, double alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0)) throw std::invalid_argument("estimate_C: alpha in [0,1)");
    return std::sqrt(1.0 - alpha * alpha) * norm_fAb;
}

// Smallest m with C alpha^m <= eps.
inline int predict_m_star(double alpha, double C, double eps) {
    if (!(alpha > 0.0 && alpha < 1.0) || !(C > 0.0) || !(eps > 0.0))
        throw std::invalid_argument("predict_m_star: need alpha in (0,1), C > 0, eps > 0");
    if (eps >= C) return 0;
    return static_cast<int>(std::ceil(std::log(eps / C) / std::log(alpha)));
}

namespace detail {
inline double log_cosh(double x) {  // overflow-safe ln cosh
    const double a = std::abs(x);
    return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}
} // namespace detail

// k* = ceil( ln cosh(m* ln c) / ln cosh(m_re ln c) ); 1 when a single cycle
// suffices or kappa = 1 (c = 0).
inline int predict_restart_cycles(int m_re, int m_star, double c) {
    if (m_re < 1) throw std::invalid_argument("predict_restart_cycles: m_re >= 1");
    if (c <= 0.0 || m_star <= m_re) return 1;
    const double L = -std::log(c);
    const double k = detail::log_cosh(m_star * L) / detail::log_cosh(m_re * L);
    return std::max(1, static_cast<int>(std::ceil(k)));
}

struct PredictParams {
    int m_re = 30;  // restart length
    int p = 0;      // Zolotarev pole count; 0 = minimal for eps/2
};

// Predicted total matrix-vector products for a method on the instance with
// the given spectral bounds, ||f(A)b|| and relative tolerance eps_rel.
inline Prediction predict_total_matvecs(const std::string& method, const SpectralBounds& bounds,
                                        const StieltjesFunction& f, double norm_fAb,
                                        double eps_rel, const PredictParams& params = {}) {
    Prediction pr;
    pr.method = method;
    const double eps_abs = eps_rel * norm_fAb;
    const double a_lan = convergence_factor("lanczos", bounds, f.t0);
    const double a0 = convergence_factor("si_or_ek", bounds);

    if (method == "two_pass") {
        pr.alpha = a_lan;
        pr.C = estimate_C(norm_fAb, a_lan);
        pr.m_star = predict_m_star(a_lan, pr.C, eps_abs);
        pr.total_matvecs = 2L * pr.m_star;
        return pr;
    }
    if (method == "mscg") {
        const int p = params.p > 0 ? params.p
                                   : min_poles_for_tolerance(bounds, f.tag, 0.5 * eps_rel);
        const auto rat = zolotarev_inv_sqrt(bounds, p);
        // dominant (least well conditioned) system: the pole closest to zero
        const double z1 = rat.zeta.front(), w1 = std::abs(rat.omega.front());
        const SpectralBounds sb(bounds.lambda_min - z1, bounds.lambda_max - z1);
        const double a1 = convergence_factor("lanczos", sb);
        pr.alpha = a1;
        pr.C = estimate_C(w1, a1);
        pr.m_star = predict_m_star(a1, pr.C, eps_rel);
        pr.total_matvecs = pr.m_star;
        return pr;
    }
    if (method == "restarted") {
        pr.alpha = a_lan;
        pr.C = estimate_C(norm_fAb, a_lan);
        const int m_star = predict_m_star(a_lan, pr.C, eps_abs);
        const double L = -std::log(a_lan);
        const double k_real = (m_star <= params.m_re)
                                  ? 1.0
                                  : detail::log_cosh(m_star * L) / detail::log_cosh(params.m_re * L);
        pr.m_star = predict_restart_cycles(params.m_re, m_star, a_lan);
        pr.total_matvecs = static_cast<long>(std::ceil(k_real * params.m_re));
        return pr;
    }
    if (method == "si" || method == "eksm") {
        pr.alpha = a0;
        pr.C = estimate_C(norm_fAb, a0);
        const int m_outer_si = predict_m_star(a0, pr.C, eps_abs);
        const double xi = optimal_shift(bounds);
        long total = 0;
        if (method == "si") {
            pr.m_star = m_outer_si;
            const auto cfg = inner_tolerance_schedule(eps_abs, f, bounds, xi);
            const double S = 1.0 / (bounds.lambda_min - xi);  // ||B||
            // inner CG on (A - xi I): condition number sqrt(kappa)
            const double a_in = convergence_factor("lanczos",
                                                   SpectralBounds(bounds.lambda_min - xi,
                                                                  bounds.lambda_max - xi));
            for (int j = 1; j <= pr.m_star; ++j) {
                const int mj = std::max(1, predict_m_star(a_in, 2.0 * S, cfg.eps(j)));
                pr.inner_counts.push_back(mj);
                total += mj;
            }
        } else {
            pr.m_star = (m_outer_si + 1) / 2;  // two directions per outer step
            const auto cfg = inner_tolerance_schedule(eps_abs, f, bounds, 0.0);
            for (int j = 1; j <= pr.m_star; ++j) {
                const double eps_j = cfg.eps1 * std::pow(1.0 / (a0 * a0), j - 1);
                const int mj = std::max(1, predict_m_star(a_lan, 2.0 * norm_fAb, eps_j));
                pr.inner_counts.push_back(mj);
                total += mj;
            }
            total += pr.m_star;  // one direct matvec per outer step
        }
        pr.total_matvecs = total;
        return pr;
    }
    throw std::invalid_argument("predict_total_matvecs: unknown method " + method);
}

// --- work-unit cost model ---------------------------------------------------

struct WorkCounts {
    long iterations = 0;          // CG iterations (mscg) or total Lanczos steps (restarted)
    double active_extras_sum = 0; // sum over iterations of active non-seed systems (mscg)
    int p = 1;                    // number of shifted systems (mscg)
    int cycles = 0;               // restart cycles (restarted)
    int m_re = 0;                 // restart length (restarted)
};

// Work in units of V (one length-N vector operation); a matvec costs M_cost.
// mscg: (M + 12V) per iteration, 5V per active non-seed system per iteration,
// plus the final weighted combination (~pV, absent for a single system).
// restarted: (M + 9V) per Lanczos step plus ~2 m_re V of quadrature-update
// work per cycle.
inline double work_units(const std::string& method, const WorkCounts& counts, double M_cost) {
    if (!(M_cost > 0.0)) throw std::invalid_argument("work_units: M_cost > 0");
    if (method == "mscg")
        return counts.iterations * (M_cost + 12.0) + 5.0 * counts.active_extras_sum +
               (counts.p > 1 ? counts.p : 0);
    if (method == "restarted")
        return counts.iterations * (M_cost + 9.0) + counts.cycles * 2.0 * counts.m_re;
    throw std::invalid_argument("work_units: unknown method " + method);
}

// One point of the MSCG-vs-restarted work comparison at relative accuracy
// eps_rel: pole count p (minimal for eps_rel/2), m_re = 2p, predicted
// iteration counts, and predicted work for both methods at matvec cost M.
struct WorkCurvePoint {
    double eps_rel = 0.0;
    int p = 0;
    long mscg_iterations = 0;
    long restarted_matvecs = 0;
    int cycles = 0;
    int m_re = 0;
    double work_mscg = 0.0;
    double work_restarted = 0.0;
};

inline WorkCurvePoint work_curve_point(const SpectralBounds& bounds, const StieltjesFunction& f,
                                       double norm_fAb, double eps_rel, double M_cost) {
    WorkCurvePoint pt;
    pt.eps_rel = eps_rel;
    const double eps_abs = eps_rel * norm_fAb;
    pt.p = min_poles_for_tolerance(bounds, f.tag, 0.5 * eps_rel);
    const auto rat = zolotarev_inv_sqrt(bounds, pt.p);

    PredictParams params;
    params.p = pt.p;
    params.m_re = 2 * pt.p;
    const auto pm = predict_total_matvecs("mscg", bounds, f, norm_fAb, eps_rel, params);
    pt.mscg_iterations = pm.total_matvecs;
    const auto pr = predict_total_matvecs("restarted", bounds, f, norm_fAb, eps_rel, params);
    pt.restarted_matvecs = pr.total_matvecs;
    pt.cycles = pr.m_star;
    pt.m_re = params.m_re;

    // Deflation schedule: system i stays active until its Theorem-1 bound
    // meets its tolerance tol_i = eps_abs (lmin - zeta_i) / (2 p |omega_i|).
    std::vector<int> m_sys(static_cast<std::size_t>(pt.p));
    for (int i = 0; i < pt.p; ++i) {
        const double z = rat.zeta[static_cast<std::size_t>(i)];
        const double w = std::abs(rat.omega[static_cast<std::size_t>(i)]);
        const double a_i = convergence_factor(
            "lanczos", SpectralBounds(bounds.lambda_min - z, bounds.lambda_max - z));
        const double tol_i = eps_abs * (bounds.lambda_min - z) / (2.0 * pt.p * w);
        const double pref = 2.0 / std::sqrt(bounds.lambda_min - z);
        m_sys[static_cast<std::size_t>(i)] =
            (tol_i < pref) ? std::max(1, predict_m_star(a_i, pref, tol_i)) : 1;
    }
    WorkCounts wc;
    wc.iterations = pt.mscg_iterations;
    wc.p = pt.p;
    for (long m = 1; m <= pt.mscg_iterations; ++m) {
        int act = 0;
        for (int mi : m_sys)
            if (mi > m) ++act;
        wc.active_extras_sum += std::min(act, pt.p - 1);
    }
    pt.work_mscg = work_units("mscg", wc, M_cost);

    WorkCounts wr;
    wr.iterations = pt.restarted_matvecs;
    wr.cycles = pt.cycles;
    wr.m_re = pt.m_re;
    pt.work_restarted = work_units("restarted", wr, M_cost);
    return pt;
}

// Perturbed outer convergence rate for inexact shift-and-invert with
// perturbation size eps (appendix formula); equals alpha(0) at eps = 0 and
// reaches 1 at eps = 1/(lambda_max - xi).
inline double perturbed_rate(double eps, const SpectralBounds& bounds) {
    if (eps < 0.0) throw std::invalid_argument("perturbed_rate: eps >= 0 required");
    if (eps == 0.0) return alpha0_fourth_root(bounds);  // exact unperturbed limit
    const double xi = optimal_shift(bounds);
    if (eps >= 1.0 / (bounds.lambda_max - xi)) return 1.0;
    const double sk = std::sqrt(bounds.kappa());
    const double beta = (sk - 1.0) / (sk + 1.0);
    const double denom = 1.0 + std::sqrt(1.0 - beta * beta);
    const double rate =
        (beta - 2.0 * xi * eps + 2.0 * std::sqrt(eps) * std::sqrt(-beta * xi + eps * xi * xi)) /
        denom;
    return std::min(1.0, rate);
}

} // namespace krylov
