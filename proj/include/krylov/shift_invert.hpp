// Shift-and-invert Lanczos for f(A)b: Arnoldi on B = (A - xi I)^{-1} with
// each application of B replaced by an inner CG solve to a geometrically
// relaxed tolerance, the corrected approximation
//   g_hat_m = ||b|| ( V_m g(H_m) e1 + h_{m+1,m} (e_m^T H_m^{-1} g(H_m) e1) v_{m+1} ),
// and tracking of the inexactness perturbation ||E_m|| via the inner residual
// norms.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lanczos.hpp"
#include "operators.hpp"
#include "report.hpp"
#include "stieltjes.hpp"

namespace krylov {

// xi = -sqrt(lambda_min lambda_max): equalizes the transformed condition
// numbers kappa_xi(0) and kappa_{xi,infinity}.
inline double optimal_shift(const SpectralBounds& bounds) {
    return -std::sqrt(bounds.lambda_min * bounds.lambda_max);
}

// Transformed function g(y) = f(1/y + xi), defined for y in (0, -1/xi].
inline std::function<double(double)> transformed_g(const StieltjesFunction& f, double xi) {
    if (!(xi < 0.0)) throw std::invalid_argument("transformed_g: xi < 0 required");
    return [f, xi](double y) {
        if (!(y > 0.0 && y <= -1.0 / xi + 1e-12))
            throw std::domain_error("transformed_g: y outside (0, -1/xi]");
        return f.eval(1.0 / y + xi);
    };
}

struct InnerSolveConfig {
    double eps1 = 0.0;      // base inner residual tolerance
    double ratio = 1.0;     // relaxation ratio rho = 1/alpha(0) (>= 1)
    int max_inner = 100000;
    bool exact = false;     // test-only: exact diagonal inner solves

    double eps(int j) const { return eps1 * std::pow(ratio, j - 1); }  // j = 1, 2, ...
};

// alpha(0) = (kappa^{1/4} - 1)/(kappa^{1/4} + 1): the outer rate of SI/EKSM.
inline double alpha0_fourth_root(const SpectralBounds& bounds) {
    const double q = std::pow(bounds.kappa(), 0.25);
    return (q - 1.0) / (q + 1.0);
}

// eps_1 = eps / ( 2 ( (lmin - xi)|f'(lmin)| + (lmax - xi)|f'(sqrt(lmin lmax))| ) ),
// relaxed geometrically with ratio 1/alpha(0). `strict` keeps the tolerance
// constant at eps_1 (the non-relaxed schedule the worst-case estimate allows).
inline InnerSolveConfig inner_tolerance_schedule(double eps_target, const StieltjesFunction& f,
                                                 const SpectralBounds& bounds, double xi,
                                                 bool strict = false) {
    if (!(eps_target > 0.0)) throw std::invalid_argument("inner_tolerance_schedule: eps_target > 0");
    const double geo = std::sqrt(bounds.lambda_min * bounds.lambda_max);
    const double pref = (bounds.lambda_min - xi) * std::abs(f.deriv(bounds.lambda_min)) +
                        (bounds.lambda_max - xi) * std::abs(f.deriv(geo));
    InnerSolveConfig cfg;
    cfg.eps1 = eps_target / (2.0 * pref);
    cfg.ratio = strict ? 1.0 : 1.0 / alpha0_fourth_root(bounds);
    return cfg;
}

// ||E_m|| <= norm_B * sqrt(sum_j ||r_j||^2), norm_B = 1/(lambda_min - xi).
inline double em_norm_bound(const std::vector<double>& residual_norms, double norm_B) {
    double s = 0.0;
    for (double r : residual_norms) {
        if (r < 0.0) throw std::invalid_argument("em_norm_bound: negative residual norm");
        s += r * r;
    }
    return norm_B * std::sqrt(s);
}

// CG on (A + sigma I) x = rhs (sigma = -xi >= 0) with zero initial guess and
// absolute residual tolerance. Returns iterations; x and the final residual
// are written in place.
inline int cg_shifted(const DiagonalOperator& op, double sigma, const Vector& rhs, double tol,
                      int max_it, Vector& x, Vector& r) {
    x.assign(rhs.size(), 0.0);
    r = rhs;
    Vector p = r;
    double rs = dot(r, r);
    if (std::sqrt(rs) <= tol) return 0;
    for (int it = 1; it <= max_it; ++it) {
        Vector Ap = op.apply(p);
        if (sigma != 0.0) axpy(sigma, p, Ap);
        const double a = rs / dot(p, Ap);
        axpy(a, p, x);
        axpy(-a, Ap, r);
        const double rsn = dot(r, r);
        if (std::sqrt(rsn) <= tol) return it;
        const double bb = rsn / rs;
        for (std::size_t j = 0; j < p.size(); ++j) p[j] = r[j] + bb * p[j];
        rs = rsn;
    }
    throw std::runtime_error("cg_shifted: inner CG did not converge");
}

// Theorem-5 bound ||b|| sqrt(kappa) ( sqrt(kappa) f1(lmin) + f2(sqrt(lmin lmax)) ) alpha_m(0)
// with f1, f2 the split integrals of the measure over (0, -xi) and (-xi, inf).
inline double si_error_bound(const SpectralBounds& bounds, const StieltjesFunction& f, int m,
                             double norm_b = 1.0) {
    const double xi = optimal_shift(bounds);
    const double geo = -xi;
    double f1 = 0.0, f2 = 0.0;
    for (const auto& node : f.quadrature(1e-10)) {
        if (node.t < -xi)
            f1 += node.w / (bounds.lambda_min + node.t);
        else
            f2 += node.w / (geo + node.t);
    }
    const double sk = std::sqrt(bounds.kappa());
    const double a0 = alpha0_fourth_root(bounds);
    const double alpha_m = (a0 > 0.0) ? 1.0 / std::cosh(m * std::log(1.0 / a0)) : (m == 0 ? 1.0 : 0.0);
    return norm_b * sk * (sk * f1 + f2) * alpha_m;
}

namespace detail {

// g(H) e1 and H^{-1} g(H) e1 via dense complex eigendecomposition of the
// (generally non-symmetric, Hessenberg) compression, where
// g(y) = int dmu(t) y / (1 + (xi + t) y). Falls back to quadrature of dense
// resolvents when the eigenvector matrix is ill conditioned.
inline void g_of_H_e1(const Eigen::MatrixXd& H, const std::vector<MeasureNode>& nodes, double xi,
                      Eigen::VectorXd& ge1, Eigen::VectorXd& hinv_ge1) {
    const int m = static_cast<int>(H.rows());
    Eigen::ComplexEigenSolver<Eigen::MatrixXd> es(H);
    if (es.info() == Eigen::Success) {
        const auto& W = es.eigenvectors();
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(W);
        const double cond = W.cwiseAbs().maxCoeff() * lu.inverse().cwiseAbs().maxCoeff() * m;
        if (cond < 1e8) {
            Eigen::VectorXcd c = lu.solve(Eigen::VectorXcd::Unit(m, 0));
            Eigen::VectorXcd gc(m), hc(m);
            for (int i = 0; i < m; ++i) {
                const std::complex<double> y = es.eigenvalues()[i];
                std::complex<double> g(0.0, 0.0);
                for (const auto& n : nodes) g += n.w * y / (1.0 + (xi + n.t) * y);
                gc[i] = g * c[i];
                hc[i] = g / y * c[i];
            }
            ge1 = (W * gc).real();
            hinv_ge1 = (W * hc).real();
            return;
        }
    }
    // Fallback: g(H)e1 = int (I + (xi+t) H)^{-1} H e1 dmu(t).
    ge1 = Eigen::VectorXd::Zero(m);
    const Eigen::VectorXd He1 = H.col(0);
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(m, m);
    for (const auto& n : nodes)
        ge1 += n.w * (I + (xi + n.t) * H).partialPivLu().solve(He1);
    hinv_ge1 = H.partialPivLu().solve(ge1);
}

} // namespace detail

// Shift-and-invert Lanczos (inexact inner solves). Oracle mode stops on the
// true relative 2-norm error per outer step; otherwise the Theorem-5 bound
// plus the tracked perturbation estimate decides. Set corrected = false for
// the plain (uncorrected) SI approximation.
inline std::pair<Vector, MethodReport> si_lanczos_fAb(const DiagonalOperator& op,
                                                      const StieltjesFunction& f, const Vector& b,
                                                      double tol, const SpectralBounds& bounds,
                                                      const InnerSolveConfig& inner,
                                                      const Vector* true_fAb = nullptr,
                                                      bool corrected = true, int max_outer = 400) {
    MethodReport rep;
    rep.method = "si_lanczos";
    const long count0 = op.matvec_count();
    const double xi = optimal_shift(bounds);
    const double sigma = -xi;
    const double nb = norm2(b);
    const double norm_B = 1.0 / (bounds.lambda_min - xi);
    const std::size_t N = b.size();
    const auto nodes = f.quadrature(1e-9);
    const auto& lam = op.spectrum();

    std::vector<Vector> V;
    V.push_back(b);
    scal(1.0 / nb, V.back());
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(max_outer + 1, max_outer);

    // Library-mode absolute target: tol * || f(A)b || estimated cheaply.
    double eps_abs;
    if (true_fAb) {
        eps_abs = tol * norm2(*true_fAb);
    } else {
        const int m_est = std::min<int>(10, static_cast<int>(N));
        eps_abs = tol * norm2(lanczos_fAb(op, f, b, m_est));
    }

    Vector result = V.front();
    for (int m = 1; m <= max_outer; ++m) {
        // w = B v_m, approximated by inner CG on (A - xi I) w = v_m.
        Vector w, r_in;
        int its = 0;
        if (inner.exact) {
            w.resize(N);
            for (std::size_t j = 0; j < N; ++j) w[j] = V.back()[j] / (lam[j] - xi);
            r_in.assign(N, 0.0);
        } else {
            its = cg_shifted(op, sigma, V.back(), inner.eps(m), inner.max_inner, w, r_in);
        }
        rep.inner_iterations.push_back(its);
        rep.inner_residuals.push_back(norm2(r_in));
        rep.em_bound_history.push_back(em_norm_bound(rep.inner_residuals, norm_B));

        // Arnoldi orthogonalization (two Gram-Schmidt sweeps).
        for (int sweep = 0; sweep < 2; ++sweep) {
            for (int i = 0; i < m; ++i) {
                const double h = dot(V[static_cast<std::size_t>(i)], w);
                axpy(-h, V[static_cast<std::size_t>(i)], w);
                H(i, m - 1) += h;
            }
        }
        const double eta = norm2(w);
        bool breakdown = eta <= 1e-14 * norm_B;
        if (!breakdown) {
            H(m, m - 1) = eta;
            scal(1.0 / eta, w);
            V.push_back(std::move(w));
        }

        Eigen::VectorXd ge1, hinv_ge1;
        detail::g_of_H_e1(H.topLeftCorner(m, m), nodes, xi, ge1, hinv_ge1);
        std::fill(result.begin(), result.end(), 0.0);
        for (int j = 0; j < m; ++j) axpy(nb * ge1[j], V[static_cast<std::size_t>(j)], result);
        if (corrected && !breakdown)
            axpy(nb * eta * hinv_ge1[m - 1], V.back(), result);

        rep.outer_iterations = m;
        double err_abs;
        if (true_fAb) {
            err_abs = rel_error2(result, *true_fAb) * (eps_abs / tol);
            rep.error_history.push_back(err_abs / (eps_abs / tol));
        } else {
            err_abs = si_error_bound(bounds, f, m, nb) + 2.0 * rep.em_bound_history.back();
            rep.error_history.push_back(err_abs);
        }
        if (err_abs <= eps_abs || breakdown) {
            rep.converged = true;
            break;
        }
    }
    rep.matvecs = op.matvec_count() - count0;
    if (true_fAb) {
        rep.achieved_error = rel_error2(result, *true_fAb);
        rep.converged = rep.achieved_error <= tol;
    }
    return {std::move(result), rep};
}

} // namespace krylov
