// Extended Krylov subspace method: per outer step the basis is enlarged by
// one A^{-1}-direction (inner CG solve) and one A-direction vector. The
// images W = A V are tracked alongside the basis so the compression
// T = V^T A V comes from inner products and recombinations only:
//   * inverse step: s ~ A^{-1} u by CG, A s = u - r_cg exactly, so the new
//     column of W is a recombination (no extra matvec);
//   * power step: raw = W[last] (= A v_last, already tracked) becomes the new
//     direction; its image needs the single A * raw product of the step.
// Total direct matvecs: 1 + (number of outer steps), plus all inner CG work.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lanczos.hpp"
#include "operators.hpp"
#include "report.hpp"
#include "shift_invert.hpp"
#include "stieltjes.hpp"

namespace krylov {

namespace detail {

// Orthonormalize w against basis (two sweeps), returning the coefficients of
// the expansion w = sum c_i v_i + eta q. Returns false on rank loss.
inline bool ek_orth(const std::vector<Vector>& V, Vector& w, std::vector<double>& c, double& eta) {
    c.assign(V.size(), 0.0);
    for (int sweep = 0; sweep < 2; ++sweep)
        for (std::size_t i = 0; i < V.size(); ++i) {
            const double h = dot(V[i], w);
            axpy(-h, V[i], w);
            c[i] += h;
        }
    eta = norm2(w);
    if (eta <= 1e-13) return false;
    scal(1.0 / eta, w);
    return true;
}

} // namespace detail

// f(A)b by projection onto the extended Krylov space. Inner tolerances follow
// the geometric schedule in `inner` (exact diagonal solves when inner.exact).
// Oracle mode stops on the true relative 2-norm error per outer step; library
// mode uses the successive-iterate difference with the Theorem-6 rate guard.
// If coeff_history is given, the expansion coefficients ||b|| f(T)e1 of every
// outer step are recorded (used by the coefficient-monotonicity studies).
inline std::pair<Vector, MethodReport> extended_krylov_fAb(
    const DiagonalOperator& op, const StieltjesFunction& f, const Vector& b, double tol,
    const InnerSolveConfig& inner, const Vector* true_fAb = nullptr, int max_outer = 200,
    std::vector<std::vector<double>>* coeff_history = nullptr) {
    MethodReport rep;
    rep.method = "eksm";
    const long count0 = op.matvec_count();
    const double nb = norm2(b);
    const std::size_t N = b.size();
    const auto& lam = op.spectrum();
    const SpectralBounds bounds = op.bounds();
    const double alpha0 = alpha0_fourth_root(bounds);

    std::vector<Vector> V, W;  // basis and its images under A
    V.push_back(b);
    scal(1.0 / nb, V.back());
    W.push_back(op.apply(V.back()));

    double eps_rel_scale;  // ||f(A)b|| estimate for library-mode stopping
    if (true_fAb) {
        eps_rel_scale = norm2(*true_fAb);
    } else {
        const int m_est = std::min<int>(10, static_cast<int>(N));
        eps_rel_scale = norm2(lanczos_fAb(op, f, b, m_est));
    }

    Vector result(N, 0.0), prev_result(N, 0.0);
    for (int m = 1; m <= max_outer; ++m) {
        // Inverse direction from the last basis vector.
        {
            const Vector u = V.back();
            Vector s, r_cg;
            int its = 0;
            if (inner.exact) {
                s.resize(N);
                for (std::size_t j = 0; j < N; ++j) s[j] = u[j] / lam[j];
                r_cg.assign(N, 0.0);
            } else {
                its = cg_shifted(op, 0.0, u, inner.eps(m), inner.max_inner, s, r_cg);
            }
            rep.inner_iterations.push_back(its);
            rep.inner_residuals.push_back(norm2(r_cg));
            Vector As = u;  // A s = u - r_cg
            axpy(-1.0, r_cg, As);
            std::vector<double> c;
            double eta;
            Vector q = std::move(s);
            if (detail::ek_orth(V, q, c, eta)) {
                Vector Wq = std::move(As);
                for (std::size_t i = 0; i < W.size(); ++i) axpy(-c[i], W[i], Wq);
                scal(1.0 / eta, Wq);
                V.push_back(std::move(q));
                W.push_back(std::move(Wq));
            }
        }
        // Power direction: raw = A v_last, already tracked in W.
        {
            Vector raw = W.back();
            const Vector Araw = op.apply(raw);  // the one direct matvec of the step
            std::vector<double> c;
            double eta;
            if (detail::ek_orth(V, raw, c, eta)) {
                Vector Wq = Araw;
                for (std::size_t i = 0; i < W.size(); ++i) axpy(-c[i], W[i], Wq);
                scal(1.0 / eta, Wq);
                V.push_back(std::move(raw));
                W.push_back(std::move(Wq));
            }
        }

        // Compression T = V^T W (symmetrized) and the projected approximation.
        const int d = static_cast<int>(V.size());
        Eigen::MatrixXd T(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                T(i, j) = dot(V[static_cast<std::size_t>(i)], W[static_cast<std::size_t>(j)]);
        const Eigen::MatrixXd Ts = 0.5 * (T + T.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Ts);
        if (es.info() != Eigen::Success) throw std::runtime_error("eksm: projection eigensolve failed");
        if (es.eigenvalues()[0] <= 0.0) throw std::runtime_error("eksm: nonpositive projected eigenvalue");
        Eigen::VectorXd coef = es.eigenvectors().row(0).transpose();
        for (int i = 0; i < d; ++i) coef[i] *= f.eval(es.eigenvalues()[i]);
        const Eigen::VectorXd y = es.eigenvectors() * coef;
        if (coeff_history)
            coeff_history->push_back(std::vector<double>(y.data(), y.data() + d));

        prev_result = result;
        std::fill(result.begin(), result.end(), 0.0);
        for (int i = 0; i < d; ++i) axpy(nb * y[i], V[static_cast<std::size_t>(i)], result);

        rep.outer_iterations = m;
        double err;
        if (true_fAb) {
            err = rel_error2(result, *true_fAb);
        } else {
            // successive-difference estimator, damped by the outer rate
            Vector diff = result;
            axpy(-1.0, prev_result, diff);
            err = (m > 1) ? norm2(diff) * alpha0 * alpha0 / (1.0 - alpha0 * alpha0) / eps_rel_scale
                          : 1.0;
        }
        rep.error_history.push_back(err);
        if (err <= tol) {
            rep.converged = true;
            break;
        }
        if (static_cast<std::size_t>(d) >= N) break;  // full space reached
    }
    rep.matvecs = op.matvec_count() - count0;
    if (true_fAb) {
        rep.achieved_error = rel_error2(result, *true_fAb);
        rep.converged = rep.achieved_error <= tol;
    }
    return {std::move(result), rep};
}

} // namespace krylov
