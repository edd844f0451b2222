// Multi-shift CG: one Krylov recurrence (seed system A x = b) drives iterates
// for all shifted systems (A - zeta_i I) x_i = b via per-shift scalar
// recurrences; shifted residuals stay collinear with the seed residual.
// mscg_fAb combines the shifted solutions with Zolotarev weights to
// approximate f(A)b for f(z) = z^{-1/2}.
#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lanczos.hpp"
#include "operators.hpp"
#include "report.hpp"
#include "stieltjes.hpp"
#include "zolotarev.hpp"

namespace krylov {

struct MultiShiftResult {
    std::vector<Vector> x;                 // per-shift solutions
    std::vector<double> residual_norms;    // per-shift final |zeta_k| * ||r_seed||
    std::vector<int> frozen_at;            // iteration at which each system converged
    int iterations = 0;
    bool converged = false;
};

// Solve (A - zeta_i I) x_i = b for all i with zero initial guesses. Systems
// are frozen (no further vector updates) once their residual norm drops below
// tols[i]. An optional per-iteration callback(combined-state) supports
// oracle-based stopping by the caller; returning true stops the iteration.
template <class Callback>
MultiShiftResult multishift_cg(const DiagonalOperator& op, const Vector& b,
                               const std::vector<double>& shifts, const std::vector<double>& tols,
                               int max_it, MethodReport& rep, const Callback& stop_early) {
    const std::size_t p = shifts.size();
    if (tols.size() != p) throw std::invalid_argument("multishift_cg: |tols| != |shifts|");
    const std::size_t N = b.size();

    MultiShiftResult res;
    res.x.assign(p, Vector(N, 0.0));
    res.residual_norms.assign(p, 0.0);
    res.frozen_at.assign(p, -1);

    Vector r = b, pv = b;
    std::vector<Vector> ps(p, b);                    // per-shift search directions
    std::vector<double> zold(p, 1.0), znew(p, 1.0);  // collinearity factors zeta_k
    std::vector<bool> active(p, true);
    double aold = 1.0, bold = 0.0;
    double rs = dot(r, r);

    for (int it = 1; it <= max_it; ++it) {
        const Vector Ap = op.apply(pv);
        const double curv = dot(pv, Ap);
        if (curv <= 0.0) throw std::runtime_error("multishift_cg: negative curvature (non-HPD)");
        const double a = rs / curv;

        std::vector<double> zn(p);
        int n_active = 0;
        for (std::size_t i = 0; i < p; ++i) {
            if (std::abs(znew[i]) < 1e-250 || !active[i]) {  // frozen: factor kept
                zn[i] = znew[i];
                continue;
            }
            const double den = a * bold * (zold[i] - znew[i]) + zold[i] * aold * (1.0 - shifts[i] * a);
            zn[i] = (den != 0.0) ? zold[i] * znew[i] * aold / den : 0.0;
            const double ai = a * zn[i] / znew[i];
            axpy(ai, ps[i], res.x[i]);
            ++n_active;
        }
        Vector rn = r;
        axpy(-a, Ap, rn);
        const double rsn = dot(rn, rn);
        const double bb = rsn / rs;
        for (std::size_t i = 0; i < p; ++i) {
            if (std::abs(znew[i]) < 1e-250 || !active[i]) continue;
            const double bi = bb * (zn[i] / znew[i]) * (zn[i] / znew[i]);
            for (std::size_t j = 0; j < N; ++j) ps[i][j] = zn[i] * rn[j] + bi * ps[i][j];
        }
        for (std::size_t j = 0; j < N; ++j) pv[j] = rn[j] + bb * pv[j];
        r = std::move(rn);
        rs = rsn;
        aold = a;
        bold = bb;
        zold = znew;
        znew = zn;

        res.iterations = it;
        rep.outer_iterations = it;
        // Cost model: matvec + seed recurrence work, plus 5 vector ops per
        // active non-seed system per iteration.
        rep.vector_ops += 12.0 + 5.0 * std::max(0, n_active - 1);

        const double rnorm = std::sqrt(rs);
        bool all_done = true;
        for (std::size_t i = 0; i < p; ++i) {
            res.residual_norms[i] = std::abs(znew[i]) * rnorm;
            if (active[i] && res.residual_norms[i] <= tols[i]) {
                active[i] = false;
                res.frozen_at[i] = it;
            }
            if (active[i]) all_done = false;
        }
        if (stop_early(res)) {
            res.converged = true;
            return res;
        }
        if (all_done) {
            res.converged = true;
            return res;
        }
    }
    return res;
}

inline MultiShiftResult multishift_cg(const DiagonalOperator& op, const Vector& b,
                                      const std::vector<double>& shifts,
                                      const std::vector<double>& tols, int max_it,
                                      MethodReport& rep) {
    return multishift_cg(op, b, shifts, tols, max_it, rep,
                         [](const MultiShiftResult&) { return false; });
}

// f(A)b for f(z) = z^{-1/2} via Zolotarev + multi-shift CG. The pole count is
// the minimal p with uniform relative error <= tol/(2||b||-scale), and the
// per-system residual tolerances guarantee the aggregate solve error <= eps/2.
// In oracle mode the true relative A-norm error provides the stopping rule;
// otherwise the per-system residual guarantees are run to completion and
// ||f(A)b|| is estimated from a short Lanczos run.
inline std::pair<Vector, MethodReport> mscg_fAb(const DiagonalOperator& op,
                                                const StieltjesFunction& f, const Vector& b,
                                                double tol, const SpectralBounds& bounds,
                                                const Vector* true_fAb = nullptr,
                                                int max_it = 100000,
                                                bool stop_in_A_norm = true) {
    if (f.tag != "inv_sqrt")
        throw std::invalid_argument("mscg_fAb: Zolotarev path implemented for inv_sqrt only");
    MethodReport rep;
    rep.method = "mscg";
    const long count0 = op.matvec_count();
    const double nb = norm2(b);

    const int p = min_poles_for_tolerance(bounds, f.tag, tol / (2.0 * nb));
    const auto rat = zolotarev_inv_sqrt(bounds, p);

    double nf;  // ||f(A)b|| scale for the absolute target
    if (true_fAb) {
        nf = norm2(*true_fAb);
    } else {
        const int m_est = std::min<int>(10, static_cast<int>(op.dimension()));
        nf = norm2(lanczos_fAb(op, f, b, m_est));  // cheap norm estimate (counted)
    }
    const double eps_abs = tol * nf;

    std::vector<double> tols(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i)
        tols[static_cast<std::size_t>(i)] =
            eps_abs * (bounds.lambda_min - rat.zeta[static_cast<std::size_t>(i)]) /
            (2.0 * p * std::abs(rat.omega[static_cast<std::size_t>(i)]) * nb);

    const auto& lam = op.spectrum();
    Vector combined(b.size(), 0.0);
    auto combine = [&](const MultiShiftResult& ms) {
        std::fill(combined.begin(), combined.end(), 0.0);
        for (int i = 0; i < p; ++i)
            axpy(rat.omega[static_cast<std::size_t>(i)], ms.x[static_cast<std::size_t>(i)], combined);
    };

    auto stop_early = [&](const MultiShiftResult& ms) {
        if (!true_fAb) return false;
        combine(ms);
        const double err = stop_in_A_norm ? rel_errorA(combined, *true_fAb, lam)
                                          : rel_error2(combined, *true_fAb);
        rep.error_history.push_back(err);
        return err <= tol;
    };

    const auto ms = multishift_cg(op, b, rat.zeta, tols, max_it, rep, stop_early);
    combine(ms);
    rep.vector_ops += p;  // final weighted combination
    rep.matvecs = op.matvec_count() - count0;
    rep.converged = ms.converged;
    if (true_fAb) {
        rep.achieved_error = rel_error2(combined, *true_fAb);
        rep.achieved_error_A = rel_errorA(combined, *true_fAb, lam);
    }
    return {std::move(combined), rep};
}

} // namespace krylov
