// Restarted Lanczos for f(A)b. After k cycles the residual error function is
// itself (a scalar multiple of) a Stieltjes function,
//   e_M(z) = (-1)^M ||b|| gamma_M  int dmu(t) / (w_M(t) (z + t)),
// with M the total number of Lanczos steps taken, gamma_M the product of all
// beta couplings and w_M(t) = prod_i (t + theta_i) over all accumulated Ritz
// values. Each cycle applies this function to the new small tridiagonal via
// quadrature (one Thomas solve per node), all products held in log space.
#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lanczos.hpp"
#include "operators.hpp"
#include "report.hpp"
#include "stieltjes.hpp"
#include "tridiag.hpp"

namespace krylov {

struct RestartState {
    int cycle = 0;                // completed cycles
    int m_accum = 0;              // total Lanczos steps across completed cycles
    std::vector<double> thetas;   // accumulated Ritz values (all > 0)
    double log_gamma = 0.0;       // log prod beta couplings across cycles
    double norm_b = 0.0;
    Vector f_acc;                 // accumulated approximation
    Vector v;                     // current cycle's starting vector (unit norm)
};

// e_acc(T) e1 in coefficient space, where e_acc is the accumulated error
// function above (reduces to ||b|| f(T) e1 for zero accumulated cycles).
// Computed with the measure quadrature at tolerance qtol and verified against
// a 16x finer rule.
inline std::vector<double> error_function_apply(const RestartState& st,
                                                const StieltjesFunction& f,
                                                const Tridiagonal& T, double qtol) {
    for (double th : st.thetas)
        if (th <= 0.0) throw std::runtime_error("error_function_apply: nonpositive Ritz value");
    const int m = T.order();
    const double sign = (st.m_accum % 2 == 0) ? 1.0 : -1.0;

    auto accumulate = [&](double rule_tol) {
        std::vector<double> acc(static_cast<std::size_t>(m), 0.0);
        for (const auto& node : f.quadrature(rule_tol)) {
            double logw = 0.0;
            for (double th : st.thetas) logw += std::log(node.t + th);
            const double scale = node.w * std::exp(st.log_gamma - logw);
            if (scale == 0.0) continue;
            const auto x = shifted_solve_e1(T, node.t);
            for (int i = 0; i < m; ++i) acc[static_cast<std::size_t>(i)] += scale * x[static_cast<std::size_t>(i)];
        }
        for (double& a : acc) a *= sign * st.norm_b;
        return acc;
    };

    auto coarse = accumulate(qtol);
    auto fine = accumulate(qtol / 16.0);
    double dn = 0.0, fn = 0.0;
    for (std::size_t i = 0; i < fine.size(); ++i) {
        dn += (fine[i] - coarse[i]) * (fine[i] - coarse[i]);
        fn += fine[i] * fine[i];
    }
    if (std::sqrt(dn) > 16.0 * qtol * std::sqrt(fn) + 1e-300)
        throw std::runtime_error("error_function_apply: quadrature did not converge");
    return fine;
}

// Restarted Lanczos with restart length m_re. Stops when the cycle update
// norm (a proxy for the previous cycle's error, guarded by the a-priori
// bound) falls below tol; in oracle mode (true_fAb given) the true relative
// 2-norm error is used, checked at cycle granularity.
inline std::pair<Vector, MethodReport> restarted_lanczos_fAb(
    const DiagonalOperator& op, const StieltjesFunction& f, const Vector& b, int m_re,
    double tol, int max_cycles, const Vector* true_fAb = nullptr) {
    if (m_re < 1) throw std::invalid_argument("restarted_lanczos_fAb: m_re >= 1 required");
    MethodReport rep;
    rep.method = "restarted_lanczos";
    const double qtol = tol / (10.0 * max_cycles);

    RestartState st;
    st.norm_b = norm2(b);
    st.f_acc.assign(b.size(), 0.0);
    st.v = b;
    scal(1.0 / st.norm_b, st.v);

    for (int k = 1; k <= max_cycles; ++k) {
        auto d = lanczos_start(st.v, /*keep_basis=*/true);
        lanczos_extend(op, d, m_re);
        const int m = d.order();  // < m_re only on breakdown
        const auto coeff = error_function_apply(st, f, d.T, qtol);

        Vector update(b.size(), 0.0);
        for (int j = 0; j < m; ++j)
            axpy(coeff[static_cast<std::size_t>(j)], d.V[static_cast<std::size_t>(j)], update);
        axpy(1.0, update, st.f_acc);
        rep.outer_iterations = k;
        rep.matvecs += m;

        double err;
        if (true_fAb) {
            err = rel_error2(st.f_acc, *true_fAb);
        } else {
            err = norm2(update) / st.norm_b;  // relative to ||b|| scale
        }
        rep.error_history.push_back(err);

        if (d.breakdown) {
            rep.converged = true;
            break;
        }
        if (err <= tol) {
            rep.converged = true;
            break;
        }

        // Absorb the cycle into the accumulated error function.
        const auto eig = eigh(d.T);
        for (int i = 0; i < m; ++i) {
            if (eig.values[i] <= 0.0)
                throw std::runtime_error("restarted_lanczos_fAb: nonpositive Ritz value");
            st.thetas.push_back(eig.values[i]);
        }
        st.log_gamma += d.log_gamma;
        st.m_accum += m;
        st.cycle = k;
        st.v = d.v_curr;
    }

    if (true_fAb) {
        rep.achieved_error = rel_error2(st.f_acc, *true_fAb);
        rep.converged = rep.achieved_error <= tol;
    } else if (!rep.error_history.empty()) {
        rep.achieved_error = rep.error_history.back();
    }
    return {st.f_acc, rep};
}

} // namespace krylov
