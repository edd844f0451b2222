// Symmetric tridiagonal helpers: eigendecomposition-based f(T)e1 and
// shifted solves (T + tI)^{-1} e1 (one Thomas solve per quadrature node).
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace krylov {

struct Tridiagonal {
    std::vector<double> alpha;  // diagonal, size m
    std::vector<double> beta;   // subdiagonal, size m-1 (beta[i] couples i,i+1)

    int order() const { return static_cast<int>(alpha.size()); }
};

struct TridiagEigen {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // columns are eigenvectors
};

inline TridiagEigen eigh(const Tridiagonal& T) {
    const int m = T.order();
    Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(T.alpha.data(), m);
    Eigen::VectorXd e(m > 1 ? m - 1 : 0);
    for (int i = 0; i + 1 < m; ++i) e[i] = T.beta[static_cast<std::size_t>(i)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigh: tridiagonal solver failed");
    return {es.eigenvalues(), es.eigenvectors()};
}

// f(T) e1 = U f(Lambda) U^T e1 computed from a precomputed eigendecomposition.
template <class F>
std::vector<double> apply_f_e1(const TridiagEigen& eig, const F& f) {
    const int m = static_cast<int>(eig.values.size());
    Eigen::VectorXd c = eig.vectors.row(0).transpose();
    for (int i = 0; i < m; ++i) c[i] *= f(eig.values[i]);
    Eigen::VectorXd y = eig.vectors * c;
    return std::vector<double>(y.data(), y.data() + m);
}

template <class F>
std::vector<double> f_of_T_e1(const Tridiagonal& T, const F& f) {
    return apply_f_e1(eigh(T), f);
}

// Solve (T + t I) x = e1 by the Thomas algorithm. T + tI must be SPD
// (guaranteed here: T has positive Ritz values and t >= 0).
inline std::vector<double> shifted_solve_e1(const Tridiagonal& T, double t) {
    const int m = T.order();
    std::vector<double> c(static_cast<std::size_t>(m)), d(static_cast<std::size_t>(m));
    double denom = T.alpha[0] + t;
    c[0] = (m > 1) ? T.beta[0] / denom : 0.0;
    d[0] = 1.0 / denom;  // rhs e1
    for (int i = 1; i < m; ++i) {
        const double bi = T.beta[static_cast<std::size_t>(i - 1)];
        denom = (T.alpha[static_cast<std::size_t>(i)] + t) - bi * c[static_cast<std::size_t>(i - 1)];
        if (i + 1 < m) c[static_cast<std::size_t>(i)] = T.beta[static_cast<std::size_t>(i)] / denom;
        d[static_cast<std::size_t>(i)] = (0.0 - bi * d[static_cast<std::size_t>(i - 1)]) / denom;
    }
    std::vector<double> x(static_cast<std::size_t>(m));
    x[static_cast<std::size_t>(m - 1)] = d[static_cast<std::size_t>(m - 1)];
    for (int i = m - 2; i >= 0; --i)
        x[static_cast<std::size_t>(i)] = d[static_cast<std::size_t>(i)] -
                                         c[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i + 1)];
    return x;
}

} // namespace krylov
