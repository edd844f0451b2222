// Operator abstraction with matvec counting and the synthetic spectra used
// throughout the experiments.
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace krylov {

using Vector = std::vector<double>;

struct SpectralBounds {
    double lambda_min = 0.0;
    double lambda_max = 0.0;

    SpectralBounds() = default;
    SpectralBounds(double lmin, double lmax) : lambda_min(lmin), lambda_max(lmax) {
        if (lambda_min <= 0.0 || lambda_max < lambda_min)
            throw std::invalid_argument("SpectralBounds: need 0 < lambda_min <= lambda_max");
    }
    double kappa() const { return lambda_max / lambda_min; }
};

// Hermitian positive definite operator given by its (known) diagonal spectrum.
// The matvec counter is atomic so concurrent appliers stay consistent.
class DiagonalOperator {
public:
    explicit DiagonalOperator(Vector eigenvalues) : lambda_(std::move(eigenvalues)) {
        for (double l : lambda_)
            if (l <= 0.0) throw std::invalid_argument("DiagonalOperator: eigenvalues must be positive");
    }

    std::size_t dimension() const { return lambda_.size(); }
    const Vector& spectrum() const { return lambda_; }
    long matvec_count() const { return count_.load(); }
    void reset_count() const { count_.store(0); }

    // y = A x, counted as one matvec.
    void apply(const Vector& x, Vector& y) const {
        if (x.size() != lambda_.size()) throw std::invalid_argument("apply: dimension mismatch");
        y.resize(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) y[i] = lambda_[i] * x[i];
        ++count_;
    }

    Vector apply(const Vector& x) const {
        Vector y;
        apply(x, y);
        return y;
    }

    // Exact f(A)b for diagonal operators (test oracle; not counted).
    template <class F>
    Vector oracle_fAb(const F& f, const Vector& b) const {
        Vector y(b.size());
        for (std::size_t i = 0; i < b.size(); ++i) y[i] = f(lambda_[i]) * b[i];
        return y;
    }

    SpectralBounds bounds() const {
        double lo = lambda_[0], hi = lambda_[0];
        for (double l : lambda_) {
            lo = std::min(lo, l);
            hi = std::max(hi, l);
        }
        return SpectralBounds(lo, hi);
    }

private:
    Vector lambda_;
    mutable std::atomic<long> count_{0};
};

// Chebyshev points of the first kind mapped affinely to [lambda_min, lambda_max],
// sorted ascending.
inline DiagonalOperator make_diagonal_chebyshev(int N, const SpectralBounds& bounds) {
    if (N < 1) throw std::invalid_argument("make_diagonal_chebyshev: N >= 1 required");
    const double mid = 0.5 * (bounds.lambda_min + bounds.lambda_max);
    const double rad = 0.5 * (bounds.lambda_max - bounds.lambda_min);
    Vector lam(static_cast<std::size_t>(N));
    for (int j = 1; j <= N; ++j) {
        const double node = std::cos((2.0 * j - 1.0) * M_PI / (2.0 * N));
        lam[static_cast<std::size_t>(N - j)] = mid + rad * node;  // ascending order
    }
    return DiagonalOperator(std::move(lam));
}

// Clustered spectrum: lambda_1 = lambda_min, lambda_N = lambda_max and interior
// lambda_j = lambda_min + ((j-1)/(N-1)) (lambda_max-lambda_min) gamma^{N-j},
// which piles eigenvalues onto the lower end for small gamma.
inline DiagonalOperator make_diagonal_clustered(int N, const SpectralBounds& bounds, double gamma) {
    if (N < 2) throw std::invalid_argument("make_diagonal_clustered: N >= 2 required");
    if (!(gamma > 0.0 && gamma <= 1.0))
        throw std::invalid_argument("make_diagonal_clustered: gamma in (0,1] required");
    Vector lam(static_cast<std::size_t>(N));
    lam.front() = bounds.lambda_min;
    lam.back() = bounds.lambda_max;
    const double span = bounds.lambda_max - bounds.lambda_min;
    for (int j = 2; j <= N - 1; ++j)
        lam[static_cast<std::size_t>(j - 1)] =
            bounds.lambda_min + (double(j - 1) / double(N - 1)) * span * std::pow(gamma, N - j);
    std::sort(lam.begin(), lam.end());
    return DiagonalOperator(std::move(lam));
}

// Normalized all-ones starting vector.
inline Vector normalized_ones(std::size_t N) {
    return Vector(N, 1.0 / std::sqrt(double(N)));
}

// --- small dense-free vector helpers used throughout -----------------------

inline double dot(const Vector& a, const Vector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const Vector& a) { return std::sqrt(dot(a, a)); }

inline void axpy(double alpha, const Vector& x, Vector& y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline void scal(double alpha, Vector& x) {
    for (double& v : x) v *= alpha;
}

// Relative 2-norm error of approx against the oracle.
inline double rel_error2(const Vector& approx, const Vector& oracle) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < approx.size(); ++i) {
        const double d = approx[i] - oracle[i];
        num += d * d;
        den += oracle[i] * oracle[i];
    }
    return std::sqrt(num / den);
}

// Relative A-norm error against the oracle for a diagonal operator.
inline double rel_errorA(const Vector& approx, const Vector& oracle, const Vector& lambda) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < approx.size(); ++i) {
        const double d = approx[i] - oracle[i];
        num += lambda[i] * d * d;
        den += lambda[i] * oracle[i] * oracle[i];
    }
    return std::sqrt(num / den);
}

} // namespace krylov
