// Common result/report types shared by all method runners.
#pragma once

#include <string>
#include <vector>

namespace krylov {

// Per-run record: iteration counts, matrix-vector products, vector-operation
// work and achieved error (filled when an oracle is available).
struct MethodReport {
    std::string method;          // tag: two_pass | mscg | restarted | si | eksm
    int outer_iterations = 0;    // Lanczos steps / CG iterations / cycles / outer steps
    long matvecs = 0;            // total matrix-vector products with A
    double vector_ops = 0.0;     // length-N vector operations (units of V)
    double achieved_error = -1.0;    // relative 2-norm error vs oracle (-1 if unknown)
    double achieved_error_A = -1.0;  // relative A-norm error vs oracle (-1 if unknown)
    bool converged = false;
    std::vector<int> inner_iterations;       // per outer step (SI/EKSM)
    std::vector<double> inner_residuals;     // inner residual norms (SI/EKSM)
    std::vector<double> error_history;       // relative error per iteration/cycle (oracle runs)
    std::vector<double> em_bound_history;    // running ||E_m|| bound (inexact methods)
};

// A-priori prediction record (see predict.hpp).
struct Prediction {
    std::string method;
    double alpha = 0.0;          // asymptotic convergence factor
    double C = 0.0;              // prefactor estimate
    int m_star = 0;              // outer iterations
    std::vector<int> inner_counts;  // per-outer inner iteration counts (SI/EKSM)
    long total_matvecs = 0;
    double work_units = 0.0;     // in units of V for a given matvec cost M
};

} // namespace krylov
