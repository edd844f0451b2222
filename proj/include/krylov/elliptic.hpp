// Complete elliptic integral K and Jacobi elliptic sn via AGM / descending
// Landen transformation (Abramowitz & Stegun 17.6, 16.4). Parameter
// convention: m = k^2 (the "parameter", as in A&S). Internal arithmetic uses
// long double: the Zolotarev constructions evaluate sn at parameters
// m = 1 - 1/kappa^2 extremely close to 1, where double AGM loses digits.
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace krylov {

// Complete elliptic integral of the first kind, K(m) with m = k^2.
inline double ellip_K(double m) {
    if (!(m >= 0.0 && m < 1.0)) throw std::invalid_argument("ellip_K: m in [0,1) required");
    long double a = 1.0L, b = std::sqrt(1.0L - (long double)m);
    for (int it = 0; it < 200; ++it) {
        const long double an = 0.5L * (a + b);
        const long double bn = std::sqrt(a * b);
        a = an;
        b = bn;
        if (std::fabs((double)(a - b)) < 1e-20 * (double)a) break;
    }
    return (double)(3.14159265358979323846264338L / (2.0L * a));
}

struct JacobiSnCnDn {
    double sn, cn, dn;
};

// Jacobi amplitude am(u|m) via the AGM scale and backward phi-recurrence, in
// long double: the Zolotarev constructions need tan(am) accurately even when
// the amplitude is close to pi/2.
inline long double jacobi_am(double u, double m) {
    if (!(m >= 0.0 && m < 1.0)) throw std::invalid_argument("jacobi_am: m in [0,1) required");
    if (m < 1e-14) return (long double)u;

    std::vector<long double> a_list, c_list;
    long double a = 1.0L, b = std::sqrt(1.0L - (long double)m), c = std::sqrt((long double)m);
    a_list.push_back(a);
    c_list.push_back(c);
    int n = 0;
    while (std::fabs((double)c) > 1e-20 * (double)a && n < 96) {
        const long double an = 0.5L * (a + b);
        const long double cn_ = 0.5L * (a - b);
        b = std::sqrt(a * b);
        a = an;
        c = cn_;
        a_list.push_back(a);
        c_list.push_back(c);
        ++n;
    }
    long double phi = std::ldexp((double)(a_list.back() * (long double)u), n);  // 2^n a_n u
    for (int i = n; i >= 1; --i) {
        long double t = c_list[(std::size_t)i] / a_list[(std::size_t)i] * std::sin(phi);
        if (t > 1.0L) t = 1.0L;
        if (t < -1.0L) t = -1.0L;
        phi = 0.5L * (phi + std::asin(t));
    }
    return phi;
}

inline JacobiSnCnDn jacobi_sn(double u, double m) {
    const long double phi = jacobi_am(u, m);
    JacobiSnCnDn r;
    r.sn = (double)std::sin(phi);
    r.cn = (double)std::cos(phi);
    long double d2 = 1.0L - (long double)m * std::sin(phi) * std::sin(phi);
    r.dn = (double)std::sqrt(d2 > 0.0L ? d2 : 0.0L);
    return r;
}

// tan^2(am(u|m)) = (sn/cn)^2, evaluated without the 1 - sn^2 cancellation.
inline double jacobi_tan_am_squared(double u, double m) {
    const long double t = std::tan(jacobi_am(u, m));
    return (double)(t * t);
}

} // namespace krylov
