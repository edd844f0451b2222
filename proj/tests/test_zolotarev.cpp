#include <doctest.h>

#include <cmath>

#include "krylov/elliptic.hpp"
#include "krylov/zolotarev.hpp"

using namespace krylov;

TEST_CASE("complete elliptic integral K") {
    CHECK(ellip_K(0.0) == doctest::Approx(M_PI / 2.0).epsilon(1e-14));
    // A&S 17.3.34 tabulated value, m = 1/2
    CHECK(ellip_K(0.5) == doctest::Approx(1.8540746773013719).epsilon(1e-13));
    CHECK_THROWS(ellip_K(1.0));
}

TEST_CASE("jacobi elliptic functions degenerate cases") {
    CHECK(jacobi_sn(0.7, 0.0).sn == doctest::Approx(std::sin(0.7)).epsilon(1e-13));
    CHECK(jacobi_sn(0.7, 0.0).cn == doctest::Approx(std::cos(0.7)).epsilon(1e-13));
    // sn(K(m)|m) = 1
    const double m = 0.3;
    CHECK(jacobi_sn(ellip_K(m), m).sn == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sign-function route uniform errors on [0.1, 200.1]") {
    const SpectralBounds bounds(0.1, 200.1);
    CHECK(zolotarev_signfun_delta(bounds, 13) == doctest::Approx(2.5249e-6).epsilon(1e-3));
    CHECK(zolotarev_signfun_delta(bounds, 14) == doctest::Approx(8.4204e-7).epsilon(1e-3));
    CHECK(zolotarev_signfun_delta(bounds, 15) == doctest::Approx(2.8082e-7).epsilon(1e-3));
}

TEST_CASE("minimal pole counts") {
    const SpectralBounds bounds(0.1, 200.1);
    CHECK(min_poles_for_tolerance(bounds, "inv_sqrt", 5e-7) == 15);
    CHECK(min_poles_for_tolerance(bounds, "inv_sqrt", 2.6e-6) == 13);
    CHECK(min_poles_for_tolerance(bounds, "inv_sqrt", 1.5) == 1);
    CHECK_THROWS(min_poles_for_tolerance(bounds, "inv_sqrt", 1e-12));
    CHECK_THROWS(min_poles_for_tolerance(bounds, "log1p_over_z", 1e-6));
}

TEST_CASE("best rational approximation of z^{-1/2}") {
    const SpectralBounds bounds(0.1, 200.1);
    const auto rat = zolotarev_inv_sqrt(bounds, 15);
    CHECK(rat.p == 15);
    CHECK(rat.delta <= 1e-11);  // true-optimal route: far below the target
    CHECK(rat.zeta.front() == doctest::Approx(-0.00301997).epsilon(1e-4));
    CHECK(rat.omega.front() == doctest::Approx(0.07066633).epsilon(1e-4));
    for (std::size_t i = 0; i < rat.zeta.size(); ++i) {
        CHECK(rat.zeta[i] < 0.0);
        if (i > 0) CHECK(std::abs(rat.zeta[i]) > std::abs(rat.zeta[i - 1]));
    }
    // dense relative-error scan stays at the equioscillation level
    double worst = 0.0;
    for (int g = 0; g <= 2000; ++g) {
        const double z = bounds.lambda_min *
                         std::pow(bounds.kappa(), static_cast<double>(g) / 2000.0);
        worst = std::max(worst, std::abs(rat.eval(z) * std::sqrt(z) - 1.0));
    }
    CHECK(worst <= 1.1 * rat.delta + 1e-12);
}
