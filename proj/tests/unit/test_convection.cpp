#include "moldmpc/plant/convection.hpp"

#include <doctest.h>

#include <cmath>
#include <initializer_list>

using namespace moldmpc;

TEST_CASE("upper face power law at 100 K")
{
    // 4.120 * (100 - 23.567)^0.317
    CHECK(convection_h(upper_face_fit(), 100.0) == doctest::Approx(16.29).epsilon(5e-4));
}

TEST_CASE("lateral saturating exponential at 100 K")
{
    // 20.160 * (0.395 - exp(-4.1))
    CHECK(convection_h(lateral_face_fit(), 100.0) == doctest::Approx(7.63).epsilon(5e-4));
}

TEST_CASE("power law vanishes at its root")
{
    const auto fit = upper_face_fit();
    CHECK(convection_h(fit, fit.b) == 0.0);
    // Below the root the law would need a negative base; the floor holds it at zero.
    CHECK(convection_h(fit, 10.0) == 0.0);
    CHECK(convection_h(fit, fit.dT_min) == 0.0);
}

TEST_CASE("clamping holds the boundary value outside the band")
{
    for (const auto& fit : {upper_face_fit(), lower_face_fit(), lateral_face_fit()})
    {
        CHECK(convection_h(fit, 500.0) == convection_h(fit, fit.dT_max));
        CHECK(convection_h(fit, -40.0) == convection_h(fit, fit.dT_min));
        // continuity across the clamp boundaries
        CHECK(std::abs(convection_h(fit, fit.dT_max + 1e-9) - convection_h(fit, fit.dT_max - 1e-9)) < 1e-6);
        CHECK(std::abs(convection_h(fit, fit.dT_min + 1e-9) - convection_h(fit, fit.dT_min - 1e-9)) < 1e-6);
    }
}

TEST_CASE("coefficients are finite and non-negative on a sweep")
{
    for (const auto& fit : {upper_face_fit(), lower_face_fit(), lateral_face_fit()})
        for (double dT = -50.0; dT <= 300.0; dT += 0.25)
        {
            const double h = convection_h(fit, dT);
            REQUIRE(std::isfinite(h));
            REQUIRE(h >= 0.0);
        }
}

TEST_CASE("lateral fit is negative below its root before flooring")
{
    const auto fit = lateral_face_fit();
    const double root = -std::log(fit.b) / fit.c; // ~22.66 K
    CHECK(root == doctest::Approx(22.66).epsilon(1e-3));
    CHECK(convection_h(fit, root - 1.0) == 0.0);
    CHECK(convection_h(fit, root + 1.0) > 0.0);
}
