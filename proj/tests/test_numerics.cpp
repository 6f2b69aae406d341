#include "doctest.h"
#include "vguard/numerics.hpp"

#include <cmath>
#include <numbers>

using namespace vguard;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;

// 2F1(1, b; 1+b; z) = (1 - z)^-1 2F1(1, 1; 1+b; w), w = z / (z - 1) in [0, 1),
// summed as a plain power series: sum_n n! / (1+b)_n w^n.
double hyp2f1_pfaff_series(double b, double z) {
    const double w = z / (z - 1.0);
    double term = 1.0, sum = 1.0;
    for (int n = 1; n < 200000; ++n) {
        term *= w * n / (b + n);
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return sum / (1.0 - z);
}
}  // namespace

TEST_SUITE("numerics") {

TEST_CASE("finite quadrature of smooth and singular integrands") {
    CHECK(integrate_finite([](double x) { return std::sin(x); }, 0.0, kPi) == Approx(2.0).epsilon(1e-12));
    CHECK(integrate_finite([](double x) { return std::sqrt(x); }, 0.0, 1.0) == Approx(2.0 / 3.0).epsilon(1e-10));
    const double cut[] = {0.3};
    CHECK(integrate_finite([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0, {}, cut) ==
          Approx(0.045 + 0.245).epsilon(1e-13));
    CHECK(integrate_finite([](double x) { return x; }, 1.0, 1.0) == 0.0);
}

TEST_CASE("reversed limits are rejected") {
    CHECK_THROWS_AS(integrate_finite([](double x) { return x; }, 2.0, 0.0), std::invalid_argument);
}

TEST_CASE("semi-infinite quadrature with a tail bound") {
    const double e = integrate_semiinfinite([](double x) { return std::exp(-x); }, 0.0,
                                            [](double R) { return std::exp(-R); });
    CHECK(e == Approx(1.0).epsilon(1e-9));
    const double at = integrate_semiinfinite([](double x) { return 1.0 / (1.0 + x * x); }, 0.0,
                                             [](double R) { return 1.0 / R; }, {1e-9, 1e-12, 4000});
    CHECK(at == Approx(kPi / 2.0).epsilon(1e-8));
}

TEST_CASE("subdivision budget exhaustion throws with a best estimate") {
    QuadratureSpec tight{1e-15, 1e-300, 3};
    bool thrown = false;
    try {
        integrate_finite([](double x) { return std::sin(200.0 * x); }, 0.0, 10.0, tight);
    } catch (const QuadratureError& e) {
        thrown = true;
        CHECK(std::isfinite(e.best_estimate));
    }
    CHECK(thrown);
}

TEST_CASE("I0 against the standard library") {
    CHECK(bessel_i0(0.0) == 1.0);
    for (double z : {1e-3, 0.5, 1.0, 5.0, 12.0, 29.9, 30.1, 45.0, 100.0, 300.0}) {
        CAPTURE(z);
        CHECK(bessel_i0(z) == Approx(std::cyl_bessel_i(0.0, z)).epsilon(1e-13));
        CHECK(bessel_i0_scaled(z) == Approx(std::exp(-z) * std::cyl_bessel_i(0.0, z)).epsilon(1e-13));
    }
    CHECK(bessel_i0(-2.0) == bessel_i0(2.0));
    CHECK(std::isinf(bessel_i0(1000.0)));
    CHECK(bessel_i0_scaled(1e4) == Approx(1.0 / std::sqrt(2.0 * kPi * 1e4)).epsilon(1e-4));
}

TEST_CASE("2F1(1, b; 1+b; z)") {
    CHECK(hyp2f1_1b(0.5, 0.0) == 1.0);
    // 2F1(1, 1/2; 3/2; -x^2) = arctan(x) / x
    CHECK(hyp2f1_1b(0.5, -1.0) == Approx(kPi / 4.0).epsilon(1e-13));
    for (double x : {0.1, 2.0, 30.0, 1e3})
        CHECK(hyp2f1_1b(0.5, -x * x) == Approx(std::atan(x) / x).epsilon(1e-12));
    for (double b : {0.25, 0.5, 0.75, 1.5})
        for (double z : {-0.3, -1.0, -7.0, -40.0}) {
            CAPTURE(b);
            CAPTURE(z);
            CHECK(hyp2f1_1b(b, z) == Approx(hyp2f1_pfaff_series(b, z)).epsilon(1e-11));
        }
    CHECK_THROWS_AS(hyp2f1_1b(0.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(hyp2f1_1b(0.5, 0.5), std::invalid_argument);
}

TEST_CASE("golden-section minimisation") {
    const auto m = minimize_scalar([](double x) { return (x - 0.3) * (x - 0.3) + 2.0; }, 0.0, 1.0, 1e-12);
    // A quadratic minimum is only resolvable to ~sqrt(machine epsilon).
    CHECK(m.argmin == Approx(0.3).epsilon(1e-7));
    CHECK(m.min == Approx(2.0));
    CHECK_THROWS_AS(minimize_scalar([](double x) { return x; }, 1.0, 1.0), std::invalid_argument);
    // (1/x^2)/(1-x) has its minimum where d/dx vanishes: x = 2/3.
    const auto relay = minimize_scalar([](double x) { return 1.0 / (x * x * (1.0 - x)); }, 1e-6, 1.0 - 1e-6, 1e-12);
    CHECK(relay.argmin == Approx(2.0 / 3.0).epsilon(1e-8));
    CHECK(relay.min == Approx(27.0 / 4.0).epsilon(1e-12));
}

TEST_CASE("unimodality probe") {
    CHECK(is_unimodal([](double x) { return (x - 1.0) * (x - 1.0); }, 0.0, 3.0));
    CHECK_FALSE(is_unimodal([](double x) { return std::sin(x); }, 0.0, 4.0 * kPi));
}

}
