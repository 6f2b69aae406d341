#include "doctest.h"
#include "vguard/density.hpp"

#include <cmath>
#include <numbers>

using namespace vguard;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;

// Fraction of the circle of radius r about x_R that lies outside B(o, a),
// by a fine midpoint rule over the angle.
double ap_density_oracle(double r, double a, double b, double lambda) {
    const int n = 200000;
    int outside = 0;
    for (int i = 0; i < n; ++i) {
        const double t = 2.0 * kPi * (i + 0.5) / n;
        const Point2 p = Point2{b, 0.0} + Point2::polar(r, t);
        if (p.norm2() >= a * a) ++outside;
    }
    return lambda * outside / n;
}

// Periodic trapezoid average of 1 - pca over the circle about x_R.
double ue_density_oracle(double r, const Scenario& sc, const NetworkConfig& cfg) {
    const int n = 20000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const Point2 p = sc.x_r + Point2::polar(r, 2.0 * kPi * i / n);
        sum += 1.0 - pca(p, sc, cfg.lambda_a);
    }
    return cfg.lambda_u * sum / n;
}
}  // namespace

TEST_SUITE("density") {

TEST_CASE("AP density with the receiver at the origin is a step") {
    NetworkConfig cfg;
    cfg.lambda_a = 2.0;
    const auto d = ap_equivalent_density(Scenario::from_norms(0.5, 0.0), cfg);
    CHECK(d(0.49) == 0.0);
    CHECK(d(0.5) == 2.0);
    CHECK(d(3.0) == 2.0);
    CHECK(d.kind() == DensityKind::ApExact);
}

TEST_CASE("AP density matches the angular fraction outside the hole") {
    const NetworkConfig cfg;
    for (double b : {0.25, 0.5, 1.0})
        for (double r : {0.05, 0.2, 0.3, 0.6, 0.9, 1.4, 2.0}) {
            CAPTURE(b);
            CAPTURE(r);
            const auto d = ap_equivalent_density(Scenario::from_norms(0.5, b), cfg);
            CHECK(d(r) == Approx(ap_density_oracle(r, 0.5, b, 1.0)).epsilon(1e-4));
        }
    const auto same = ap_equivalent_density(Scenario::uplink(0.5), cfg);
    CHECK(same(0.0) == Approx(0.5));
}

TEST_CASE("AP density near x_R = x* follows the half-plane law") {
    const NetworkConfig cfg;
    const auto d = ap_equivalent_density(Scenario::uplink(0.5), cfg);
    const auto law = asymptotic_law(Scenario::uplink(0.5), cfg, InterfererKind::Ap);
    CHECK(law.power == 0);
    CHECK(law.coefficient == Approx(0.5));
    for (double r : {1e-3, 1e-2}) {
        const double lin = 0.5 + r / (2.0 * kPi * 0.5);
        CHECK(std::abs(d(r) - lin) < 10.0 * r * r);
    }
}

TEST_CASE("UE density matches a periodic trapezoid oracle") {
    NetworkConfig cfg;
    cfg.lambda_u = 3.0;
    const Scenario scenarios[] = {Scenario::from_norms(0.5, 0.25), Scenario::from_norms(0.5, 0.5, 1.1),
                                  Scenario::from_norms(1.0, 0.0), Scenario::from_norms(0.3, 0.9, -2.0)};
    for (const auto& sc : scenarios)
        for (double r : {0.05, 0.4, 1.0, 2.2}) {
            CAPTURE(r);
            CHECK(ue_density_at(r, sc, cfg) == Approx(ue_density_oracle(r, sc, cfg)).epsilon(1e-6));
        }
}

TEST_CASE("UE density at x_R = x* = o equals the exponential bound") {
    const NetworkConfig cfg;
    const auto d = ue_equivalent_density(Scenario::uplink(0.0), cfg);
    const auto bessel = ue_density_bessel_bound(Scenario::uplink(0.0), cfg);
    for (double r : {1e-3, 0.1, 0.5, 1.0, 2.5}) {
        CHECK(d(r) == Approx(ue_density_exp_bound(r, cfg)).epsilon(1e-10));
        CHECK(bessel(r) == Approx(ue_density_exp_bound(r, cfg)).epsilon(1e-12));
    }
}

TEST_CASE("exponential bound dominates the UE density at x*") {
    const NetworkConfig cfg;
    for (double a : {0.25, 0.5, 1.0}) {
        const auto d = ue_equivalent_density(Scenario::uplink(a), cfg);
        for (double r : {0.01, 0.1, 0.4, 1.0, 2.0}) CHECK(d(r) <= ue_density_exp_bound(r, cfg) + 1e-12);
    }
}

TEST_CASE("cached density reproduces the direct evaluation") {
    const NetworkConfig cfg;
    const auto direct = ue_equivalent_density(Scenario::from_norms(0.5, 0.25), cfg);
    const auto cached = cache_density(direct);
    CHECK(cached.kind() == DensityKind::Cached);
    for (double r : {2e-4, 3e-3, 0.07, 0.33, 0.81, 1.7, 3.9})
        CHECK(cached(r) == Approx(direct(r)).epsilon(1e-5).scale(1e-3));
    CHECK(cached(100.0) == 1.0);
}

TEST_CASE("angular average of a radial scenario is the scenario itself") {
    const NetworkConfig cfg;
    const auto avg = ue_density_angular_average(0.5, Scenario::uplink(0.0), cfg);
    const auto direct = ue_equivalent_density(Scenario::from_norms(0.0, 0.5), cfg);
    CHECK(avg(0.7) == Approx(direct(0.7)).epsilon(1e-12));
}

TEST_CASE("piecewise-linear density") {
    const auto d = piecewise_linear_density(2.0, 1.25);
    CHECK(d(0.4) == Approx(1.0));
    CHECK(d(5.0) == 2.0);
    CHECK(d.breakpoints().front() == Approx(0.8));
    CHECK_THROWS_AS(piecewise_linear_density(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("asymptotic law classification") {
    NetworkConfig cfg;
    cfg.lambda_u = 2.0;
    auto law = asymptotic_law(Scenario::uplink(0.0), cfg);
    CHECK(law.power == 2);
    CHECK(law.coefficient == Approx(2.0 * kPi));
    law = asymptotic_law(Scenario::uplink(0.7), cfg);
    CHECK(law.power == 2);
    CHECK(law.coefficient == Approx(kPi));
    law = asymptotic_law(Scenario::from_norms(0.7, 0.0), cfg);
    CHECK(law.power == 1);
    CHECK(law.coefficient == Approx(2.0 * 8.0 / kPi * 0.7));
    law = asymptotic_law(Scenario::from_norms(1.0, 0.5), cfg);
    CHECK(law.power == 3);
    CHECK(law.coefficient == Approx(2.0 * relay_density_coefficient(0.5, 1.0)));
    CHECK_THROWS_AS(asymptotic_law(Scenario::from_norms(1.0, 0.5, 0.3), cfg), NoAsymptoticLaw);
    CHECK_THROWS_AS(asymptotic_law(Scenario::from_norms(1.0, 0.5), cfg, InterfererKind::Ap), NoAsymptoticLaw);
}

TEST_CASE("small-r laws hold numerically") {
    const NetworkConfig cfg;
    const Scenario cases[] = {Scenario::uplink(0.5), Scenario::from_norms(0.5, 0.0), Scenario::from_norms(1.0, 0.5)};
    for (const auto& sc : cases) {
        const auto law = asymptotic_law(sc, cfg);
        const double r = 1e-3;
        CHECK(ue_density_at(r, sc, cfg) / (law.coefficient * std::pow(r, law.power)) == Approx(1.0).epsilon(0.02));
    }
}

TEST_CASE("relay radius minimises the cubic coefficient") {
    // d/db [(a/b)^2 / (a - b)] = 0 at b = 2a/3.
    CHECK(optimal_relay_radius(1.0) == Approx(2.0 / 3.0).epsilon(1e-8));
    CHECK(optimal_relay_radius(3.0) == Approx(2.0).epsilon(1e-8));
    CHECK(relay_density_coefficient(2.0 / 3.0, 1.0) == Approx(6.0 / kPi).epsilon(1e-12));
    CHECK_THROWS_AS(relay_density_coefficient(1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(optimal_relay_radius(0.0), std::invalid_argument);
}

TEST_CASE("average cell area") {
    CHECK(average_cell_area(0.0, 1.0) == Approx(1.0).epsilon(1e-8));
    CHECK(average_cell_area(0.0, 4.0) == Approx(0.25).epsilon(1e-8));
    double prev = 0.0;
    for (double a : {0.0, 0.25, 0.5, 1.0, 1.5}) {
        const double v = average_cell_area(a, 1.0);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("tightest piecewise slope scales with sqrt(lambda_a)") {
    NetworkConfig cfg;
    const double d1 = fit_tightest_piecewise_delta(cfg, 4);
    cfg.lambda_a = 4.0;
    CHECK(fit_tightest_piecewise_delta(cfg, 4) == Approx(2.0 * d1).epsilon(1e-6));
    CHECK(curve_fit_delta(4.0) == Approx(2.0 * 0.82687));
}

}
