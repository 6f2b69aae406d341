#include "doctest.h"
#include "vguard/geometry.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

using namespace vguard;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;

struct AreaEstimate {
    double value;
    double sigma;
};

// Rejection-sampling area of B(x, |x - x*|) \ B(o, |x*|).
AreaEstimate lens_area_oracle(const Point2& x, const Point2& xs, int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const double r = distance(x, xs), a = xs.norm();
    std::uniform_real_distribution<double> u(-r, r);
    int hit = 0;
    for (int i = 0; i < n; ++i) {
        const Point2 p{x.x + u(rng), x.y + u(rng)};
        if ((p - x).norm2() < r * r && p.norm2() >= a * a) ++hit;
    }
    const double box = 4.0 * r * r, f = static_cast<double>(hit) / n;
    return {box * f, box * std::sqrt(f * (1.0 - f) / n)};
}
}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("point arithmetic") {
    const Point2 p = Point2::polar(2.0, kPi / 2.0);
    CHECK(p.x == Approx(0.0).epsilon(1e-15));
    CHECK(p.y == Approx(2.0));
    CHECK((Point2{3, 4}).norm() == 5.0);
    CHECK(Point2{-1.0, 0.0}.angle() == Approx(-kPi).epsilon(1e-15));
    CHECK((Point2{1, 0}.rotated(kPi / 2.0)).y == Approx(1.0));
}

TEST_CASE("canonical frame puts x* on the positive axis") {
    const Scenario s = Scenario::canonical({0.0, 2.0}, {1.0, 2.0});
    CHECK(s.x_star.x == Approx(2.0));
    CHECK(s.x_star.y == 0.0);
    CHECK(s.x_r.x == Approx(2.0));
    CHECK(s.x_r.y == Approx(-1.0));
    CHECK(s.norm_xr() == Approx(std::sqrt(5.0)));
    CHECK(Scenario::from_norms(1.0, 0.5).x_r == Point2{0.5, 0.0});
    CHECK_THROWS_AS(Scenario::from_norms(-1.0, 0.5), std::invalid_argument);
}

TEST_CASE("config validation names the field") {
    NetworkConfig c;
    CHECK_NOTHROW(c.validate());
    c.alpha_u = 2.0;
    CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("alpha_u"), std::invalid_argument);
    c = {};
    c.lambda_a = 0.0;
    CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("lambda_a"), std::invalid_argument);
}

TEST_CASE("lens area matches rejection sampling") {
    const Point2 xs{1.0, 0.0};
    const Point2 probes[] = {{0.8, 0.6}, {2.0, 0.0}, {-0.5, 0.3}, {0.5, -0.1}, {1.3, 1.7}, {-2.0, -1.0}};
    std::uint64_t seed = 11;
    for (const Point2& x : probes) {
        CAPTURE(x.x);
        CAPTURE(x.y);
        const auto est = lens_area_oracle(x, xs, 400000, seed++);
        CHECK(std::abs(lens_area(x, xs) - est.value) < 4.0 * est.sigma + 1e-12);
    }
}

TEST_CASE("lens area special cases") {
    CHECK(lens_area({0.3, 0.4}, {0.0, 0.0}) == Approx(kPi * 0.25));
    CHECK(lens_area({0.4, 0.0}, {1.0, 0.0}) == 0.0);
    CHECK(lens_area({1.0, 0.0}, {1.0, 0.0}) == 0.0);
    // Behind the origin the disk B(x, |x - x*|) contains B(o, |x*|) entirely.
    CHECK(lens_area({-1.0, 0.0}, {1.0, 0.0}) == Approx(kPi * 4.0 - kPi));
}

TEST_CASE("PCA properties") {
    const Scenario s = Scenario::uplink(1.0);
    CHECK(on_guard_segment({0.5, 0.0}, s.x_star));
    CHECK_FALSE(on_guard_segment({0.5, 1e-9}, s.x_star));
    CHECK(pca({0.5, 0.0}, s, 1.0) == 1.0);
    CHECK(pca({0.8, 0.6}, s, 1.0) == Approx(std::exp(-lens_area({0.8, 0.6}, s.x_star))));
    for (double x : {-2.0, -0.3, 0.7, 1.9})
        for (double y : {-1.0, 0.2, 1.5}) CHECK(pca_lower_bound({x, y}, s, 1.0) <= pca({x, y}, s, 1.0) + 1e-15);
    const Scenario o = Scenario::uplink(0.0);
    CHECK(pca_lower_bound({0.3, 0.7}, o, 2.0) == Approx(pca({0.3, 0.7}, o, 2.0)).epsilon(1e-14));
}

}
