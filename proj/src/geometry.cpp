#include "vguard/geometry.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace vguard {

namespace {
constexpr double kPi = std::numbers::pi;

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw std::invalid_argument(std::string(name) + " must be a positive finite number");
}
}  // namespace

Scenario Scenario::canonical(const Point2& x_star, const Point2& x_r) {
    const double rot = x_star.norm() > 0.0 ? x_star.angle() : 0.0;
    Scenario s;
    s.rotation = rot;
    s.x_star = {x_star.norm(), 0.0};
    s.x_r = x_r.rotated(-rot);
    return s;
}

Scenario Scenario::from_norms(double norm_xstar, double norm_xr, double angle_xr) {
    if (norm_xstar < 0.0 || norm_xr < 0.0)
        throw std::invalid_argument("scenario norms must be non-negative");
    Scenario s;
    s.x_star = {norm_xstar, 0.0};
    s.x_r = Point2::polar(norm_xr, angle_xr);
    if (angle_xr == 0.0) s.x_r = {norm_xr, 0.0};
    return s;
}

void NetworkConfig::validate() const {
    require_positive(lambda_a, "lambda_a");
    if (!(lambda_u >= 0.0) || !std::isfinite(lambda_u))
        throw std::invalid_argument("lambda_u must be non-negative");
    require_positive(p_a, "p_a");
    require_positive(p_u, "p_u");
    if (!(alpha_a > 2.0)) throw std::invalid_argument("alpha_a must exceed 2");
    if (!(alpha_u > 2.0)) throw std::invalid_argument("alpha_u must exceed 2");
}

bool on_guard_segment(const Point2& x, const Point2& x_star) {
    return x.y == 0.0 && x.x >= 0.0 && x.x <= x_star.x;
}

double lens_area(const Point2& x, const Point2& x_star) {
    const double a = x_star.x;
    const double r = x.norm();
    if (a == 0.0) return kPi * r * r;
    if (on_guard_segment(x, x_star)) return 0.0;

    const double phi = std::abs(std::atan2(x.y, x.x));  // |angle x| in [0, pi]
    const double r_star = distance(x, x_star);
    if (r_star == 0.0) return 0.0;

    const double s = std::clamp(r * std::sin(phi) / r_star, -1.0, 1.0);
    const double theta_star = (r * std::cos(phi) > a) ? kPi - std::asin(s) : std::asin(s);
    const double area = r_star * r_star * (phi + theta_star) - a * a * phi + r * a * std::sin(phi);
    return std::max(area, 0.0);
}

double pca(const Point2& x, const Scenario& scenario, double lambda_a) {
    if (on_guard_segment(x, scenario.x_star)) return 1.0;
    return std::exp(-lambda_a * lens_area(x, scenario.x_star));
}

double pca_lower_bound(const Point2& x, const Scenario& scenario, double lambda_a) {
    return std::exp(-lambda_a * kPi * (x - scenario.x_star).norm2());
}

}  // namespace vguard
