#pragma once

#include <cmath>
#include <numbers>

namespace vguard {

/// Planar point / vector. Coordinates are in whatever distance unit the
/// caller uses; the analysis is usually done in multiples of 1/sqrt(lambda_a).
struct Point2 {
    double x{0.0};
    double y{0.0};

    constexpr Point2() = default;
    constexpr Point2(double x_, double y_) : x(x_), y(y_) {}

    static Point2 polar(double radius, double angle) {
        return {radius * std::cos(angle), radius * std::sin(angle)};
    }

    constexpr Point2 operator+(const Point2& o) const { return {x + o.x, y + o.y}; }
    constexpr Point2 operator-(const Point2& o) const { return {x - o.x, y - o.y}; }
    constexpr Point2 operator*(double s) const { return {x * s, y * s}; }
    constexpr bool operator==(const Point2&) const = default;

    constexpr double dot(const Point2& o) const { return x * o.x + y * o.y; }
    constexpr double norm2() const { return x * x + y * y; }
    double norm() const { return std::hypot(x, y); }

    /// Principal angle in [-pi, pi).
    double angle() const {
        double a = std::atan2(y, x);
        if (a >= std::numbers::pi) a -= 2.0 * std::numbers::pi;
        return a;
    }

    Point2 rotated(double angle) const {
        const double c = std::cos(angle), s = std::sin(angle);
        return {c * x - s * y, s * x + c * y};
    }
};

inline double distance(const Point2& a, const Point2& b) { return (a - b).norm(); }

/// Conditioned geometry: the typical node sits at the origin, `x_star` is its
/// nearest AP and `x_r` the receiver. Stored in the canonical frame where the
/// nearest AP lies on the non-negative x-axis; `rotation` is the angle that
/// was removed from the original coordinates.
struct Scenario {
    Point2 x_star;
    Point2 x_r;
    double rotation{0.0};

    double norm_xstar() const { return x_star.x; }
    double norm_xr() const { return x_r.norm(); }

    /// Rotate arbitrary coordinates into the canonical frame.
    static Scenario canonical(const Point2& x_star, const Point2& x_r);

    /// Nearest AP at distance `norm_xstar`, receiver at polar (norm_xr, angle_xr)
    /// relative to the o -> x* axis.
    static Scenario from_norms(double norm_xstar, double norm_xr, double angle_xr = 0.0);

    /// Receiver placed on the nearest AP.
    static Scenario uplink(double norm_xstar) { return from_norms(norm_xstar, norm_xstar); }
};

struct NetworkConfig {
    double lambda_a{1.0};
    double lambda_u{1.0};
    double p_a{1.0};
    double p_u{1.0};
    double alpha_a{4.0};
    double alpha_u{4.0};

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

/// Area of B(x, |x - x*|) minus B(o, |x*|); `x` and `x_star` must be in the
/// canonical frame (x_star on the non-negative x-axis).
double lens_area(const Point2& x, const Point2& x_star);

/// True when `x` lies on the closed segment from the origin to `x_star`
/// (canonical frame).
bool on_guard_segment(const Point2& x, const Point2& x_star);

/// Probability that `x` belongs to the Voronoi cell of the AP at x*, given that
/// x* is the AP nearest to the origin: exp(-lambda_a * lens_area).
double pca(const Point2& x, const Scenario& scenario, double lambda_a);

/// exp(-lambda_a * pi * |x - x*|^2); coincides with pca() iff x* = o.
double pca_lower_bound(const Point2& x, const Scenario& scenario, double lambda_a);

}  // namespace vguard
