#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>

namespace vguard {

using RealFn = std::function<double(double)>;

struct QuadratureSpec {
    double rel_tol{1e-8};
    double abs_tol{1e-12};
    int max_subdivisions{4000};
};

/// Raised when an integral cannot be certified to the requested tolerance.
/// Carries the best estimate reached so callers may still report it.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double best, double err)
        : std::runtime_error(what), best_estimate(best), error_estimate(err) {}
    double best_estimate;
    double error_estimate;
};

/// Globally adaptive Gauss-Kronrod (G10/K21) integral of f over [a, b].
/// Interior `breakpoints` (kinks, jumps) seed the initial partition.
double integrate_finite(const RealFn& f, double a, double b, const QuadratureSpec& spec = {},
                        std::span<const double> breakpoints = {});

/// Upper bound on the tail integral of |f| over [R, inf).
using TailBound = std::function<double(double)>;

/// Integral of f over [a, inf). The range is covered by geometrically growing
/// panels until `tail_bound(R)` certifies the remainder is below tolerance;
/// `scale` sets the first panel width.
double integrate_semiinfinite(const RealFn& f, double a, const TailBound& tail_bound,
                              const QuadratureSpec& spec = {}, double scale = 1.0,
                              std::span<const double> breakpoints = {});

/// Modified Bessel function of the first kind, order zero.
double bessel_i0(double z);

/// exp(-z) * I0(z); finite for all z >= 0.
double bessel_i0_scaled(double z);

/// 2F1(1, b; 1 + b; z) for b > 0 and z <= 0, from the integral
/// representation b * int_0^1 t^(b-1) / (1 - z t) dt.
double hyp2f1_1b(double b, double z);

struct ScalarMinimum {
    double argmin;
    double min;
};

/// Golden-section search on [lo, hi]. Throws std::invalid_argument if lo >= hi.
ScalarMinimum minimize_scalar(const RealFn& f, double lo, double hi, double tol = 1e-10);

/// Checks that f sampled at `probes` points on [lo, hi] is unimodal (one
/// descent followed by one ascent, up to `slack`).
bool is_unimodal(const RealFn& f, double lo, double hi, int probes = 64, double slack = 1e-13);

}  // namespace vguard
