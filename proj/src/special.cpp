#include "vguard/numerics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace vguard {

namespace {

// Below this argument the power series is summed directly; every term is
// positive so there is no cancellation.
constexpr double kSeriesLimit = 30.0;

double i0_series(double z) {
    const double q = 0.25 * z * z;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 500; ++k) {
        term *= q / (static_cast<double>(k) * k);
        sum += term;
        if (term < sum * 1e-17) break;
    }
    return sum;
}

// exp(-z) I0(z) ~ (2 pi z)^(-1/2) sum_k ((2k-1)!!)^2 / (k! 8^k z^k)
double i0_scaled_asymptotic(double z) {
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * z);
        if (next > term) break;  // asymptotic series starts diverging
        term = next;
        sum += term;
        if (term < sum * 1e-17) break;
    }
    return sum / std::sqrt(2.0 * std::numbers::pi * z);
}

}  // namespace

double bessel_i0(double z) {
    z = std::abs(z);
    if (z <= kSeriesLimit) return i0_series(z);
    const double scaled = i0_scaled_asymptotic(z);
    if (z > 700.0) return std::numeric_limits<double>::infinity();
    return scaled * std::exp(z);
}

double bessel_i0_scaled(double z) {
    z = std::abs(z);
    if (z <= kSeriesLimit) return std::exp(-z) * i0_series(z);
    return i0_scaled_asymptotic(z);
}

double hyp2f1_1b(double b, double z) {
    if (!(b > 0.0)) throw std::invalid_argument("hyp2f1_1b: b must be positive");
    if (z > 0.0) throw std::invalid_argument("hyp2f1_1b: z must be <= 0");
    if (z == 0.0) return 1.0;

    // With t = u^(1/b) the representation becomes int_0^1 du / (1 - z u^(1/b)),
    // whose integrand is bounded; for large |z| it drops sharply near
    // u ~ |z|^(-b), so that scale seeds the partition.
    const double x = -z;
    const double inv_b = 1.0 / b;
    auto integrand = [x, inv_b](double u) { return 1.0 / (1.0 + x * std::pow(u, inv_b)); };

    std::vector<double> cuts;
    if (x > 1.0) {
        const double knee = std::pow(x, -b);
        for (double m : {1e-3, 1e-2, 0.1, 1.0, 10.0, 100.0})
            if (knee * m < 1.0) cuts.push_back(knee * m);
    }
    QuadratureSpec spec;
    spec.rel_tol = 1e-13;
    spec.abs_tol = 1e-300;
    return integrate_finite(integrand, 0.0, 1.0, spec, cuts);
}

ScalarMinimum minimize_scalar(const RealFn& f, double lo, double hi, double tol) {
    if (!(lo < hi)) throw std::invalid_argument("minimize_scalar: require lo < hi");
    if (!(tol > 0.0)) throw std::invalid_argument("minimize_scalar: tol must be positive");
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    const double x = 0.5 * (a + b);
    return {x, f(x)};
}

bool is_unimodal(const RealFn& f, double lo, double hi, int probes, double slack) {
    if (probes < 3) return true;
    bool ascending = false;
    double prev = f(lo);
    for (int i = 1; i < probes; ++i) {
        const double x = lo + (hi - lo) * i / (probes - 1);
        const double v = f(x);
        if (v > prev + slack) ascending = true;
        else if (ascending && v < prev - slack) return false;
        prev = v;
    }
    return true;
}

}  // namespace vguard
