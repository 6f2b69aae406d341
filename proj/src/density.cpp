#include "vguard/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace vguard {

namespace {

constexpr double kPi = std::numbers::pi;

bool nearly_equal(double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

// 1 - pca(x), computed without cancellation for points close to the segment.
double pca_complement(const Point2& x, const Scenario& scenario, double lambda_a) {
    if (on_guard_segment(x, scenario.x_star)) return 0.0;
    return -std::expm1(-lambda_a * lens_area(x, scenario.x_star));
}

// Fritsch-Carlson monotone cubic on a fixed grid.
class PchipTable {
public:
    PchipTable(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
        const std::size_t n = x_.size();
        d_.assign(n, 0.0);
        if (n < 2) return;
        std::vector<double> h(n - 1), delta(n - 1);
        for (std::size_t k = 0; k + 1 < n; ++k) {
            h[k] = x_[k + 1] - x_[k];
            delta[k] = (y_[k + 1] - y_[k]) / h[k];
        }
        if (n == 2) {
            d_[0] = d_[1] = delta[0];
            return;
        }
        for (std::size_t k = 1; k + 1 < n; ++k) {
            if (delta[k - 1] * delta[k] <= 0.0) {
                d_[k] = 0.0;
            } else {
                const double w1 = 2.0 * h[k] + h[k - 1];
                const double w2 = h[k] + 2.0 * h[k - 1];
                d_[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
            }
        }
        d_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
        d_[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    }

    double operator()(double r) const {
        auto it = std::upper_bound(x_.begin(), x_.end(), r);
        std::size_t k = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
        k = std::min(k, x_.size() - 2);
        const double h = x_[k + 1] - x_[k];
        const double t = (r - x_[k]) / h;
        const double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * y_[k] + (t3 - 2 * t2 + t) * h * d_[k] +
               (-2 * t3 + 3 * t2) * y_[k + 1] + (t3 - t2) * h * d_[k + 1];
    }

private:
    static double end_slope(double h0, double h1, double m0, double m1) {
        double d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
        if (d * m0 <= 0.0) return 0.0;
        if (m0 * m1 <= 0.0 && std::abs(d) > std::abs(3.0 * m0)) return 3.0 * m0;
        return d;
    }

    std::vector<double> x_, y_, d_;
};

std::vector<double> axis_crossing_angles(const Point2& centre, double r) {
    // Angles theta with centre.y + r sin(theta) = 0.
    std::vector<double> out{0.0};
    const double s = -centre.y / r;
    if (std::abs(s) <= 1.0) {
        const double t1 = std::asin(s);
        double t2 = kPi - t1;
        if (t2 >= kPi) t2 -= 2.0 * kPi;
        out.push_back(t1);
        out.push_back(t2);
    }
    return out;
}

}  // namespace

std::string_view to_string(DensityKind kind) {
    switch (kind) {
        case DensityKind::ApExact: return "ap-exact";
        case DensityKind::UeJensen: return "ue-jensen";
        case DensityKind::UeJensenAveraged: return "ue-jensen-averaged";
        case DensityKind::UeBesselBound: return "ue-bessel-bound";
        case DensityKind::UeExpBound: return "ue-exp-bound";
        case DensityKind::PiecewiseLinear: return "piecewise-linear";
        case DensityKind::Constant: return "constant";
        case DensityKind::Cached: return "cached";
    }
    return "unknown";
}

std::string_view to_string(InterfererKind kind) {
    return kind == InterfererKind::Ap ? "ap" : "ue";
}

RadialDensity::RadialDensity(RealFn fn, double ceiling, DensityKind kind, std::vector<double> breakpoints)
    : fn_(std::make_shared<const RealFn>(std::move(fn))),
      ceiling_(ceiling),
      kind_(kind),
      breakpoints_(std::move(breakpoints)) {
    std::sort(breakpoints_.begin(), breakpoints_.end());
}

RadialDensity cache_density(const RadialDensity& density, const DensityCacheSpec& spec) {
    const double ceiling = density.ceiling();
    if (ceiling <= 0.0) return constant_density(0.0);
    if (spec.points < 4) throw std::invalid_argument("cache_density: need at least 4 grid points");

    double r_end = 1.0;
    while (1.0 - density(r_end) / ceiling > spec.saturation && r_end < spec.r_max_limit) r_end *= 1.5;

    std::vector<double> xs{0.0}, ys{density(0.0)};
    const int n = spec.points - 1;
    const double ratio = std::pow(r_end / spec.r_min, 1.0 / (n - 1));
    double r = spec.r_min;
    for (int i = 0; i < n; ++i, r *= ratio) {
        const double ri = (i == n - 1) ? r_end : r;
        xs.push_back(ri);
        ys.push_back(density(ri));
    }
    auto table = std::make_shared<const PchipTable>(std::move(xs), std::move(ys));
    auto fn = [table, r_end, ceiling](double radius) {
        if (radius >= r_end) return ceiling;
        return std::clamp((*table)(radius), 0.0, ceiling);
    };
    return RadialDensity(fn, ceiling, DensityKind::Cached, density.breakpoints());
}

RadialDensity constant_density(double lambda) {
    return RadialDensity([lambda](double) { return lambda; }, lambda, DensityKind::Constant);
}

RadialDensity piecewise_linear_density(double lambda_u, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("piecewise_linear_density: delta must be positive");
    return RadialDensity([lambda_u, delta](double r) { return lambda_u * std::min(delta * r, 1.0); },
                         lambda_u, DensityKind::PiecewiseLinear, {1.0 / delta});
}

RadialDensity ap_equivalent_density(const Scenario& scenario, const NetworkConfig& config) {
    const double a = scenario.norm_xstar();
    const double b = scenario.norm_xr();
    const double lam = config.lambda_a;

    if (b == 0.0) {
        return RadialDensity([a, lam](double r) { return r >= a ? lam : 0.0; }, lam, DensityKind::ApExact, {a});
    }
    auto fn = [a, b, lam](double r) {
        if (r > a + b) return lam;
        if (r <= std::abs(a - b) && a != b) return a > b ? 0.0 : lam;
        if (r == 0.0) return 0.5 * lam;  // a == b limit of the arccos branch
        const double d = std::clamp((r * r - (a * a - b * b)) / (2.0 * r * b), -1.0, 1.0);
        return lam * (1.0 - std::acos(d) / kPi);
    };
    return RadialDensity(fn, lam, DensityKind::ApExact, {std::abs(a - b), a + b});
}

double ue_density_at(double r, const Scenario& scenario, const NetworkConfig& config,
                     const QuadratureSpec& contour) {
    const double lam_a = config.lambda_a;
    const Point2 xr = scenario.x_r;
    if (r <= 0.0) return config.lambda_u * pca_complement(xr, scenario, lam_a);

    auto integrand = [&](double theta) {
        return pca_complement(xr + Point2::polar(r, theta), scenario, lam_a);
    };
    double avg;
    if (xr.y == 0.0) {
        // Mirror symmetry about the o -> x* axis.
        avg = integrate_finite(integrand, 0.0, kPi, contour) / kPi;
    } else {
        const auto cuts = axis_crossing_angles(xr, r);
        avg = integrate_finite(integrand, -kPi, kPi, contour, cuts) / (2.0 * kPi);
    }
    return config.lambda_u * std::clamp(avg, 0.0, 1.0);
}

RadialDensity ue_equivalent_density(const Scenario& scenario, const NetworkConfig& config,
                                    const UeDensityOptions& options) {
    if (!(config.lambda_a > 0.0)) throw std::invalid_argument("ue_equivalent_density: lambda_a must be positive");
    auto fn = [scenario, config, spec = options.contour](double r) {
        return ue_density_at(r, scenario, config, spec);
    };
    return RadialDensity(fn, config.lambda_u, DensityKind::UeJensen);
}

RadialDensity ue_density_angular_average(double norm_xr, const Scenario& scenario,
                                         const NetworkConfig& config, const UeDensityOptions& options) {
    if (norm_xr < 0.0) throw std::invalid_argument("ue_density_angular_average: norm_xr must be >= 0");
    const double a = scenario.norm_xstar();
    if (norm_xr == 0.0 || a == 0.0) {
        auto inner = ue_equivalent_density(Scenario::from_norms(a, norm_xr), config, options);
        return RadialDensity([inner](double r) { return inner(r); }, config.lambda_u,
                             DensityKind::UeJensenAveraged);
    }
    auto fn = [a, norm_xr, config, options](double r) {
        auto at_angle = [&](double psi) {
            return ue_density_at(r, Scenario::from_norms(a, norm_xr, psi), config, options.contour);
        };
        return integrate_finite(at_angle, 0.0, kPi, options.angular) / kPi;
    };
    return RadialDensity(fn, config.lambda_u, DensityKind::UeJensenAveraged);
}

RadialDensity ue_density_bessel_bound(const Scenario& scenario, const NetworkConfig& config) {
    const double a = scenario.norm_xstar(), b = scenario.norm_xr();
    const double lam_a = config.lambda_a, lam_u = config.lambda_u;
    const double xbar = std::max(a, b);
    auto fn = [=](double r) {
        const double z = 2.0 * lam_a * kPi * xbar * r;
        // exp(-c) I0(z) = exp(z - c) * (exp(-z) I0(z)), with z <= c always.
        const double c = lam_a * kPi * (a * a + b * b + r * r);
        return lam_u * (1.0 - std::exp(z - c) * bessel_i0_scaled(z));
    };
    return RadialDensity(fn, lam_u, DensityKind::UeBesselBound);
}

double ue_density_exp_bound(double r, const NetworkConfig& config) {
    return -config.lambda_u * std::expm1(-config.lambda_a * kPi * r * r);
}

RadialDensity ue_density_exp_bound(const NetworkConfig& config) {
    return RadialDensity([config](double r) { return ue_density_exp_bound(r, config); }, config.lambda_u,
                         DensityKind::UeExpBound);
}

double relay_density_coefficient(double norm_xr, double norm_xstar) {
    if (!(norm_xr > 0.0 && norm_xr < norm_xstar))
        throw std::invalid_argument("relay_density_coefficient: need 0 < |x_R| < |x*|");
    const double ratio = norm_xstar / norm_xr;
    return 8.0 / (9.0 * kPi) * ratio * ratio / (norm_xstar - norm_xr);
}

AsymptoticLaw asymptotic_law(const Scenario& scenario, const NetworkConfig& config, InterfererKind kind) {
    const double a = scenario.norm_xstar();
    const Point2 xr = scenario.x_r;
    const bool at_xstar = nearly_equal(xr.x, a) && nearly_equal(xr.y, 0.0);
    const bool at_origin = xr.norm() <= 1e-12 * std::max(1.0, a);
    const double lu_la = config.lambda_u * config.lambda_a;

    if (kind == InterfererKind::Ap) {
        if (at_xstar && a > 0.0) return {0, config.lambda_a / 2.0, "AP interference at x_R = x* != o"};
        throw NoAsymptoticLaw("no published small-r law for AP interference in this geometry");
    }
    if (at_xstar) {
        const double b = a == 0.0 ? 1.0 : 0.5;
        return {2, lu_la * b * kPi, a == 0.0 ? "x_R = x* = o" : "x_R = x* != o"};
    }
    if (at_origin && a > 0.0) return {1, lu_la * 8.0 / kPi * a, "x_R = o, x* != o"};
    if (a > 0.0 && xr.y == 0.0 && xr.x > 0.0 && xr.x < a)
        return {3, lu_la * relay_density_coefficient(xr.x, a), "0 < |x_R| < |x*|, angle x_R = 0"};
    throw NoAsymptoticLaw("no published small-r law for UE interference in this geometry");
}

double optimal_relay_radius(double norm_xstar) {
    if (!(norm_xstar > 0.0)) throw std::invalid_argument("optimal_relay_radius: |x*| must be positive");
    auto coeff = [norm_xstar](double b) { return relay_density_coefficient(b, norm_xstar); };
    const double eps = 1e-6 * norm_xstar;
    const double lo = eps, hi = norm_xstar - eps;
    if (!is_unimodal(coeff, lo, hi, 200))
        throw std::runtime_error("optimal_relay_radius: coefficient is not unimodal");
    return minimize_scalar(coeff, lo, hi, 1e-12 * norm_xstar).argmin;
}

double fit_tightest_piecewise_delta(const NetworkConfig& config, int xstar_grid_points) {
    if (!(config.lambda_a > 0.0)) throw std::invalid_argument("fit_tightest_piecewise_delta: lambda_a must be positive");
    if (xstar_grid_points < 1) throw std::invalid_argument("fit_tightest_piecewise_delta: empty |x*| grid");
    NetworkConfig unit = config;
    unit.lambda_u = 1.0;
    const double scale = 1.0 / std::sqrt(config.lambda_a);
    const double xstar_max = 1.5 * scale;
    const double r_max = 3.0 * scale;

    double best = 0.0;
    for (int k = 0; k < xstar_grid_points; ++k) {
        const double a = xstar_grid_points == 1 ? 0.0 : xstar_max * k / (xstar_grid_points - 1);
        const Scenario sc = Scenario::uplink(a);
        auto neg_slope = [&](double r) { return -ue_density_at(r, sc, unit) / r; };

        constexpr int kScan = 60;
        int best_i = 1;
        double best_v = neg_slope(r_max / kScan);
        for (int i = 2; i <= kScan; ++i) {
            const double v = neg_slope(r_max * i / kScan);
            if (v < best_v) best_v = v, best_i = i;
        }
        const double lo = r_max * std::max(best_i - 1, 0) / kScan + 1e-9 * scale;
        const double hi = r_max * std::min(best_i + 1, kScan) / kScan;
        const auto m = minimize_scalar(neg_slope, lo, hi, 1e-10 * scale);
        best = std::max(best, -m.min);
    }
    return best;
}

double average_cell_area(double norm_xstar, double lambda_a, const QuadratureSpec& spec) {
    if (norm_xstar < 0.0) throw std::invalid_argument("average_cell_area: |x*| must be >= 0");
    if (!(lambda_a > 0.0)) throw std::invalid_argument("average_cell_area: lambda_a must be positive");
    const Scenario sc = Scenario::uplink(norm_xstar);
    const double a = norm_xstar;

    QuadratureSpec inner = spec;
    inner.rel_tol = std::min(spec.rel_tol, 1e-10);
    auto ring = [&](double rho) {
        if (rho == 0.0) return 0.0;
        auto f = [&](double theta) { return pca(sc.x_star + Point2::polar(rho, theta), sc, lambda_a); };
        return rho * 2.0 * integrate_finite(f, 0.0, kPi, inner);
    };
    auto tail = [a, lambda_a](double R) {
        return std::exp(-lambda_a * kPi * (R * R - a * a)) / lambda_a;
    };
    const double scale = 1.0 / std::sqrt(lambda_a);
    std::vector<double> cuts;
    if (a > 0.0) cuts.push_back(a);
    return integrate_semiinfinite(ring, 0.0, tail, spec, scale, cuts);
}

}  // namespace vguard
