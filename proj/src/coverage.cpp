#include "vguard/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace vguard {

namespace {
constexpr double kPi = std::numbers::pi;

void check_alpha(double alpha) {
    if (!(alpha > 2.0)) throw std::invalid_argument("path-loss exponent must exceed 2");
}
}  // namespace

std::string_view to_string(Provenance p) {
    switch (p) {
        case Provenance::Analytic: return "analytic";
        case Provenance::AnalyticBound: return "analytic-bound";
        case Provenance::McPpp: return "mc-ppp";
        case Provenance::McVplp: return "mc-vplp";
    }
    return "unknown";
}

double laplace_exponent(const RadialDensity& density, double s, double power, double alpha,
                        const LaplaceSpec& spec) {
    check_alpha(alpha);
    if (s < 0.0) throw std::invalid_argument("laplace: s must be non-negative");
    if (s == 0.0 || density.ceiling() == 0.0) return 0.0;
    const double sp = s * power;
    auto integrand = [&](double r) {
        if (r == 0.0) return 0.0;
        return density(r) * r * sp / (std::pow(r, alpha) + sp);
    };
    const double lam_max = density.ceiling();
    auto tail = [=](double R) { return lam_max * sp * std::pow(R, 2.0 - alpha) / (alpha - 2.0); };

    const double r0 = std::pow(sp, 1.0 / alpha);
    std::vector<double> cuts = density.breakpoints();
    cuts.push_back(r0);
    const double scale = std::max(r0, 1e-6);
    return 2.0 * kPi * integrate_semiinfinite(integrand, 0.0, tail, spec.quadrature, scale, cuts);
}

double laplace_radial(const RadialDensity& density, double s, double power, double alpha,
                      const LaplaceSpec& spec) {
    return std::exp(-laplace_exponent(density, s, power, alpha, spec));
}

double laplace_2d_oracle_exponent(const PlanarDensity& density, double s, double power, double alpha,
                                  const Point2& x_r, const PlanarOracleSpec& spec) {
    check_alpha(alpha);
    if (s == 0.0) return 0.0;
    const double sp = s * power;
    const Point2 offset = x_r - spec.centre;
    const double d = offset.norm();
    const double peak_angle = d > 0.0 ? offset.angle() : 0.0;

    auto ring = [&](double rho) {
        if (rho == 0.0) return 0.0;
        auto f = [&](double theta) {
            const Point2 x = spec.centre + Point2::polar(rho, theta);
            const double lam = density(x);
            if (lam == 0.0) return 0.0;
            const double dist2 = (x - x_r).norm2();
            if (dist2 == 0.0) return lam;
            return lam * laplace_kernel(sp * std::pow(dist2, -0.5 * alpha));
        };
        const double cuts[] = {peak_angle};
        return rho * integrate_finite(f, peak_angle - kPi, peak_angle + kPi, spec.inner, cuts);
    };
    const double lam_max = spec.density_ceiling;
    auto tail = [=](double R) {
        if (R <= d) return std::numeric_limits<double>::infinity();
        const double u = R - d;
        return 2.0 * kPi * lam_max * sp *
               (std::pow(u, 2.0 - alpha) / (alpha - 2.0) + d * std::pow(u, 1.0 - alpha) / (alpha - 1.0));
    };
    std::vector<double> cuts = spec.radial_breakpoints;
    if (d > 0.0) cuts.push_back(d);
    const double scale = std::max({std::pow(sp, 1.0 / alpha), d, 1e-6});
    return integrate_semiinfinite(ring, 0.0, tail, spec.outer, scale, cuts);
}

double laplace_2d_oracle(const PlanarDensity& density, double s, double power, double alpha,
                         const Point2& x_r, const PlanarOracleSpec& spec) {
    return std::exp(-laplace_2d_oracle_exponent(density, s, power, alpha, x_r, spec));
}

double no_guard_constant(double alpha) {
    check_alpha(alpha);
    const double t = 2.0 * kPi / alpha;
    return t / std::sin(t);
}

double laplace_no_guard(double lambda, double s, double power, double alpha) {
    return std::exp(-lambda * kPi * no_guard_constant(alpha) * std::pow(s * power, 2.0 / alpha));
}

double laplace_piecewise_closed(double s, double delta, const NetworkConfig& config) {
    const double alpha = config.alpha_u;
    check_alpha(alpha);
    if (!(delta > 0.0)) throw std::invalid_argument("laplace_piecewise_closed: delta must be positive");
    if (s < 0.0) throw std::invalid_argument("laplace_piecewise_closed: s must be non-negative");
    if (s == 0.0) return 1.0;
    const double sp = s * config.p_u;
    const double z = -1.0 / (sp * std::pow(delta, alpha));
    auto f_tilde = [&](double x) { return hyp2f1_1b(x / alpha, z); };
    const double bracket = no_guard_constant(alpha) * std::pow(sp, 2.0 / alpha) +
                           (2.0 / 3.0 * f_tilde(3.0) - f_tilde(2.0)) / (delta * delta);
    return std::exp(-config.lambda_u * kPi * bracket);
}

std::vector<double> theta_db_grid(double min_db, double max_db, double step_db) {
    if (!(step_db > 0.0) || max_db < min_db) throw std::invalid_argument("invalid theta grid");
    std::vector<double> out;
    const int n = static_cast<int>(std::floor((max_db - min_db) / step_db + 1e-9));
    for (int i = 0; i <= n; ++i) out.push_back(min_db + step_db * i);
    return out;
}

double coverage_from_density(const RadialDensity& density, double rho, double theta, double power,
                             double alpha, const LaplaceSpec& spec) {
    if (!(rho > 0.0)) throw std::invalid_argument("coverage: link distance must be positive");
    if (!(theta >= 0.0)) throw std::invalid_argument("coverage: threshold must be non-negative");
    return laplace_radial(density, std::pow(rho, alpha) * theta / power, power, alpha, spec);
}

CoverageValue coverage_probability(const Scenario& scenario, const NetworkConfig& config,
                                   const CoverageQuery& query, const LaplaceSpec& spec) {
    config.validate();
    if (query.kind == InterfererKind::Ap) {
        const auto density = ap_equivalent_density(scenario, config);
        return {coverage_from_density(density, query.rho, query.theta, config.p_a, config.alpha_a, spec), false};
    }
    const auto density = cache_density(ue_equivalent_density(scenario, config));
    return {coverage_from_density(density, query.rho, query.theta, config.p_u, config.alpha_u, spec), true};
}

CoverageCurve coverage_curve(const RadialDensity& density, double rho, const std::vector<double>& theta_db,
                             double power, double alpha, Provenance provenance, const LaplaceSpec& spec) {
    CoverageCurve curve{{}, provenance};
    for (double db : theta_db)
        curve.points.push_back({db, coverage_from_density(density, rho, db_to_linear(db), power, alpha, spec), 0.0});
    return curve;
}

double coverage_avg_random_link(double norm_xstar, double norm_xr, const NetworkConfig& config,
                                const CoverageQuery& query, const LinkAveraging& averaging,
                                const LaplaceSpec& spec) {
    config.validate();
    const bool ap = query.kind == InterfererKind::Ap;
    const double alpha = ap ? config.alpha_a : config.alpha_u;
    const double power = ap ? config.p_a : config.p_u;

    auto link_rho = [&](double a, double psi) {
        switch (averaging.link) {
            case LinkDistance::Fixed: return query.rho;
            case LinkDistance::FromOrigin: return norm_xr;
            case LinkDistance::FromNearestAp:
                return std::sqrt(std::max(a * a + norm_xr * norm_xr - 2.0 * a * norm_xr * std::cos(psi), 0.0));
        }
        return query.rho;
    };

    auto conditioned = [&](double a) {
        const bool spread = averaging.receiver_angle && norm_xr > 0.0 && a > 0.0;
        if (ap) {
            const auto density = ap_equivalent_density(Scenario::from_norms(a, norm_xr), config);
            auto at_psi = [&](double psi) {
                const double rho = link_rho(a, psi);
                if (rho == 0.0) return 1.0;
                return coverage_from_density(density, rho, query.theta, power, alpha, spec);
            };
            if (!spread && averaging.link != LinkDistance::FromNearestAp) return at_psi(0.0);
            if (!averaging.receiver_angle) return at_psi(0.0);
            return integrate_finite(at_psi, 0.0, kPi, averaging.quadrature) / kPi;
        }
        auto at_psi = [&](double psi) {
            const double rho = link_rho(a, psi);
            if (rho == 0.0) return 1.0;
            const auto density = cache_density(ue_equivalent_density(Scenario::from_norms(a, norm_xr, psi), config));
            return coverage_from_density(density, rho, query.theta, power, alpha, spec);
        };
        if (!spread) {
            if (averaging.receiver_angle && averaging.link == LinkDistance::FromNearestAp && norm_xr > 0.0) {
                // x* = o: density is angle-free but rho still depends on psi.
                return integrate_finite(at_psi, 0.0, kPi, averaging.quadrature) / kPi;
            }
            return at_psi(0.0);
        }
        return integrate_finite(at_psi, 0.0, kPi, averaging.quadrature) / kPi;
    };

    if (!averaging.xstar_norm) return conditioned(norm_xstar);

    const double lam = config.lambda_a;
    const double a_max = std::sqrt(-std::log(1e-10) / (kPi * lam));
    auto weighted = [&](double a) { return 2.0 * kPi * lam * a * std::exp(-kPi * lam * a * a) * conditioned(a); };
    return integrate_finite(weighted, 0.0, a_max, averaging.quadrature);
}

}  // namespace vguard
