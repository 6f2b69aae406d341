#pragma once

#include "vguard/geometry.hpp"
#include "vguard/numerics.hpp"

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vguard {

enum class DensityKind {
    ApExact,          // hole-process equivalent density at x_R
    UeJensen,         // contour-averaged PCA density (Laplace lower bound)
    UeJensenAveraged, // the same, averaged over the receiver angle
    UeBesselBound,
    UeExpBound,
    PiecewiseLinear,
    Constant,
    Cached,           // grid-interpolated copy of another density
};

std::string_view to_string(DensityKind kind);

/// Circularly symmetric equivalent interferer density r -> lambda(r).
/// Immutable after construction; copies share the underlying evaluator.
class RadialDensity {
public:
    RadialDensity(RealFn fn, double ceiling, DensityKind kind, std::vector<double> breakpoints = {});

    double operator()(double r) const { return (*fn_)(r); }
    double ceiling() const { return ceiling_; }
    DensityKind kind() const { return kind_; }
    /// Radii where the density has a jump or kink.
    const std::vector<double>& breakpoints() const { return breakpoints_; }

private:
    std::shared_ptr<const RealFn> fn_;
    double ceiling_;
    DensityKind kind_;
    std::vector<double> breakpoints_;
};

struct DensityCacheSpec {
    int points{512};
    double r_min{1e-4};
    /// Beyond the radius where 1 - value / ceiling drops below this, the
    /// cache returns the ceiling.
    double saturation{1e-6};
    double r_max_limit{1e3};
};

/// Tabulate `density` on a geometric r-grid and interpolate with a
/// shape-preserving (Fritsch-Carlson) cubic.
RadialDensity cache_density(const RadialDensity& density, const DensityCacheSpec& spec = {});

RadialDensity constant_density(double lambda);

/// lambda_u * min(delta * r, 1).
RadialDensity piecewise_linear_density(double lambda_u, double delta);

/// Equivalent density of interfering APs seen at x_R, given x*.
RadialDensity ap_equivalent_density(const Scenario& scenario, const NetworkConfig& config);

struct UeDensityOptions {
    /// Tolerances of the contour integral over the PCA.
    QuadratureSpec contour{1e-10, 1e-13, 4000};
    /// Tolerances of the outer receiver-angle integral (averaged variant).
    QuadratureSpec angular{1e-8, 1e-11, 4000};
};

/// lambda_u * (1 - (1/2pi) int pca((r, theta) + x_R | x*) dtheta).
RadialDensity ue_equivalent_density(const Scenario& scenario, const NetworkConfig& config,
                                    const UeDensityOptions& options = {});

/// Single evaluation of the above at radius r.
double ue_density_at(double r, const Scenario& scenario, const NetworkConfig& config,
                     const QuadratureSpec& contour = UeDensityOptions{}.contour);

/// ue_equivalent_density averaged over a uniformly distributed receiver angle
/// at fixed |x_R| = norm_xr. Only |x*| is taken from `scenario`.
RadialDensity ue_density_angular_average(double norm_xr, const Scenario& scenario,
                                         const NetworkConfig& config,
                                         const UeDensityOptions& options = {});

/// lambda_u [1 - exp(-lambda_a pi (|x*|^2 + |x_R|^2 + r^2)) I0(2 lambda_a pi max(|x*|,|x_R|) r)].
RadialDensity ue_density_bessel_bound(const Scenario& scenario, const NetworkConfig& config);

/// lambda_u (1 - exp(-lambda_a pi r^2)); bound for the receiver at x*.
double ue_density_exp_bound(double r, const NetworkConfig& config);
RadialDensity ue_density_exp_bound(const NetworkConfig& config);

/// Leading small-r behaviour density(r) ~ coefficient * r^power.
struct AsymptoticLaw {
    int power;
    double coefficient;
    std::string regime;
};

enum class InterfererKind { Ap, Ue };

std::string_view to_string(InterfererKind kind);

class NoAsymptoticLaw : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Classifies the scenario and returns its small-r law; throws NoAsymptoticLaw
/// for geometries without a known expansion.
AsymptoticLaw asymptotic_law(const Scenario& scenario, const NetworkConfig& config,
                             InterfererKind kind = InterfererKind::Ue);

/// r^3 coefficient (in units of lambda_u * lambda_a) of the UE density for a
/// receiver on the open segment o -> x*.
double relay_density_coefficient(double norm_xr, double norm_xstar);

/// Receiver radius on (0, |x*|) minimising relay_density_coefficient.
double optimal_relay_radius(double norm_xstar);

/// Smallest delta with lambda_u min(delta r, 1) >= lambda_{x*,u}(r) for all r
/// and all |x*| in [0, 3 / (2 sqrt(lambda_a))] (13-point grid).
double fit_tightest_piecewise_delta(const NetworkConfig& config, int xstar_grid_points = 13);

/// Slope of the curve-fit piecewise approximation from the uplink literature.
inline double curve_fit_delta(double lambda_a) { return 0.82687 * std::sqrt(lambda_a); }

/// E(|V*| | x*) = integral of the PCA over the plane.
double average_cell_area(double norm_xstar, double lambda_a, const QuadratureSpec& spec = {1e-9, 1e-12, 4000});

}  // namespace vguard
