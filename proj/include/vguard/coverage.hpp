#pragma once

#include "vguard/density.hpp"
#include "vguard/geometry.hpp"
#include "vguard/numerics.hpp"

#include <functional>
#include <string_view>
#include <vector>

namespace vguard {

/// gamma(t) = 1 - 1 / (1 + t), the Rayleigh-fading Laplace kernel.
inline double laplace_kernel(double t) { return t / (1.0 + t); }

struct LaplaceSpec {
    QuadratureSpec quadrature{1e-10, 1e-13, 4000};
};

/// 2 pi int_0^inf lambda(r) r gamma(s P r^-alpha) dr, i.e. -log of the Laplace transform.
double laplace_exponent(const RadialDensity& density, double s, double power, double alpha,
                        const LaplaceSpec& spec = {});

/// exp(-laplace_exponent(...)).
double laplace_radial(const RadialDensity& density, double s, double power, double alpha,
                      const LaplaceSpec& spec = {});

using PlanarDensity = std::function<double(const Point2&)>;

struct PlanarOracleSpec {
    /// Polar coordinates of the brute-force integral are centred here.
    Point2 centre{0.0, 0.0};
    /// Upper bound on the planar density (for the tail bound).
    double density_ceiling{1.0};
    /// Radii (about `centre`) where the density jumps.
    std::vector<double> radial_breakpoints{};
    QuadratureSpec outer{1e-10, 1e-13, 4000};
    QuadratureSpec inner{1e-11, 1e-14, 8000};
};

/// Test oracle: -log Laplace transform by direct planar quadrature of
/// int lambda(x) gamma(s P |x - x_R|^-alpha) dx.
double laplace_2d_oracle_exponent(const PlanarDensity& density, double s, double power, double alpha,
                                  const Point2& x_r, const PlanarOracleSpec& spec);

double laplace_2d_oracle(const PlanarDensity& density, double s, double power, double alpha,
                         const Point2& x_r, const PlanarOracleSpec& spec);

/// C = (2 pi / alpha) / sin(2 pi / alpha).
double no_guard_constant(double alpha);

/// Laplace transform for a homogeneous interferer field of density lambda.
double laplace_no_guard(double lambda, double s, double power, double alpha);

/// Closed-form Laplace lower bound for the piecewise-linear UE density
/// lambda_u min(delta r, 1) seen at x*.
double laplace_piecewise_closed(double s, double delta, const NetworkConfig& config);

struct CoverageQuery {
    double rho;    // link distance
    double theta;  // SIR threshold, linear
    InterfererKind kind;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double v) { return 10.0 * std::log10(v); }

/// Threshold grid theta_dB = min, min+step, ..., max (inclusive).
std::vector<double> theta_db_grid(double min_db = -10.0, double max_db = 20.0, double step_db = 1.0);

enum class Provenance { Analytic, AnalyticBound, McPpp, McVplp };

std::string_view to_string(Provenance p);

struct CoveragePoint {
    double theta_db;
    double coverage;
    double std_error{0.0};
};

struct CoverageCurve {
    std::vector<CoveragePoint> points;
    Provenance provenance;
};

struct CoverageValue {
    double value;
    /// False for AP interference (exact); true for UE interference, where the
    /// equivalent density only yields a lower bound.
    bool lower_bound;
};

/// P(SIR > theta) for the given link. The signal and interferers share the
/// tier's transmit power, so the Laplace transform is evaluated at
/// s = rho^alpha theta / P.
CoverageValue coverage_probability(const Scenario& scenario, const NetworkConfig& config,
                                   const CoverageQuery& query, const LaplaceSpec& spec = {});

/// Coverage from an explicitly supplied equivalent density.
double coverage_from_density(const RadialDensity& density, double rho, double theta, double power,
                             double alpha, const LaplaceSpec& spec = {});

CoverageCurve coverage_curve(const RadialDensity& density, double rho, const std::vector<double>& theta_db,
                             double power, double alpha, Provenance provenance, const LaplaceSpec& spec = {});

/// How the transmitter-receiver distance follows from the geometry.
enum class LinkDistance {
    Fixed,          // query.rho as given
    FromOrigin,     // transmitter at o: rho = |x_R|
    FromNearestAp,  // transmitter at x*: rho = |x* - x_R|
};

struct LinkAveraging {
    /// Average over a uniform receiver angle (psi) at fixed |x_R|.
    bool receiver_angle{true};
    /// Average over the Rayleigh law of |x*| (mean 1 / (2 sqrt(lambda_a))).
    bool xstar_norm{false};
    LinkDistance link{LinkDistance::FromNearestAp};
    QuadratureSpec quadrature{1e-7, 1e-10, 2000};
};

/// Expected coverage over the declared randomness of the link geometry.
/// `norm_xr` is |x_R|; `norm_xstar` is used when |x*| is not averaged.
double coverage_avg_random_link(double norm_xstar, double norm_xr, const NetworkConfig& config,
                                const CoverageQuery& query, const LinkAveraging& averaging,
                                const LaplaceSpec& spec = {});

}  // namespace vguard
