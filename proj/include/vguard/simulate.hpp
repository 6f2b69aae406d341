#pragma once

#include "vguard/coverage.hpp"
#include "vguard/density.hpp"
#include "vguard/geometry.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace vguard {

using Rng = std::mt19937_64;

/// Disk-shaped simulation window.
struct SimWindow {
    Point2 centre{};
    double radius{1.0};

    double area() const { return std::numbers::pi * radius * radius; }
    bool contains(const Point2& p) const { return (p - centre).norm2() <= radius * radius; }

    /// Disk about o of radius factor / sqrt(lambda_a) + max(|x*|, |x_R|).
    static SimWindow around(const Scenario& scenario, double lambda_a, double factor = 30.0);
};

/// Per-trial engines are derived from (master seed, trial index) only, so any
/// subset of trials can be replayed or run concurrently.
struct TrialPlan {
    std::uint64_t master_seed{1};
    std::size_t trials{1000};

    std::uint64_t trial_seed(std::size_t index) const;
    Rng engine(std::size_t index) const;
};

enum class ProcessTag { Hppp, ApConditioned, UeThinned, Vplp };

struct PointPattern {
    std::vector<Point2> points;
    SimWindow window;
    ProcessTag tag{ProcessTag::Hppp};
    /// The conditioned nearest AP x*. It is part of the AP pattern but never
    /// interferes, so it is kept out of `points`.
    std::optional<Point2> serving;
};

struct EstimateWithError {
    double mean{0.0};
    double std_error{0.0};
    std::size_t trials{0};
};

/// Mean and standard error of `successes` Bernoulli outcomes in `trials`.
EstimateWithError bernoulli_estimate(std::uint64_t successes, std::size_t trials);

PointPattern sample_hppp(double lambda, const SimWindow& window, Rng& rng);
PointPattern sample_hppp(double lambda, const SimWindow& window, std::uint64_t seed);

/// HPPP of density lambda_a on the window minus B(o, norm_xstar), plus the
/// serving AP at (norm_xstar, 0).
PointPattern sample_conditioned_aps(double norm_xstar, const NetworkConfig& config, const SimWindow& window,
                                    Rng& rng);
PointPattern sample_conditioned_aps(double norm_xstar, const NetworkConfig& config, const SimWindow& window,
                                    std::uint64_t seed);

/// Uniform grid over a point set for nearest-neighbour style queries.
class PointIndex {
public:
    PointIndex(std::span<const Point2> points, const SimWindow& window, double cell_size);

    std::size_t size() const { return points_.size(); }
    const Point2& operator[](std::size_t i) const { return points_[i]; }

    /// True if some point other than `skip` is at squared distance < d2 from y.
    bool any_closer(const Point2& y, double d2, std::size_t skip = npos) const;

    /// Radius of a disk about `centre` that provably contains the Voronoi cell
    /// of `centre` with respect to the indexed points (minus `skip`). Infinite
    /// when some direction has no neighbour.
    double cell_bound(const Point2& centre, std::size_t skip = npos) const;

    /// Per octant about `centre` (numbered from angle -pi), a radius beyond
    /// which that octant is outside the Voronoi cell of `centre`.
    std::array<double, 8> octant_reach(const Point2& centre, std::size_t skip = npos) const;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    std::pair<int, int> cell_of(const Point2& p) const;

    std::vector<Point2> points_;
    std::vector<std::uint32_t> start_;  // CSR offsets per grid cell
    std::vector<std::uint32_t> order_;
    Point2 origin_;
    double h_;
    int n_;
};

/// True if y lies in the Voronoi cell of `x_star` (ties count as inside).
bool in_guard_region(const Point2& y, const Point2& x_star, const PointIndex& others);

/// UEs outside the Voronoi cell of the serving AP of `aps`.
PointPattern thin_ues_by_guard(const PointPattern& ues, const PointPattern& aps, const Point2& x_star);

/// One uniformly placed UE per Voronoi cell of `aps`, for cells whose AP lies
/// within window.radius - margin of the window centre. The cell of the
/// serving AP (if any) gets no UE.
PointPattern vplp_ues(const PointPattern& aps, double margin, Rng& rng);

/// Unconditioned HPPP of APs plus its VPLP of UEs (margin 3 / sqrt(lambda_a)).
std::pair<PointPattern, PointPattern> sample_vplp(const NetworkConfig& config, const SimWindow& window, Rng& rng);

enum class SimProcess { Ppp, Vplp };
enum class GuardMode { Voronoi, None };

std::string_view to_string(SimProcess p);

struct McCoverageSpec {
    InterfererKind kind{InterfererKind::Ue};
    SimProcess process{SimProcess::Ppp};
    GuardMode guard{GuardMode::Voronoi};
    /// Draw the receiver angle (relative to o -> x*) uniformly per trial,
    /// keeping |x_R| fixed.
    bool random_receiver_angle{false};
    LinkDistance link{LinkDistance::Fixed};
    double rho{1.0};
    /// Linear SIR thresholds evaluated on every trial.
    std::vector<double> theta;
    double window_factor{30.0};
    /// Add the mean interference of the field beyond the simulated disk. At
    /// that range s P r^-alpha is tiny, so its fluctuations do not matter.
    bool far_field{true};
    /// 0 selects std::thread::hardware_concurrency().
    unsigned threads{0};
};

/// Integral of |x - y|^-alpha over |x| > radius, for |y| = offset < radius.
double far_field_mean(double offset, double radius, double alpha);

/// Coverage indicator average with explicitly drawn Rayleigh gains on all
/// links, one estimate per threshold.
std::vector<EstimateWithError> estimate_coverage(const Scenario& scenario, const NetworkConfig& config,
                                                 const McCoverageSpec& spec, const TrialPlan& plan);

struct DensityBin {
    double r_lo;
    double r_hi;
    double density;
    double std_error;
};

using PatternSampler = std::function<PointPattern(Rng&)>;

/// Annulus-count density around `centre`, averaged over plan.trials patterns.
std::vector<DensityBin> estimate_radial_density(const PatternSampler& sampler, const Point2& centre,
                                                std::span<const double> edges, const TrialPlan& plan,
                                                unsigned threads = 0);

/// Equally spaced annulus edges 0, width, ..., r_max.
std::vector<double> uniform_bins(double width, double r_max);

/// E(|V*| | x*) by membership sampling inside a certified disk per trial.
EstimateWithError estimate_cell_area(double norm_xstar, const NetworkConfig& config, const TrialPlan& plan,
                                     int points_per_trial = 256, unsigned threads = 0);

/// Distance from o to its nearest point of an HPPP of density lambda.
double sample_nearest_distance(double lambda, Rng& rng);

/// Runs body(first, last, slot) over contiguous trial ranges, one per worker.
void for_trial_ranges(std::size_t trials, unsigned threads,
                      const std::function<void(std::size_t, std::size_t, unsigned)>& body);

unsigned resolve_threads(unsigned requested, std::size_t trials);

}  // namespace vguard
