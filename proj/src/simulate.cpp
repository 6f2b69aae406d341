#include "vguard/simulate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace vguard {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Point2 uniform_in_disk(const Point2& centre, double radius, Rng& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (;;) {
        const double x = u(rng), y = u(rng);
        if (x * x + y * y <= 1.0) return {centre.x + radius * x, centre.y + radius * y};
    }
}

// Octant of v, numbered counter-clockwise from angle -pi; each octant is a
// closed pi/4 sector, so the boundary assignment is immaterial.
int octant(const Point2& v) {
    const bool steep = std::abs(v.y) > std::abs(v.x);
    if (v.y < 0.0) return v.x < 0.0 ? (steep ? 1 : 0) : (steep ? 2 : 3);
    return v.x >= 0.0 ? (steep ? 5 : 4) : (steep ? 6 : 7);
}

// |d|^-alpha from the squared distance.
double path_gain(double d2, double alpha) {
    if (alpha == 4.0) return 1.0 / (d2 * d2);
    return std::pow(d2, -0.5 * alpha);
}

double draw_angle(Rng& rng) { return std::uniform_real_distribution<double>(-kPi, kPi)(rng); }

// Largest distance from x (inside the window) to the window boundary along
// directions of octant k. The exit distance is unimodal in the direction with
// its maximum pointing away from the centre.
double octant_exit_distance(const Point2& x, int k, const SimWindow& w) {
    const Point2 p = x - w.centre;
    auto exit = [&](double phi) {
        const Point2 u = Point2::polar(1.0, phi);
        const double b = p.dot(u);
        return -b + std::sqrt(std::max(b * b - p.norm2() + w.radius * w.radius, 0.0));
    };
    const double lo = -kPi + k * (kPi / 4.0), hi = lo + kPi / 4.0;
    double best = std::max(exit(lo), exit(hi));
    if (p.norm2() > 0.0) {
        double away = (p * -1.0).angle();
        if (away >= lo && away <= hi) best = std::max(best, exit(away));
    } else {
        best = w.radius;
    }
    return best;
}

}  // namespace

SimWindow SimWindow::around(const Scenario& scenario, double lambda_a, double factor) {
    if (!(lambda_a > 0.0) || !(factor > 0.0)) throw std::invalid_argument("window: lambda_a and factor must be positive");
    return {{0.0, 0.0}, factor / std::sqrt(lambda_a) + std::max(scenario.norm_xstar(), scenario.norm_xr())};
}

std::uint64_t TrialPlan::trial_seed(std::size_t index) const {
    return splitmix64(master_seed ^ splitmix64(static_cast<std::uint64_t>(index) + 0x632be59bd9b4e019ULL));
}

Rng TrialPlan::engine(std::size_t index) const { return Rng(trial_seed(index)); }

EstimateWithError bernoulli_estimate(std::uint64_t successes, std::size_t trials) {
    if (trials < 2) throw std::invalid_argument("estimate needs at least two trials");
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    return {p, std::sqrt(p * (1.0 - p) / (n - 1.0)), trials};
}

PointPattern sample_hppp(double lambda, const SimWindow& window, Rng& rng) {
    if (!(lambda >= 0.0)) throw std::invalid_argument("sample_hppp: lambda must be non-negative");
    PointPattern out;
    out.window = window;
    out.tag = ProcessTag::Hppp;
    if (lambda == 0.0) return out;
    std::poisson_distribution<long> count(lambda * window.area());
    const long n = count(rng);
    out.points.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) out.points.push_back(uniform_in_disk(window.centre, window.radius, rng));
    return out;
}

PointPattern sample_hppp(double lambda, const SimWindow& window, std::uint64_t seed) {
    Rng rng(seed);
    return sample_hppp(lambda, window, rng);
}

PointPattern sample_conditioned_aps(double norm_xstar, const NetworkConfig& config, const SimWindow& window,
                                    Rng& rng) {
    if (!(norm_xstar >= 0.0)) throw std::invalid_argument("sample_conditioned_aps: |x*| must be non-negative");
    if (window.centre.norm2() != 0.0 || !(window.radius > norm_xstar))
        throw std::invalid_argument("sample_conditioned_aps: window must be centred at o and contain x*");
    PointPattern out = sample_hppp(config.lambda_a, window, rng);
    const double hole2 = norm_xstar * norm_xstar;
    std::erase_if(out.points, [hole2](const Point2& p) { return p.norm2() < hole2; });
    out.tag = ProcessTag::ApConditioned;
    out.serving = Point2{norm_xstar, 0.0};
    return out;
}

PointPattern sample_conditioned_aps(double norm_xstar, const NetworkConfig& config, const SimWindow& window,
                                    std::uint64_t seed) {
    Rng rng(seed);
    return sample_conditioned_aps(norm_xstar, config, window, rng);
}

// ---- spatial index -------------------------------------------------------

PointIndex::PointIndex(std::span<const Point2> points, const SimWindow& window, double cell_size)
    : points_(points.begin(), points.end()) {
    if (!(cell_size > 0.0)) throw std::invalid_argument("PointIndex: cell size must be positive");
    const double side = 2.0 * window.radius;
    n_ = static_cast<int>(std::clamp(std::ceil(side / cell_size), 1.0, 2048.0));
    h_ = side / n_;
    origin_ = window.centre - Point2{window.radius, window.radius};

    std::vector<std::uint32_t> cell(points_.size());
    start_.assign(static_cast<std::size_t>(n_) * n_ + 1, 0);
    for (std::size_t i = 0; i < points_.size(); ++i) {
        auto [ix, iy] = cell_of(points_[i]);
        cell[i] = static_cast<std::uint32_t>(iy * n_ + ix);
        ++start_[cell[i] + 1];
    }
    for (std::size_t c = 1; c < start_.size(); ++c) start_[c] += start_[c - 1];
    order_.resize(points_.size());
    std::vector<std::uint32_t> fill(start_.begin(), start_.end() - 1);
    for (std::size_t i = 0; i < points_.size(); ++i) order_[fill[cell[i]]++] = static_cast<std::uint32_t>(i);
}

std::pair<int, int> PointIndex::cell_of(const Point2& p) const {
    const int ix = std::clamp(static_cast<int>(std::floor((p.x - origin_.x) / h_)), 0, n_ - 1);
    const int iy = std::clamp(static_cast<int>(std::floor((p.y - origin_.y) / h_)), 0, n_ - 1);
    return {ix, iy};
}

bool PointIndex::any_closer(const Point2& y, double d2, std::size_t skip) const {
    const double d = std::sqrt(d2);
    const int x0 = std::max(0, static_cast<int>(std::floor((y.x - d - origin_.x) / h_)));
    const int x1 = std::min(n_ - 1, static_cast<int>(std::floor((y.x + d - origin_.x) / h_)));
    const int y0 = std::max(0, static_cast<int>(std::floor((y.y - d - origin_.y) / h_)));
    const int y1 = std::min(n_ - 1, static_cast<int>(std::floor((y.y + d - origin_.y) / h_)));
    for (int iy = y0; iy <= y1; ++iy) {
        for (int ix = x0; ix <= x1; ++ix) {
            const std::size_t c = static_cast<std::size_t>(iy) * n_ + ix;
            for (std::uint32_t k = start_[c]; k < start_[c + 1]; ++k) {
                const std::uint32_t j = order_[k];
                if (j == skip) continue;
                if ((points_[j] - y).norm2() < d2) return true;
            }
        }
    }
    return false;
}

std::array<double, 8> PointIndex::octant_reach(const Point2& centre, std::size_t skip) const {
    // A neighbour at distance D inside a pi/4 sector cuts every direction of
    // that sector off at D / (2 cos(pi/4)) = D / sqrt(2).
    std::array<double, 8> best;
    best.fill(kInf);
    const auto [cx, cy] = cell_of(centre);
    auto visit = [&](int ix, int iy) {
        if (ix < 0 || iy < 0 || ix >= n_ || iy >= n_) return;
        const std::size_t c = static_cast<std::size_t>(iy) * n_ + ix;
        for (std::uint32_t k = start_[c]; k < start_[c + 1]; ++k) {
            const std::uint32_t j = order_[k];
            if (j == skip) continue;
            const Point2 v = points_[j] - centre;
            const double d2 = v.norm2();
            if (d2 == 0.0) continue;
            double& b = best[octant(v)];
            b = std::min(b, d2);
        }
    };
    for (int ring = 0; ring <= n_; ++ring) {
        if (ring == 0) {
            visit(cx, cy);
        } else {
            for (int i = -ring; i <= ring; ++i) {
                visit(cx + i, cy - ring);
                visit(cx + i, cy + ring);
            }
            for (int i = -ring + 1; i <= ring - 1; ++i) {
                visit(cx - ring, cy + i);
                visit(cx + ring, cy + i);
            }
        }
        // Everything not yet visited is at least ring * h away.
        const double worst = *std::max_element(best.begin(), best.end());
        const double reach = ring * h_;
        if (worst <= reach * reach) break;
    }
    for (double& b : best) b = std::sqrt(b / 2.0);
    return best;
}

double PointIndex::cell_bound(const Point2& centre, std::size_t skip) const {
    const auto reach = octant_reach(centre, skip);
    return *std::max_element(reach.begin(), reach.end());
}

namespace {
PointIndex index_for(std::span<const Point2> pts, const SimWindow& window) {
    const double h = std::sqrt(window.area() / std::max<std::size_t>(pts.size(), 1));
    return PointIndex(pts, window, h);
}
}  // namespace

bool in_guard_region(const Point2& y, const Point2& x_star, const PointIndex& others) {
    return !others.any_closer(y, (y - x_star).norm2());
}

PointPattern thin_ues_by_guard(const PointPattern& ues, const PointPattern& aps, const Point2& x_star) {
    const PointIndex index = index_for(aps.points, aps.window);
    const double bound = index.cell_bound(x_star);
    PointPattern out;
    out.window = ues.window;
    out.tag = ProcessTag::UeThinned;
    out.points.reserve(ues.points.size());
    for (const Point2& y : ues.points) {
        const double d2 = (y - x_star).norm2();
        if (d2 > bound * bound || index.any_closer(y, d2)) out.points.push_back(y);
    }
    return out;
}

PointPattern vplp_ues(const PointPattern& aps, double margin, Rng& rng) {
    std::vector<Point2> generators = aps.points;
    if (aps.serving) generators.push_back(*aps.serving);
    const PointIndex index = index_for(generators, aps.window);
    const double reach = aps.window.radius - margin;

    PointPattern out;
    out.window = aps.window;
    out.tag = ProcessTag::Vplp;
    for (std::size_t i = 0; i < aps.points.size(); ++i) {
        const Point2& x = aps.points[i];
        if ((x - aps.window.centre).norm() > reach) continue;
        auto reach = index.octant_reach(x, i);
        // An octant without a neighbour runs into the window edge; the cell is
        // then clipped to the window and that octant capped at the exit distance.
        bool clipped = false;
        for (int k = 0; k < 8; ++k) {
            if (std::isfinite(reach[k])) continue;
            clipped = true;
            reach[k] = octant_exit_distance(x, k, aps.window);
        }
        std::array<double, 8> cumulative;
        double total = 0.0;
        for (int k = 0; k < 8; ++k) cumulative[k] = (total += reach[k] * reach[k]);
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        // Uniform proposals over the union of the eight capped octants.
        for (;;) {
            const double pick = u01(rng) * total;
            const int k = static_cast<int>(std::upper_bound(cumulative.begin(), cumulative.end() - 1, pick) -
                                           cumulative.begin());
            const double phi = -kPi + (k + u01(rng)) * (kPi / 4.0);
            const Point2 y = x + Point2::polar(reach[k] * std::sqrt(u01(rng)), phi);
            if (clipped && !aps.window.contains(y)) continue;
            if (!index.any_closer(y, (y - x).norm2(), i)) {
                out.points.push_back(y);
                break;
            }
        }
    }
    return out;
}

std::pair<PointPattern, PointPattern> sample_vplp(const NetworkConfig& config, const SimWindow& window, Rng& rng) {
    PointPattern aps = sample_hppp(config.lambda_a, window, rng);
    PointPattern ues = vplp_ues(aps, 3.0 / std::sqrt(config.lambda_a), rng);
    return {std::move(aps), std::move(ues)};
}

std::string_view to_string(SimProcess p) { return p == SimProcess::Ppp ? "ppp" : "vplp"; }

// ---- execution ------------------------------------------------------------

unsigned resolve_threads(unsigned requested, std::size_t trials) {
    unsigned t = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::clamp<std::size_t>(t, 1, std::max<std::size_t>(trials, 1)));
}

void for_trial_ranges(std::size_t trials, unsigned threads,
                      const std::function<void(std::size_t, std::size_t, unsigned)>& body) {
    const unsigned t = resolve_threads(threads, trials);
    if (t == 1) {
        body(0, trials, 0);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex guard;
    for (unsigned w = 0; w < t; ++w) {
        const std::size_t first = trials * w / t, last = trials * (w + 1) / t;
        pool.emplace_back([&, first, last, w] {
            try {
                body(first, last, w);
            } catch (...) {
                std::lock_guard lock(guard);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

std::vector<EstimateWithError> estimate_coverage(const Scenario& scenario, const NetworkConfig& config,
                                                 const McCoverageSpec& spec, const TrialPlan& plan) {
    config.validate();
    if (plan.trials < 100) throw std::invalid_argument("estimate_coverage: need at least 100 trials");
    if (spec.theta.empty()) throw std::invalid_argument("estimate_coverage: empty threshold list");

    const bool ap = spec.kind == InterfererKind::Ap;
    const double alpha = ap ? config.alpha_a : config.alpha_u;
    const double power = ap ? config.p_a : config.p_u;
    const SimWindow window = SimWindow::around(scenario, config.lambda_a, spec.window_factor);
    const double norm_xstar = scenario.norm_xstar();
    const double norm_xr = scenario.norm_xr();
    const double margin = 3.0 / std::sqrt(config.lambda_a);

    // VPLP cells only exist for APs at least `margin` inside the window.
    const bool vplp = !ap && spec.process == SimProcess::Vplp;
    const double far_lambda = ap || vplp ? config.lambda_a : config.lambda_u;
    const double far = spec.far_field ? power * far_lambda *
                                            far_field_mean(norm_xr, window.radius - (vplp ? margin : 0.0), alpha)
                                      : 0.0;

    const unsigned workers = resolve_threads(spec.threads, plan.trials);
    std::vector<std::vector<std::uint64_t>> hits(workers, std::vector<std::uint64_t>(spec.theta.size(), 0));

    for_trial_ranges(plan.trials, workers, [&](std::size_t first, std::size_t last, unsigned slot) {
        std::exponential_distribution<double> fade(1.0);
        auto& mine = hits[slot];
        for (std::size_t t = first; t < last; ++t) {
            Rng rng = plan.engine(t);
            const Point2 x_star = scenario.x_star;
            Point2 x_r = scenario.x_r;
            if (spec.random_receiver_angle) x_r = Point2::polar(norm_xr, draw_angle(rng));

            PointPattern aps = sample_conditioned_aps(norm_xstar, config, window, rng);
            std::vector<Point2> interferers;
            if (ap) {
                interferers = std::move(aps.points);
            } else if (spec.process == SimProcess::Vplp) {
                interferers = vplp_ues(aps, margin, rng).points;
            } else {
                PointPattern ues = sample_hppp(config.lambda_u, window, rng);
                if (spec.guard == GuardMode::Voronoi) ues = thin_ues_by_guard(ues, aps, x_star);
                interferers = std::move(ues.points);
            }

            double interference = far;
            for (const Point2& x : interferers)
                interference += power * fade(rng) * path_gain((x - x_r).norm2(), alpha);

            double rho = spec.rho;
            if (spec.link == LinkDistance::FromOrigin) rho = norm_xr;
            if (spec.link == LinkDistance::FromNearestAp) rho = distance(x_star, x_r);
            const double g0 = fade(rng);
            if (rho == 0.0) {
                for (auto& h : mine) ++h;
                continue;
            }
            const double signal = power * g0 * std::pow(rho, -alpha);
            for (std::size_t k = 0; k < spec.theta.size(); ++k)
                if (signal > spec.theta[k] * interference) ++mine[k];
        }
    });

    std::vector<EstimateWithError> out;
    for (std::size_t k = 0; k < spec.theta.size(); ++k) {
        std::uint64_t total = 0;
        for (const auto& h : hits) total += h[k];
        out.push_back(bernoulli_estimate(total, plan.trials));
    }
    return out;
}

double far_field_mean(double offset, double radius, double alpha) {
    if (!(alpha > 2.0)) throw std::invalid_argument("far_field_mean: alpha must exceed 2");
    if (!(offset >= 0.0) || !(radius > offset)) throw std::invalid_argument("far_field_mean: need 0 <= offset < radius");
    const QuadratureSpec spec{1e-10, 1e-300, 2000};
    auto ring = [&](double r) {
        auto f = [&](double phi) { return std::pow(r * r + offset * offset - 2.0 * r * offset * std::cos(phi), -0.5 * alpha); };
        return 2.0 * r * integrate_finite(f, 0.0, kPi, spec);
    };
    auto tail = [&](double R) {
        const double u = R - offset;
        return 2.0 * kPi * (std::pow(u, 2.0 - alpha) / (alpha - 2.0) + offset * std::pow(u, 1.0 - alpha) / (alpha - 1.0));
    };
    return integrate_semiinfinite(ring, radius, tail, spec, radius);
}

std::vector<double> uniform_bins(double width, double r_max) {
    if (!(width > 0.0) || !(r_max > 0.0)) throw std::invalid_argument("uniform_bins: positive width and range");
    std::vector<double> edges;
    const int n = static_cast<int>(std::round(r_max / width));
    for (int i = 0; i <= n; ++i) edges.push_back(width * i);
    return edges;
}

std::vector<DensityBin> estimate_radial_density(const PatternSampler& sampler, const Point2& centre,
                                                std::span<const double> edges, const TrialPlan& plan,
                                                unsigned threads) {
    if (edges.size() < 2) throw std::invalid_argument("estimate_radial_density: need at least one bin");
    if (plan.trials < 2) throw std::invalid_argument("estimate_radial_density: need at least two patterns");
    const std::size_t bins = edges.size() - 1;
    const unsigned workers = resolve_threads(threads, plan.trials);
    std::vector<std::vector<std::uint64_t>> sum(workers, std::vector<std::uint64_t>(bins, 0));
    std::vector<std::vector<std::uint64_t>> sq(workers, std::vector<std::uint64_t>(bins, 0));
    const double r_max = edges.back();

    for_trial_ranges(plan.trials, workers, [&](std::size_t first, std::size_t last, unsigned slot) {
        std::vector<std::uint64_t> counts(bins);
        for (std::size_t t = first; t < last; ++t) {
            Rng rng = plan.engine(t);
            const PointPattern pattern = sampler(rng);
            std::fill(counts.begin(), counts.end(), 0);
            for (const Point2& p : pattern.points) {
                const double r = distance(p, centre);
                if (r >= r_max || r < edges.front()) continue;
                const auto it = std::upper_bound(edges.begin(), edges.end(), r);
                ++counts[static_cast<std::size_t>(it - edges.begin()) - 1];
            }
            for (std::size_t b = 0; b < bins; ++b) {
                sum[slot][b] += counts[b];
                sq[slot][b] += counts[b] * counts[b];
            }
        }
    });

    const double n = static_cast<double>(plan.trials);
    std::vector<DensityBin> out;
    for (std::size_t b = 0; b < bins; ++b) {
        std::uint64_t s = 0, q = 0;
        for (unsigned w = 0; w < workers; ++w) {
            s += sum[w][b];
            q += sq[w][b];
        }
        const double area = kPi * (edges[b + 1] * edges[b + 1] - edges[b] * edges[b]);
        const double mean = static_cast<double>(s) / n;
        const double var = std::max(static_cast<double>(q) / n - mean * mean, 0.0) * n / (n - 1.0);
        out.push_back({edges[b], edges[b + 1], mean / area, std::sqrt(var / n) / area});
    }
    return out;
}

EstimateWithError estimate_cell_area(double norm_xstar, const NetworkConfig& config, const TrialPlan& plan,
                                     int points_per_trial, unsigned threads) {
    config.validate();
    if (plan.trials < 2) throw std::invalid_argument("estimate_cell_area: need at least two trials");
    if (points_per_trial < 1) throw std::invalid_argument("estimate_cell_area: points_per_trial must be positive");
    const SimWindow window{{0.0, 0.0}, norm_xstar + 10.0 / std::sqrt(config.lambda_a)};
    std::vector<double> area(plan.trials);

    for_trial_ranges(plan.trials, threads, [&](std::size_t first, std::size_t last, unsigned) {
        for (std::size_t t = first; t < last; ++t) {
            Rng rng = plan.engine(t);
            const PointPattern aps = sample_conditioned_aps(norm_xstar, config, window, rng);
            const Point2 x_star = *aps.serving;
            const PointIndex index = index_for(aps.points, window);
            const double bound = std::min(index.cell_bound(x_star), 2.0 * window.radius);
            int inside = 0;
            for (int k = 0; k < points_per_trial; ++k)
                if (in_guard_region(uniform_in_disk(x_star, bound, rng), x_star, index)) ++inside;
            area[t] = kPi * bound * bound * inside / points_per_trial;
        }
    });

    const double n = static_cast<double>(plan.trials);
    double mean = 0.0;
    for (double a : area) mean += a;
    mean /= n;
    double var = 0.0;
    for (double a : area) var += (a - mean) * (a - mean);
    var /= (n - 1.0);
    return {mean, std::sqrt(var / n), plan.trials};
}

double sample_nearest_distance(double lambda, Rng& rng) {
    if (!(lambda > 0.0)) throw std::invalid_argument("sample_nearest_distance: lambda must be positive");
    for (double radius = 6.0 / std::sqrt(lambda);; radius *= 2.0) {
        const PointPattern p = sample_hppp(lambda, SimWindow{{0.0, 0.0}, radius}, rng);
        double best = kInf;
        for (const Point2& x : p.points) best = std::min(best, x.norm2());
        if (std::isfinite(best)) return std::sqrt(best);
    }
}

}  // namespace vguard
