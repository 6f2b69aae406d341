#include "doctest.h"
#include "vguard/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

using namespace vguard;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;

// Index of the nearest generator by exhaustive search.
std::size_t brute_nearest(const Point2& y, const std::vector<Point2>& gens) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < gens.size(); ++i)
        if ((gens[i] - y).norm2() < (gens[best] - y).norm2()) best = i;
    return best;
}
}  // namespace

TEST_SUITE("simulate") {

TEST_CASE("trial seeds are distinct and reproducible") {
    const TrialPlan plan{42, 1000};
    std::set<std::uint64_t> seen;
    for (std::size_t i = 0; i < plan.trials; ++i) seen.insert(plan.trial_seed(i));
    CHECK(seen.size() == plan.trials);
    CHECK(plan.trial_seed(7) == TrialPlan{42, 5}.trial_seed(7));
    CHECK(plan.trial_seed(7) != TrialPlan{43, 5}.trial_seed(7));
}

TEST_CASE("HPPP counts are Poisson") {
    const SimWindow w{{0.0, 0.0}, 10.0};
    CHECK(sample_hppp(0.0, w, 1ULL).points.empty());
    const int n = 10000;
    double sum = 0.0, sq = 0.0;
    const TrialPlan plan{5, static_cast<std::size_t>(n)};
    for (int i = 0; i < n; ++i) {
        Rng rng = plan.engine(i);
        const auto p = sample_hppp(1.0, w, rng);
        for (const auto& x : p.points) REQUIRE(w.contains(x));
        sum += p.points.size();
        sq += static_cast<double>(p.points.size()) * p.points.size();
    }
    const double mean = sum / n, var = (sq / n - mean * mean) * n / (n - 1.0);
    CHECK(std::abs(mean - 100.0 * kPi) < 3.0 * std::sqrt(100.0 * kPi / n));
    CHECK(std::abs(var / mean - 1.0) < 0.05);
}

TEST_CASE("conditioned APs leave the hole empty") {
    NetworkConfig cfg;
    const SimWindow w{{0.0, 0.0}, 6.0};
    const TrialPlan plan{9, 500};
    for (std::size_t t = 0; t < plan.trials; ++t) {
        Rng rng = plan.engine(t);
        const auto aps = sample_conditioned_aps(0.8, cfg, w, rng);
        REQUIRE(aps.serving.has_value());
        CHECK(aps.tag == ProcessTag::ApConditioned);
        for (const auto& x : aps.points) REQUIRE(x.norm() >= 0.8);
    }
    CHECK_THROWS_AS(sample_conditioned_aps(0.5, cfg, SimWindow{{1.0, 0.0}, 5.0}, 1ULL), std::invalid_argument);
}

TEST_CASE("guard thinning agrees with exhaustive membership") {
    NetworkConfig cfg;
    const SimWindow w{{0.0, 0.0}, 8.0};
    const TrialPlan plan{3, 60};
    for (std::size_t t = 0; t < plan.trials; ++t) {
        Rng rng = plan.engine(t);
        const auto aps = sample_conditioned_aps(0.5, cfg, w, rng);
        auto ues = sample_hppp(4.0, w, rng);
        ues.points.push_back(*aps.serving);
        const auto kept = thin_ues_by_guard(ues, aps, *aps.serving);
        std::vector<Point2> gens = aps.points;
        gens.push_back(*aps.serving);
        std::size_t expected = 0;
        for (const auto& y : ues.points) {
            const double dstar = (y - *aps.serving).norm2();
            bool beaten = false;
            for (const auto& x : aps.points) beaten |= (x - y).norm2() < dstar;
            if (beaten) ++expected;
        }
        CHECK(kept.points.size() == expected);
        CHECK(std::find(kept.points.begin(), kept.points.end(), *aps.serving) == kept.points.end());
        for (const auto& y : kept.points) CHECK(brute_nearest(y, gens) != gens.size() - 1);
    }
}

TEST_CASE("VPLP places exactly one UE in each eligible cell") {
    NetworkConfig cfg;
    const SimWindow w{{0.0, 0.0}, 8.0};
    const TrialPlan plan{17, 20};
    for (std::size_t t = 0; t < plan.trials; ++t) {
        Rng rng = plan.engine(t);
        const auto aps = sample_conditioned_aps(0.5, cfg, w, rng);
        const auto ues = vplp_ues(aps, 3.0, rng);
        std::vector<Point2> gens = aps.points;
        gens.push_back(*aps.serving);
        std::size_t eligible = 0;
        std::vector<int> per_cell(gens.size(), 0);
        for (const auto& x : aps.points) eligible += x.norm() <= 5.0;
        for (const auto& y : ues.points) ++per_cell[brute_nearest(y, gens)];
        CHECK(ues.points.size() == eligible);
        CHECK(per_cell.back() == 0);
        for (std::size_t i = 0; i < aps.points.size(); ++i)
            CHECK(per_cell[i] == (aps.points[i].norm() <= 5.0 ? 1 : 0));
    }
}

TEST_CASE("cell bound contains the cell") {
    NetworkConfig cfg;
    const SimWindow w{{0.0, 0.0}, 8.0};
    Rng rng(4);
    const auto aps = sample_hppp(1.0, w, rng);
    const PointIndex index(aps.points, w, 1.0);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (std::size_t i = 0; i < 30; ++i) {
        const double bound = index.cell_bound(aps.points[i], i);
        for (int k = 0; k < 400; ++k) {
            const Point2 y = aps.points[i] + Point2{u(rng), u(rng)};
            if (brute_nearest(y, aps.points) == i && w.contains(y)) CHECK(distance(y, aps.points[i]) <= bound);
        }
    }
}

TEST_CASE("coverage estimate is deterministic and thread-count independent") {
    NetworkConfig cfg;
    McCoverageSpec spec;
    spec.kind = InterfererKind::Ue;
    spec.random_receiver_angle = true;
    spec.link = LinkDistance::FromOrigin;
    spec.theta = {0.1, 1.0, 10.0};
    spec.window_factor = 8.0;
    const Scenario sc = Scenario::from_norms(0.5, 0.5);
    const TrialPlan plan{42, 400};
    spec.threads = 1;
    const auto one = estimate_coverage(sc, cfg, spec, plan);
    spec.threads = 3;
    const auto three = estimate_coverage(sc, cfg, spec, plan);
    for (std::size_t k = 0; k < one.size(); ++k) {
        CHECK(one[k].mean == three[k].mean);
        CHECK(one[k].std_error == three[k].std_error);
    }
    CHECK(one[0].mean >= one[1].mean);
    CHECK(one[1].mean >= one[2].mean);
}

TEST_CASE("vanishing threshold gives full coverage") {
    NetworkConfig cfg;
    McCoverageSpec spec;
    spec.kind = InterfererKind::Ap;
    spec.link = LinkDistance::FromNearestAp;
    spec.theta = {1e-12};
    spec.window_factor = 8.0;
    const auto est = estimate_coverage(Scenario::from_norms(0.5, 0.0), cfg, spec, {1, 200});
    CHECK(est[0].mean == 1.0);
    CHECK_THROWS_AS(estimate_coverage(Scenario::from_norms(0.5, 0.0), cfg, spec, {1, 50}), std::invalid_argument);
}

TEST_CASE("far-field mean matches the alpha = 4 closed form") {
    // For alpha = 4 the ring integral is 2 pi (r^2 + d^2) / (r^2 - d^2)^3.
    for (double d : {0.0, 0.5, 3.0}) {
        const double R = 10.0, q = R * R - d * d;
        CHECK(far_field_mean(d, R, 4.0) == Approx(kPi * (1.0 / q + d * d / (q * q))).epsilon(1e-8));
    }
    CHECK(far_field_mean(0.0, 5.0, 3.5) == Approx(2.0 * kPi * std::pow(5.0, -1.5) / 1.5).epsilon(1e-8));
    CHECK_THROWS_AS(far_field_mean(2.0, 2.0, 4.0), std::invalid_argument);
}

TEST_CASE("coverage does not depend on the window once the far field is added") {
    NetworkConfig cfg;
    McCoverageSpec spec;
    spec.kind = InterfererKind::Ap;
    spec.link = LinkDistance::Fixed;
    spec.rho = 0.75;
    spec.theta = {1.0};
    const Scenario sc = Scenario::from_norms(0.5, 0.25);
    const std::size_t n = 40000;
    spec.window_factor = 30.0;
    const auto wide = estimate_coverage(sc, cfg, spec, {11, n});
    spec.window_factor = 4.0;
    const auto narrow = estimate_coverage(sc, cfg, spec, {12, n});
    const double se = std::hypot(wide[0].std_error, narrow[0].std_error);
    CHECK(std::abs(wide[0].mean - narrow[0].mean) < 3.0 * se);
    // With the same seed, dropping the far field only removes its share of
    // the interference: the extra coverage is trunc * (1 - exp(-s f)).
    spec.far_field = false;
    const auto truncated = estimate_coverage(sc, cfg, spec, {12, n});
    const double s_f = std::pow(spec.rho, 4.0) * spec.theta[0] * cfg.lambda_a *
                       far_field_mean(0.25, SimWindow::around(sc, cfg.lambda_a, 4.0).radius, 4.0);
    const double extra = truncated[0].mean - narrow[0].mean;
    const double predicted = truncated[0].mean * -std::expm1(-s_f);
    CHECK(predicted > 0.005);
    CHECK(std::abs(extra - predicted) < 4.0 * std::sqrt(predicted / n));
}

TEST_CASE("flat histogram for a homogeneous process") {
    const SimWindow w{{0.0, 0.0}, 3.0};
    const auto edges = uniform_bins(0.5, 2.5);
    const auto bins = estimate_radial_density([&](Rng& rng) { return sample_hppp(2.0, w, rng); }, {0.0, 0.0}, edges,
                                              {8, 2000});
    REQUIRE(bins.size() == 5);
    for (const auto& b : bins) CHECK(std::abs(b.density - 2.0) < 4.0 * b.std_error);
}

TEST_CASE("cell area at x* = o is one over lambda") {
    NetworkConfig cfg;
    const auto est = estimate_cell_area(0.0, cfg, {21, 3000});
    CHECK(std::abs(est.mean - 1.0) < 4.0 * est.std_error);
    const auto bigger = estimate_cell_area(0.5, cfg, {21, 3000});
    CHECK(bigger.mean > 1.0);
}

TEST_CASE("nearest-AP distance has the Rayleigh mean") {
    const TrialPlan plan{77, 20000};
    double sum = 0.0;
    for (std::size_t t = 0; t < plan.trials; ++t) {
        Rng rng = plan.engine(t);
        sum += sample_nearest_distance(4.0, rng);
    }
    const double mean = sum / plan.trials;
    // sd of a Rayleigh variable is sqrt((4 - pi) / (4 pi lambda)).
    const double sd = std::sqrt((4.0 - kPi) / (4.0 * kPi * 4.0));
    CHECK(std::abs(mean - 0.25) < 4.0 * sd / std::sqrt(plan.trials));
}

TEST_CASE("bernoulli estimate") {
    const auto e = bernoulli_estimate(25, 100);
    CHECK(e.mean == 0.25);
    CHECK(e.std_error == Approx(std::sqrt(0.25 * 0.75 / 99.0)));
    CHECK_THROWS_AS(bernoulli_estimate(1, 1), std::invalid_argument);
}

}
