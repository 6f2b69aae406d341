#include "vguard/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

#ifndef VGUARD_VERSION
#define VGUARD_VERSION "0.0.0"
#endif

namespace vguard {

namespace {

const std::vector<ExperimentInfo> kExperiments = {
    {"fig2", "AP equivalent density at x_R for |x_R|/|x*| in {0.5, 1, 2}, |x*| = 1/(2 sqrt(lambda_a))"},
    {"fig3", "AP equivalent density at x_R = x* for several |x*|"},
    {"fig4", "UE equivalent density at x_R = x*, with the exponential bound and piecewise-linear fits"},
    {"fig5", "average guard-region area versus 2 sqrt(lambda_a) |x*|"},
    {"fig6", "UE equivalent density for x* = o (varying |x_R|) and x_R = o (varying |x*|), with the Bessel bound"},
    {"fig7a", "D2D coverage under UE interference, random receiver angle, lambda_u = lambda_a"},
    {"fig7b", "D2D coverage under UE interference, random receiver angle, lambda_u = 10 lambda_a"},
    {"fig8", "coverage of the AP-to-receiver link under AP interference, averaged over the receiver angle"},
    {"fig9", "uplink coverage with the receiver at x*, |x*| = c / (2 sqrt(lambda_a)), c in {1/2, 1, 2}"},
    {"fig10", "guard-region cases A (none), B (transmitter side, x* = o) and C (receiver side, x_R = x* = o)"},
    {"custom", "UE-interference coverage at a user-chosen |x*| and |x_R| / |x*|"},
};

std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Shared state of a single run. Distances are converted to absolute units on
// the way in and back to the caller's units on the way out.
class Runner {
public:
    explicit Runner(const ExperimentSpec& spec)
        : spec_(spec),
          cfg_(spec.config),
          unit_(spec.natural_units ? 1.0 / std::sqrt(spec.config.lambda_a) : 1.0),
          theta_db_(theta_db_grid(spec.theta_db_min, spec.theta_db_max, spec.theta_db_step)) {}

    double abs(double d) const { return d * unit_; }
    double out(double d) const { return d / unit_; }
    const NetworkConfig& cfg() const { return cfg_; }
    NetworkConfig& cfg() { return cfg_; }
    const std::vector<double>& theta_db() const { return theta_db_; }

    std::vector<double> thetas_linear() const {
        std::vector<double> t;
        for (double db : theta_db_) t.push_back(db_to_linear(db));
        return t;
    }

    std::vector<double> xstar_grid(std::vector<double> fallback) const {
        if (spec_.xstar_norm) return {*spec_.xstar_norm};
        return fallback;
    }
    std::vector<double> ratio_grid(std::vector<double> fallback) const {
        if (spec_.xr_ratio) return {*spec_.xr_ratio};
        return fallback;
    }

    // Each MC series gets its own master seed derived from the run seed.
    TrialPlan plan() { return {mix(spec_.seed ^ mix(++stream_)), spec_.trials}; }

    void add(std::string series, double x, double value, double err = 0.0) {
        rows_.push_back({std::move(series), x, value, err});
    }

    void density_series(const std::string& series, const RadialDensity& d, double scale, double r_max_nat = 3.0,
                        double step_nat = 0.02) {
        const int n = static_cast<int>(std::round(r_max_nat / step_nat));
        for (int i = 0; i <= n; ++i) {
            const double rn = step_nat * i;
            add(series, rn, d(abs(rn)) / scale);
        }
    }

    void mc_density_series(const std::string& series, const PatternSampler& sampler, const Point2& centre,
                           double scale, double r_max_nat = 3.0, double width_nat = 0.05) {
        std::vector<double> edges;
        for (double e : uniform_bins(width_nat, r_max_nat)) edges.push_back(abs(e));
        const auto bins = estimate_radial_density(sampler, centre, edges, plan(), spec_.threads);
        for (const auto& b : bins) add(series, out(0.5 * (b.r_lo + b.r_hi)), b.density / scale, b.std_error / scale);
    }

    void analytic_curve(const std::string& series, const std::function<double(double)>& coverage_at) {
        for (double db : theta_db_) add(series, db, coverage_at(db_to_linear(db)));
    }

    void mc_curve(const std::string& series, const Scenario& sc, McCoverageSpec mc) {
        mc.theta = thetas_linear();
        mc.window_factor = spec_.window_factor;
        mc.threads = spec_.threads;
        const auto est = estimate_coverage(sc, cfg_, mc, plan());
        for (std::size_t k = 0; k < est.size(); ++k) add(series, theta_db_[k], est[k].mean, est[k].std_error);
    }

    std::vector<CsvRow> take_rows() { return std::move(rows_); }

    const ExperimentSpec& spec() const { return spec_; }

private:
    const ExperimentSpec& spec_;
    NetworkConfig cfg_;
    double unit_;
    std::vector<double> theta_db_;
    std::vector<CsvRow> rows_;
    std::uint64_t stream_{0};
};

std::string label(std::string_view key, double v) { return std::string(key) + "=" + format_number(v); }

std::string series(Provenance p, const std::string& lbl) { return std::string(to_string(p)) + ":" + lbl; }

PatternSampler conditioned_ap_sampler(double a, const NetworkConfig& cfg, double radius) {
    return [a, cfg, radius](Rng& rng) { return sample_conditioned_aps(a, cfg, SimWindow{{0.0, 0.0}, radius}, rng); };
}

PatternSampler thinned_ue_sampler(double a, const NetworkConfig& cfg, double radius) {
    return [a, cfg, radius](Rng& rng) {
        const SimWindow w{{0.0, 0.0}, radius};
        const PointPattern aps = sample_conditioned_aps(a, cfg, w, rng);
        return thin_ues_by_guard(sample_hppp(cfg.lambda_u, w, rng), aps, *aps.serving);
    };
}

// ---- figures --------------------------------------------------------------

void run_fig2(Runner& R) {
    const double a = R.abs(R.xstar_grid({0.5}).front());
    const double la = R.cfg().lambda_a;
    for (double ratio : R.ratio_grid({0.5, 1.0, 2.0})) {
        const double b = ratio * a;
        const std::string lbl = label("ratio", ratio);
        R.density_series(series(Provenance::Analytic, lbl), ap_equivalent_density(Scenario::from_norms(a, b), R.cfg()),
                         la);
        R.mc_density_series(series(Provenance::McPpp, lbl), conditioned_ap_sampler(a, R.cfg(), b + R.abs(3.5)),
                            {b, 0.0}, la);
    }
}

void run_fig3(Runner& R) {
    const double la = R.cfg().lambda_a;
    for (double an : R.xstar_grid({0.25, 0.5, 1.0})) {
        const double a = R.abs(an);
        const std::string lbl = label("xstar", an);
        R.density_series(series(Provenance::Analytic, lbl), ap_equivalent_density(Scenario::uplink(a), R.cfg()), la);
        R.mc_density_series(series(Provenance::McPpp, lbl), conditioned_ap_sampler(a, R.cfg(), 2.0 * a + R.abs(3.5)),
                            {a, 0.0}, la);
    }
}

void run_fig4(Runner& R) {
    const double lu = R.cfg().lambda_u;
    for (double an : R.xstar_grid({0.0, 0.25, 0.5, 1.0})) {
        const double a = R.abs(an);
        const std::string lbl = label("xstar", an);
        R.density_series(series(Provenance::Analytic, lbl),
                         cache_density(ue_equivalent_density(Scenario::uplink(a), R.cfg())), lu);
        R.mc_density_series(series(Provenance::McPpp, lbl), thinned_ue_sampler(a, R.cfg(), 2.0 * a + R.abs(6.0)),
                            {a, 0.0}, lu);
    }
    R.density_series(series(Provenance::AnalyticBound, "exp-bound"), ue_density_exp_bound(R.cfg()), lu);
    const double delta_star = fit_tightest_piecewise_delta(R.cfg());
    R.density_series(series(Provenance::AnalyticBound, "piecewise-tightest"), piecewise_linear_density(lu, delta_star),
                     lu);
    R.density_series(series(Provenance::Analytic, "piecewise-curve-fit"),
                     piecewise_linear_density(lu, curve_fit_delta(R.cfg().lambda_a)), lu);
}

void run_fig5(Runner& R) {
    const double la = R.cfg().lambda_a;
    const double half = 0.5 / std::sqrt(la);  // |x*| = c / (2 sqrt(lambda_a))
    for (int i = 0; i <= 30; ++i) {
        const double c = 0.1 * i;
        R.add(series(Provenance::Analytic, "cell-area"), c, average_cell_area(c * half, la) * la);
    }
    for (double c : {0.0, 0.5, 1.0, 2.0, 3.0}) {
        const auto est = estimate_cell_area(c * half, R.cfg(), R.plan(), 256, R.spec().threads);
        R.add(series(Provenance::McPpp, "cell-area"), c, est.mean * la, est.std_error * la);
    }
}

void run_fig6(Runner& R) {
    const double lu = R.cfg().lambda_u;
    for (double bn : {0.25, 0.5, 1.0}) {
        const double b = R.abs(bn);
        const Scenario sc = Scenario::from_norms(0.0, b);
        const std::string lbl = "xstar=0|" + label("xr", bn);
        R.density_series(series(Provenance::Analytic, lbl), cache_density(ue_equivalent_density(sc, R.cfg())), lu);
        R.density_series(series(Provenance::AnalyticBound, "bessel|" + lbl), ue_density_bessel_bound(sc, R.cfg()), lu);
        R.mc_density_series(series(Provenance::McPpp, lbl), thinned_ue_sampler(0.0, R.cfg(), b + R.abs(6.0)),
                            {b, 0.0}, lu);
    }
    for (double an : R.xstar_grid({0.25, 0.5, 1.0})) {
        const double a = R.abs(an);
        const Scenario sc = Scenario::from_norms(a, 0.0);
        const std::string lbl = "xr=0|" + label("xstar", an);
        R.density_series(series(Provenance::Analytic, lbl), cache_density(ue_equivalent_density(sc, R.cfg())), lu);
        R.density_series(series(Provenance::AnalyticBound, "bessel|" + lbl), ue_density_bessel_bound(sc, R.cfg()), lu);
        R.mc_density_series(series(Provenance::McPpp, lbl), thinned_ue_sampler(a, R.cfg(), a + R.abs(6.0)),
                            {0.0, 0.0}, lu);
    }
}

void run_fig7(Runner& R, double lambda_ratio, bool with_vplp) {
    R.cfg().lambda_u = lambda_ratio * R.cfg().lambda_a;
    const double a = R.abs(R.xstar_grid({0.5}).front());
    const auto& cfg = R.cfg();
    for (double ratio : R.ratio_grid({0.5, 1.0, 2.0})) {
        const double b = ratio * a;
        const std::string lbl = label("ratio", ratio);
        const auto density = cache_density(ue_density_angular_average(b, Scenario::uplink(a), cfg));
        R.analytic_curve(series(Provenance::AnalyticBound, lbl), [&](double theta) {
            return coverage_from_density(density, b, theta, cfg.p_u, cfg.alpha_u);
        });
        McCoverageSpec mc;
        mc.kind = InterfererKind::Ue;
        mc.random_receiver_angle = true;
        mc.link = LinkDistance::FromOrigin;
        R.mc_curve(series(Provenance::McPpp, lbl), Scenario::from_norms(a, b), mc);
        if (with_vplp) {
            mc.process = SimProcess::Vplp;
            R.mc_curve(series(Provenance::McVplp, lbl), Scenario::from_norms(a, b), mc);
        }
    }
}

void run_fig8(Runner& R) {
    const double a = R.abs(R.xstar_grid({0.5}).front());
    const auto& cfg = R.cfg();
    for (double ratio : R.ratio_grid({0.0, 0.5, 1.0, 2.0})) {
        const double b = ratio * a;
        const std::string lbl = label("ratio", ratio);
        LinkAveraging avg;
        R.analytic_curve(series(Provenance::Analytic, lbl), [&](double theta) {
            return coverage_avg_random_link(a, b, cfg, {0.0, theta, InterfererKind::Ap}, avg);
        });
        McCoverageSpec mc;
        mc.kind = InterfererKind::Ap;
        mc.random_receiver_angle = true;
        mc.link = LinkDistance::FromNearestAp;
        R.mc_curve(series(Provenance::McPpp, lbl), Scenario::from_norms(a, b), mc);
    }
}

void run_fig9(Runner& R) {
    R.cfg().lambda_u = R.cfg().lambda_a;
    const auto& cfg = R.cfg();
    const double delta_star = fit_tightest_piecewise_delta(cfg);
    std::vector<double> cs{0.5, 1.0, 2.0};
    if (R.spec().xstar_norm) cs = {2.0 * *R.spec().xstar_norm};
    for (double c : cs) {
        const double a = R.abs(0.5 * c);
        const std::string lbl = label("c", c);
        const Scenario sc = Scenario::uplink(a);
        const auto density = cache_density(ue_equivalent_density(sc, cfg));
        const double pa = std::pow(a, cfg.alpha_u);
        R.analytic_curve(series(Provenance::AnalyticBound, lbl), [&](double theta) {
            return coverage_from_density(density, a, theta, cfg.p_u, cfg.alpha_u);
        });
        R.analytic_curve(series(Provenance::AnalyticBound, "piecewise|" + lbl), [&](double theta) {
            return laplace_piecewise_closed(pa * theta / cfg.p_u, delta_star, cfg);
        });
        McCoverageSpec mc;
        mc.kind = InterfererKind::Ue;
        mc.link = LinkDistance::FromOrigin;
        R.mc_curve(series(Provenance::McPpp, lbl), sc, mc);
        mc.process = SimProcess::Vplp;
        R.mc_curve(series(Provenance::McVplp, lbl), sc, mc);
    }
}

void run_fig10(Runner& R) {
    R.cfg().lambda_u = R.cfg().lambda_a;
    const auto& cfg = R.cfg();
    const double rho = R.abs(R.xstar_grid({0.5}).front());
    const double pr = std::pow(rho, cfg.alpha_u);

    R.analytic_curve(series(Provenance::Analytic, "case-a"), [&](double theta) {
        return laplace_no_guard(cfg.lambda_u, pr * theta / cfg.p_u, cfg.p_u, cfg.alpha_u);
    });
    const Scenario case_b = Scenario::from_norms(0.0, rho);
    const Scenario case_c = Scenario::uplink(0.0);
    const auto dens_b = cache_density(ue_equivalent_density(case_b, cfg));
    const auto dens_c = cache_density(ue_equivalent_density(case_c, cfg));
    R.analytic_curve(series(Provenance::AnalyticBound, "case-b"),
                     [&](double theta) { return coverage_from_density(dens_b, rho, theta, cfg.p_u, cfg.alpha_u); });
    R.analytic_curve(series(Provenance::AnalyticBound, "case-c"),
                     [&](double theta) { return coverage_from_density(dens_c, rho, theta, cfg.p_u, cfg.alpha_u); });

    McCoverageSpec mc;
    mc.kind = InterfererKind::Ue;
    mc.link = LinkDistance::Fixed;
    mc.rho = rho;
    mc.guard = GuardMode::None;
    R.mc_curve(series(Provenance::McPpp, "case-a"), case_c, mc);
    mc.guard = GuardMode::Voronoi;
    R.mc_curve(series(Provenance::McPpp, "case-b"), case_b, mc);
    R.mc_curve(series(Provenance::McPpp, "case-c"), case_c, mc);
}

void run_custom(Runner& R) {
    const auto& cfg = R.cfg();
    const double a = R.abs(R.xstar_grid({0.5}).front());
    const double ratio = R.ratio_grid({1.0}).front();
    const double b = ratio * a;
    const std::string lbl = label("xstar", R.out(a)) + "|" + label("ratio", ratio);
    const auto density = cache_density(ue_density_angular_average(b, Scenario::uplink(a), cfg));
    if (b > 0.0) {
        R.analytic_curve(series(Provenance::AnalyticBound, lbl),
                         [&](double theta) { return coverage_from_density(density, b, theta, cfg.p_u, cfg.alpha_u); });
    }
    McCoverageSpec mc;
    mc.kind = InterfererKind::Ue;
    mc.random_receiver_angle = true;
    mc.link = LinkDistance::FromOrigin;
    R.mc_curve(series(Provenance::McPpp, lbl), Scenario::from_norms(a, b), mc);
}

std::string canonical_params(const ExperimentSpec& s) {
    std::ostringstream o;
    auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string("default"); };
    o << "id=" << s.id << ";lambda_a=" << format_number(s.config.lambda_a)
      << ";lambda_u=" << format_number(s.config.lambda_u) << ";p_a=" << format_number(s.config.p_a)
      << ";p_u=" << format_number(s.config.p_u) << ";alpha_a=" << format_number(s.config.alpha_a)
      << ";alpha_u=" << format_number(s.config.alpha_u) << ";xstar=" << opt(s.xstar_norm)
      << ";ratio=" << opt(s.xr_ratio) << ";theta=" << format_number(s.theta_db_min) << ":"
      << format_number(s.theta_db_step) << ":" << format_number(s.theta_db_max) << ";trials=" << s.trials
      << ";seed=" << s.seed << ";units=" << (s.natural_units ? "natural" : "absolute")
      << ";window=" << format_number(s.window_factor) << ";version=" << version_string();
    return o.str();
}

}  // namespace

void ExperimentSpec::validate() const {
    if (!is_experiment(id)) throw std::invalid_argument("id: unknown experiment '" + id + "'");
    config.validate();
    if (!(config.lambda_u > 0.0)) throw std::invalid_argument("lambda_u must be positive");
    if (xstar_norm && !(*xstar_norm >= 0.0)) throw std::invalid_argument("xstar_norm must be non-negative");
    if (xr_ratio && !(*xr_ratio >= 0.0)) throw std::invalid_argument("xr_ratio must be non-negative");
    if (!(theta_db_step > 0.0)) throw std::invalid_argument("theta_db_step must be positive");
    if (theta_db_max < theta_db_min) throw std::invalid_argument("theta_db_max must not be below theta_db_min");
    if (trials < 100) throw std::invalid_argument("trials must be at least 100");
    if (!(window_factor > 3.0)) throw std::invalid_argument("window_factor must exceed 3");
    if ((id == "fig7a" || id == "fig7b" || id == "fig8" || id == "fig10") && xstar_norm && *xstar_norm == 0.0)
        throw std::invalid_argument("xstar_norm must be positive for " + id);
}

const std::vector<ExperimentInfo>& list_experiments() { return kExperiments; }

bool is_experiment(std::string_view id) {
    return std::any_of(kExperiments.begin(), kExperiments.end(), [id](const auto& e) { return e.id == id; });
}

std::string_view version_string() { return VGUARD_VERSION; }

std::string fnv1a_hex(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_number(double v) {
    if (v == 0.0) return "0";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    const auto t0 = std::chrono::steady_clock::now();
    Runner runner(spec);
    const std::string& id = spec.id;
    if (id == "fig2") run_fig2(runner);
    else if (id == "fig3") run_fig3(runner);
    else if (id == "fig4") run_fig4(runner);
    else if (id == "fig5") run_fig5(runner);
    else if (id == "fig6") run_fig6(runner);
    else if (id == "fig7a") run_fig7(runner, 1.0, true);
    else if (id == "fig7b") run_fig7(runner, 10.0, false);
    else if (id == "fig8") run_fig8(runner);
    else if (id == "fig9") run_fig9(runner);
    else if (id == "fig10") run_fig10(runner);
    else run_custom(runner);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    ExperimentResult r;
    r.id = id;
    const std::string params = canonical_params(spec);
    r.params_hash = fnv1a_hex(params);
    r.rows = runner.take_rows();
    const NetworkConfig& used = runner.cfg();
    r.manifest = {
        {"experiment", id},
        {"version", std::string(version_string())},
        {"seed", std::to_string(spec.seed)},
        {"trials", std::to_string(spec.trials)},
        {"units", spec.natural_units ? "natural" : "absolute"},
        {"lambda_a", format_number(used.lambda_a)},
        {"lambda_u", format_number(used.lambda_u)},
        {"p_a", format_number(used.p_a)},
        {"p_u", format_number(used.p_u)},
        {"alpha_a", format_number(used.alpha_a)},
        {"alpha_u", format_number(used.alpha_u)},
        {"xstar_norm", spec.xstar_norm ? format_number(*spec.xstar_norm) : "default"},
        {"xr_ratio", spec.xr_ratio ? format_number(*spec.xr_ratio) : "default"},
        {"theta_db_min", format_number(spec.theta_db_min)},
        {"theta_db_max", format_number(spec.theta_db_max)},
        {"theta_db_step", format_number(spec.theta_db_step)},
        {"window_factor", format_number(spec.window_factor)},
        {"params", params},
        {"params_hash", r.params_hash},
        {"rows", std::to_string(r.rows.size())},
        {"wall_time_s", format_number(std::round(wall * 1000.0) / 1000.0)},
    };
    return r;
}

std::string to_csv(const ExperimentResult& result) {
    std::string out = "series,theta_db_or_r,value,stderr,params_hash\n";
    for (const auto& row : result.rows) {
        out += row.series;
        out += ',';
        out += format_number(row.x);
        out += ',';
        out += format_number(row.value);
        out += ',';
        out += format_number(row.std_error);
        out += ',';
        out += result.params_hash;
        out += '\n';
    }
    return out;
}

std::string to_manifest(const ExperimentResult& result) {
    std::string out;
    for (const auto& [k, v] : result.manifest) out += k + " = " + v + "\n";
    return out;
}

}  // namespace vguard
