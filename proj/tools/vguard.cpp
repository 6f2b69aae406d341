// vguard command-line driver.
//
//   vguard list
//   vguard run <experiment-id> [options]
//   vguard verify <analytic|mc|all> [options]
//
// Exit codes: 0 success, 1 usage, 2 numerical failure, 3 acceptance failure.

#include "vguard/experiments.hpp"
#include "vguard/numerics.hpp"
#include "vguard/verify.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kUsage = 1, kNumerical = 2, kAcceptance = 3 };

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << text;
    if (!out.flush()) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interference under Voronoi guard regions: equivalent densities, coverage and simulation"};
    app.fallthrough();
    app.require_subcommand(1);
    app.set_config("--config", "", "key = value file; command-line flags take precedence");
    app.allow_config_extras(CLI::config_extras_mode::error);

    vguard::ExperimentSpec spec;
    double xstar_norm = 0.0, xr_ratio = 0.0;
    std::string units = "natural";
    std::string out_dir = ".";
    int inject = 0;

    app.add_option("--lambda-a", spec.config.lambda_a, "AP density")->capture_default_str();
    app.add_option("--lambda-u", spec.config.lambda_u, "UE density (fig7a/7b, fig9, fig10 set it from lambda-a)")
        ->capture_default_str();
    app.add_option("--p-a", spec.config.p_a, "AP transmit power")->capture_default_str();
    app.add_option("--p-u", spec.config.p_u, "UE transmit power")->capture_default_str();
    app.add_option("--alpha-a", spec.config.alpha_a, "AP path-loss exponent")->capture_default_str();
    app.add_option("--alpha-u", spec.config.alpha_u, "UE path-loss exponent")->capture_default_str();
    auto* xstar_opt = app.add_option("--xstar-norm", xstar_norm, "|x*| (overrides the figure default)");
    auto* ratio_opt = app.add_option("--xr-ratio", xr_ratio, "|x_R| / |x*| (overrides the figure grid)");
    app.add_option("--theta-db-min", spec.theta_db_min)->capture_default_str();
    app.add_option("--theta-db-max", spec.theta_db_max)->capture_default_str();
    app.add_option("--theta-db-step", spec.theta_db_step)->capture_default_str();
    app.add_option("--trials", spec.trials, "Monte Carlo trials per series")->capture_default_str();
    auto* seed_opt = app.add_option("--seed", spec.seed, "master seed")->capture_default_str();
    app.add_option("--units", units, "distance units")
        ->check(CLI::IsMember({"natural", "absolute"}))
        ->capture_default_str();
    app.add_option("--threads", spec.threads, "worker threads (0 = all cores)")->capture_default_str();
    app.add_option("--out", out_dir, "output directory")->capture_default_str();
    app.add_option("--window-factor", spec.window_factor, "simulation window radius in units of 1/sqrt(lambda_a)")
        ->capture_default_str();
    app.add_option("--inject-failure", inject, "zero the tolerance of this criterion (verify only)");

    auto* list = app.add_subcommand("list", "list experiment ids");
    std::string experiment;
    auto* run = app.add_subcommand("run", "run one experiment and write <id>.csv and <id>.manifest.txt");
    run->add_option("experiment", experiment)->required();
    std::string suite_name;
    auto* verify = app.add_subcommand("verify", "run an acceptance suite");
    verify->add_option("suite", suite_name)->required()->check(CLI::IsMember({"analytic", "mc", "all"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    if (list->parsed()) {
        for (const auto& e : vguard::list_experiments())
            std::printf("%-7s %s\n", std::string(e.id).c_str(), std::string(e.description).c_str());
        return kOk;
    }

    try {
        if (run->parsed()) {
            spec.id = experiment;
            spec.natural_units = units == "natural";
            if (*xstar_opt) spec.xstar_norm = xstar_norm;
            if (*ratio_opt) spec.xr_ratio = xr_ratio;
            try {
                spec.validate();
            } catch (const std::invalid_argument& e) {
                std::fprintf(stderr, "error: %s\n", e.what());
                return kUsage;
            }
            const auto result = vguard::run_experiment(spec);
            const fs::path dir(out_dir);
            fs::create_directories(dir);
            write_file(dir / (experiment + ".csv"), vguard::to_csv(result));
            write_file(dir / (experiment + ".manifest.txt"), vguard::to_manifest(result));
            std::printf("wrote %zu rows to %s\n", result.rows.size(), (dir / (experiment + ".csv")).string().c_str());
            return kOk;
        }

        vguard::VerifyOptions opts;
        opts.threads = spec.threads;
        if (*seed_opt) opts.seed = spec.seed;
        const auto suite = *vguard::parse_suite(suite_name);
        if (inject != 0) {
            const auto ids = vguard::suite_criteria(suite);
            if (std::find(ids.begin(), ids.end(), inject) == ids.end()) {
                std::fprintf(stderr, "error: --inject-failure: no criterion %d in suite %s\n", inject,
                             suite_name.c_str());
                return kUsage;
            }
            opts.inject_failure = inject;
        }
        opts.on_result = [](const vguard::CriterionResult& r) {
            std::printf("%s\n", vguard::format_result(r).c_str());
            std::fflush(stdout);
        };
        const auto results = vguard::run_verification(suite, opts);
        int failed = 0;
        for (const auto& r : results) {
            if (r.passed) continue;
            ++failed;
            std::fprintf(stderr, "failed criterion %d: %s\n", r.id, r.title.c_str());
        }
        std::printf("%zu criteria, %zu passed, %d failed\n", results.size(), results.size() - failed, failed);
        return failed == 0 ? kOk : kAcceptance;
    } catch (const vguard::QuadratureError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kNumerical;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kNumerical;
    }
}
