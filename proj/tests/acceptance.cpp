// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.
// Usage: acceptance [analytic|mc|all|<criterion id>]

#include "vguard/verify.hpp"

#include <cstdio>
#include <cstdlib>
#include <string>

int main(int argc, char** argv) {
    const std::string name = argc > 1 ? argv[1] : "all";
    vguard::VerifyOptions opts;
    const auto suite = vguard::parse_suite(name);
    if (!suite) {
        const int id = std::atoi(name.c_str());
        if (id <= 0) {
            std::fprintf(stderr, "usage: acceptance [analytic|mc|all|<criterion id>]\n");
            return 1;
        }
        const auto r = vguard::run_criterion(id, opts);
        std::printf("%s\n", vguard::format_result(r).c_str());
        return r.passed ? 0 : 1;
    }
    opts.on_result = [](const vguard::CriterionResult& r) {
        std::printf("%s\n", vguard::format_result(r).c_str());
        std::fflush(stdout);
    };
    const auto results = vguard::run_verification(*suite, opts);
    int failed = 0;
    for (const auto& r : results) failed += !r.passed;
    std::printf("%zu criteria, %d passed, %d failed\n", results.size(), static_cast<int>(results.size()) - failed,
                failed);
    return failed == 0 ? 0 : 1;
}
