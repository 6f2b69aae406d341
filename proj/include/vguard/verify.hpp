#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vguard {

enum class Suite { Analytic, Mc, All };

std::optional<Suite> parse_suite(std::string_view name);

struct CriterionResult {
    int id;
    std::string title;
    bool passed;
    std::string measured;
    double seconds;
};

struct VerifyOptions {
    /// Criterion whose tolerance is zeroed, to exercise the failure path.
    std::optional<int> inject_failure;
    std::uint64_t seed{20240601};
    unsigned threads{0};
    /// Called as soon as each criterion finishes.
    std::function<void(const CriterionResult&)> on_result;
};

/// Criterion ids belonging to a suite, in execution order.
std::vector<int> suite_criteria(Suite suite);

std::vector<CriterionResult> run_verification(Suite suite, const VerifyOptions& options = {});

CriterionResult run_criterion(int id, const VerifyOptions& options = {});

/// One line: `PASS [07] title: measured (1.2 s)`.
std::string format_result(const CriterionResult& r);

}  // namespace vguard
