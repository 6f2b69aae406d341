#pragma once

#include "vguard/coverage.hpp"
#include "vguard/geometry.hpp"
#include "vguard/simulate.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace vguard {

/// Parameters of one figure run. Distances (|x*|) are in units of
/// 1 / sqrt(lambda_a) when `natural_units` is set, otherwise absolute.
struct ExperimentSpec {
    std::string id;
    NetworkConfig config{};
    /// Overrides the figure's |x*| (or its |x*| grid) when set.
    std::optional<double> xstar_norm;
    /// Overrides the figure's |x_R| / |x*| ratio grid when set.
    std::optional<double> xr_ratio;
    double theta_db_min{-10.0};
    double theta_db_max{20.0};
    double theta_db_step{1.0};
    std::size_t trials{10000};
    std::uint64_t seed{1};
    bool natural_units{true};
    double window_factor{30.0};
    unsigned threads{0};

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

struct CsvRow {
    std::string series;  // "<provenance>:<label>"
    double x;            // r or theta in dB
    double value;
    double std_error;
};

struct ExperimentResult {
    std::string id;
    std::string params_hash;
    std::vector<CsvRow> rows;
    /// Ordered key/value pairs for the run manifest.
    std::vector<std::pair<std::string, std::string>> manifest;
};

struct ExperimentInfo {
    std::string_view id;
    std::string_view description;
};

const std::vector<ExperimentInfo>& list_experiments();

bool is_experiment(std::string_view id);

ExperimentResult run_experiment(const ExperimentSpec& spec);

/// CSV text with header `series,theta_db_or_r,value,stderr,params_hash`.
std::string to_csv(const ExperimentResult& result);

/// `key = value` lines.
std::string to_manifest(const ExperimentResult& result);

/// 64-bit FNV-1a, hex encoded.
std::string fnv1a_hex(std::string_view text);

/// Shortest round-trip decimal for CSV cells.
std::string format_number(double v);

std::string_view version_string();

}  // namespace vguard
