#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "halfsphere/sphere_core.hpp"

namespace halfsphere {

enum class ExperimentMode { functionals, hausdorff_expectation, hausdorff_almost_sure, efron, cd_constant, sandwich };

std::string_view to_string(ExperimentMode mode);
std::optional<ExperimentMode> parse_mode(std::string_view text);

struct ExperimentConfig {
    ExperimentMode mode = ExperimentMode::functionals;
    Dim d{2};
    std::vector<std::uint64_t> n_grid;
    std::size_t reps = 2;
    std::uint64_t seed = 0;
    // Per-hull Monte Carlo budgets; 0 switches the corresponding estimate off
    // where it is optional (volume at d >= 3, mean width).
    std::size_t mc_volume_samples = 4000;
    std::size_t mc_width_samples = 4000;
    std::size_t mc_area_samples = 20000;  // d >= 4 only
    // Prefixes of one point sequence per replication instead of a fresh sample per n.
    bool nested = false;
    // C(d) estimator budgets (mode cd_constant).
    std::size_t cd_outer = 100000;
    std::size_t cd_inner = 64;
    // Not part of the report: results do not depend on it.
    int threads = 1;
};

// Throws InvalidConfig.
void validate(const ExperimentConfig& config);

struct EstimateRecord {
    std::string functional;
    int d = 0;
    std::uint64_t n = 0;
    std::size_t reps = 0;
    double mc_mean = 0.0;
    double mc_stderr = 0.0;
    std::optional<double> exact;
    std::optional<double> asymptotic;
    std::optional<double> z_score;  // present iff exact is
};

struct RunReport {
    ExperimentConfig config;
    std::vector<EstimateRecord> records;
    std::vector<std::string> invariant_violations;
    std::size_t degenerate_hulls = 0;
    std::optional<double> wall_time;  // seconds; filled in by callers that time the run
    std::string library_version;

    const EstimateRecord* find(std::string_view functional, std::uint64_t n) const;
};

RunReport run_functionals(const ExperimentConfig& config);
RunReport run_hausdorff(const ExperimentConfig& config);
RunReport run_efron(const ExperimentConfig& config);
RunReport run_sandwich(const ExperimentConfig& config);
RunReport run_cd_constant(const ExperimentConfig& config);
// Dispatches on config.mode.
RunReport run_experiment(const ExperimentConfig& config);

// Serialization. Numbers carry 17 significant digits; absent values are empty
// CSV fields and JSON nulls.
inline constexpr std::string_view kCsvHeader = "d,n,reps,functional,mc_mean,mc_stderr,exact,asymptotic,z_score,seed";
std::string to_csv(const RunReport& report);
std::string to_json(const RunReport& report);

}  // namespace halfsphere
