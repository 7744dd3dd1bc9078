#include <cmath>
#include <cstdio>
#include <string>

#include <json.hpp>

#include "halfsphere/experiments.hpp"

namespace halfsphere {
namespace {

std::string number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string optional_number(const std::optional<double>& x) { return x ? number(*x) : std::string(); }

nlohmann::ordered_json json_number(double x) {
    // JSON has no inf/nan.
    if (!std::isfinite(x)) return nullptr;
    return x;
}

nlohmann::ordered_json json_optional(const std::optional<double>& x) {
    return x ? json_number(*x) : nlohmann::ordered_json(nullptr);
}

}  // namespace

std::string to_csv(const RunReport& report) {
    std::string out(kCsvHeader);
    out += '\n';
    const std::string seed = std::to_string(report.config.seed);
    for (const EstimateRecord& r : report.records) {
        out += std::to_string(r.d) + ',' + std::to_string(r.n) + ',' + std::to_string(r.reps) + ',' + r.functional + ',' +
               number(r.mc_mean) + ',' + number(r.mc_stderr) + ',' + optional_number(r.exact) + ',' +
               optional_number(r.asymptotic) + ',' + optional_number(r.z_score) + ',' + seed + '\n';
    }
    return out;
}

std::string to_json(const RunReport& report) {
    const ExperimentConfig& c = report.config;
    nlohmann::ordered_json config;
    config["mode"] = std::string(to_string(c.mode));
    config["d"] = c.d.value();
    config["n_grid"] = c.n_grid;
    config["reps"] = c.reps;
    config["seed"] = c.seed;
    config["mc_volume_samples"] = c.mc_volume_samples;
    config["mc_width_samples"] = c.mc_width_samples;
    config["mc_area_samples"] = c.mc_area_samples;
    config["nested"] = c.nested;
    config["cd_outer"] = c.cd_outer;
    config["cd_inner"] = c.cd_inner;

    nlohmann::ordered_json records = nlohmann::ordered_json::array();
    for (const EstimateRecord& r : report.records) {
        nlohmann::ordered_json j;
        j["functional"] = r.functional;
        j["d"] = r.d;
        j["n"] = r.n;
        j["reps"] = r.reps;
        j["mc_mean"] = json_number(r.mc_mean);
        j["mc_stderr"] = json_number(r.mc_stderr);
        j["exact"] = json_optional(r.exact);
        j["asymptotic"] = json_optional(r.asymptotic);
        j["z_score"] = json_optional(r.z_score);
        records.push_back(std::move(j));
    }

    nlohmann::ordered_json out;
    out["library_version"] = report.library_version;
    out["config"] = std::move(config);
    out["records"] = std::move(records);
    out["invariant_violations"] = report.invariant_violations;
    out["degenerate_hulls"] = report.degenerate_hulls;
    out["wall_time"] = report.wall_time ? json_number(*report.wall_time) : nlohmann::ordered_json(nullptr);
    return out.dump(2) + '\n';
}

}  // namespace halfsphere
