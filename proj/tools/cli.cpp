#include "cli.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "halfsphere/errors.hpp"
#include "halfsphere/exact_formulas.hpp"
#include "halfsphere/experiments.hpp"

namespace halfsphere {
namespace {

std::string number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

struct RunOptions {
    int d = 2;
    std::vector<std::uint64_t> n_grid;
    std::size_t reps = 0;
    std::uint64_t seed = 0;
    std::size_t mc_volume = 4000;
    std::size_t mc_width = 4000;
    std::size_t mc_area = 20000;
    std::size_t outer = 100000;
    std::size_t inner = 64;
    std::optional<int> threads;
    bool nested = false;
    bool almost_sure = false;
    bool timing = false;
    std::string out_prefix;
};

struct ExactOptions {
    int d = 2;
    std::string n;
    std::string functional;
    std::optional<double> cd_value;
};

int resolve_threads(const std::optional<int>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("HALFSPHERE_THREADS")) {
        try {
            std::size_t used = 0;
            const int t = std::stoi(env, &used);
            if (used == std::string(env).size() && t >= 1) return t;
        } catch (const std::exception&) {
        }
        throw InvalidConfig("HALFSPHERE_THREADS must be a positive integer");
    }
    return 1;
}

void add_common(CLI::App* cmd, RunOptions& o, bool grid) {
    cmd->add_option("--d", o.d, "sphere dimension (2..6)")->required();
    if (grid) {
        cmd->add_option("--n-grid", o.n_grid, "comma-separated sample sizes")->required()->delimiter(',');
        cmd->add_option("--reps", o.reps, "replications per sample size")->required();
    }
    cmd->add_option("--seed", o.seed, "64-bit seed")->required();
    cmd->add_option("--threads", o.threads, "worker threads (default: HALFSPHERE_THREADS or 1)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out", o.out_prefix, "write PREFIX.csv and PREFIX.json instead of CSV on stdout");
    cmd->add_flag("--timing", o.timing, "record wall time in the JSON report");
}

ExperimentConfig to_config(const RunOptions& o, ExperimentMode mode) {
    ExperimentConfig c;
    c.mode = mode;
    c.d = Dim(o.d);
    c.n_grid = o.n_grid;
    c.reps = o.reps;
    c.seed = o.seed;
    c.mc_volume_samples = o.mc_volume;
    c.mc_width_samples = o.mc_width;
    c.mc_area_samples = o.mc_area;
    c.nested = o.nested;
    c.cd_outer = o.outer;
    c.cd_inner = o.inner;
    c.threads = resolve_threads(o.threads);
    return c;
}

int run_and_write(const RunOptions& o, ExperimentMode mode, std::ostream& out, std::ostream& err) {
    const ExperimentConfig config = to_config(o, mode);
    const auto start = std::chrono::steady_clock::now();
    RunReport report = run_experiment(config);
    if (o.timing) report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const std::string csv = to_csv(report);
    if (o.out_prefix.empty()) {
        out << csv;
    } else {
        std::ofstream csv_file(o.out_prefix + ".csv", std::ios::binary);
        std::ofstream json_file(o.out_prefix + ".json", std::ios::binary);
        csv_file << csv;
        json_file << to_json(report);
        if (!csv_file || !json_file) {
            err << "error: cannot write " << o.out_prefix << ".csv/.json\n";
            return kExitFailure;
        }
    }
    for (const auto& v : report.invariant_violations) err << "invariant violation: " << v << '\n';
    return exit_code_for(report);
}

struct ExactRow {
    std::string kind;
    ExactValue value;
};

std::vector<ExactRow> exact_rows(const ExactOptions& o, std::optional<std::uint64_t> n) {
    const Dim d(o.d);
    std::vector<ExactRow> rows;
    const std::string& f = o.functional;
    if (f == "facets") {
        if (n) {
            rows.push_back({"exact", expected_facets(*n, d)});
        }
        rows.push_back({"limit", limit_facets(d)});
    } else if (f == "surface") {
        if (n) {
            rows.push_back({"exact", expected_surface_area(*n, d)});
            rows.push_back({"asymptotic", surface_area_asymptotic(*n, d)});
        } else {
            ExactValue w = omega(d.value());
            rows.push_back({"limit", w});
        }
    } else if (f == "meanwidth") {
        if (n) {
            rows.push_back({"exact", expected_mean_width(*n, d)});
            rows.push_back({"asymptotic", mean_width_asymptotic(*n, d)});
        } else {
            rows.push_back({"limit", ExactValue{0.5, 0.0, "mean_width_asymptotic"}});
        }
    } else if (f == "missed") {
        if (n)
            rows.push_back({"asymptotic", expected_missed_volume_asymptotic(*n, d, o.cd_value)});
        else
            rows.push_back({"limit", ExactValue{0.0, 0.0, "missed_volume_asymptotic"}});
    } else if (f == "vertices-limit") {
        if (n) {
            if (auto v = expected_vertices(*n, d)) rows.push_back({"exact", *v});
        }
        rows.push_back({"limit", vertex_limit(d, o.cd_value)});
    }
    return rows;
}

int run_exact(const ExactOptions& o, std::ostream& out) {
    std::optional<std::uint64_t> n;
    if (o.n != "inf") {
        if (o.n.empty() || o.n.find_first_not_of("0123456789") != std::string::npos)
            throw InvalidConfig("--n must be a nonnegative integer or inf");
        n = std::stoull(o.n);
    }
    const std::vector<ExactRow> rows = exact_rows(o, n);
    out << "functional,d,n,kind,value,abs_error_bound,formula_id\n";
    for (const auto& row : rows)
        out << o.functional << ',' << o.d << ',' << o.n << ',' << row.kind << ',' << number(row.value.value) << ','
            << number(row.value.abs_error_bound) << ',' << row.value.formula_id << '\n';
    return kExitOk;
}

}  // namespace

int exit_code_for(const RunReport& report) { return report.invariant_violations.empty() ? kExitOk : kExitInvariant; }

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Random spherical polytopes in a halfsphere: exact expectations and simulations", "halfsphere"};
    app.require_subcommand(1);

    ExactOptions exact;
    auto* exact_cmd = app.add_subcommand("exact", "evaluate an exact or asymptotic expectation");
    exact_cmd->add_option("--d", exact.d, "sphere dimension (2..6)")->required();
    exact_cmd->add_option("--n", exact.n, "sample size, or inf for the limit");
    exact_cmd->add_option("--functional", exact.functional, "facets|surface|meanwidth|missed|vertices-limit")
        ->required()
        ->check(CLI::IsMember({"facets", "surface", "meanwidth", "missed", "vertices-limit"}));
    exact_cmd->add_option("--cd-value", exact.cd_value, "C(d) estimate for dimensions without a closed form");

    RunOptions sim;
    auto* sim_cmd = app.add_subcommand("simulate", "replicated simulation of all functionals");
    add_common(sim_cmd, sim, true);
    sim_cmd->add_option("--mc-volume", sim.mc_volume, "volume Monte Carlo samples per hull (d >= 3, 0 = off)");
    sim_cmd->add_option("--mc-width", sim.mc_width, "mean width Monte Carlo samples per hull (0 = off)");
    sim_cmd->add_option("--mc-area", sim.mc_area, "surface area Monte Carlo samples per hull (d >= 4)");
    sim_cmd->add_flag("--nested", sim.nested, "prefixes of one point sequence instead of fresh samples per n");

    RunOptions haus;
    auto* haus_cmd = app.add_subcommand("hausdorff", "Hausdorff distance studies");
    add_common(haus_cmd, haus, true);
    haus_cmd->add_flag("--nested", haus.nested, "prefixes of one point sequence instead of fresh samples per n");
    haus_cmd->add_flag("--almost-sure", haus.almost_sure, "indicator frequencies instead of expectation summaries");

    RunOptions efron;
    auto* efron_cmd = app.add_subcommand("efron", "check of the vertex/volume identity");
    add_common(efron_cmd, efron, true);
    efron_cmd->add_option("--mc-volume", efron.mc_volume, "volume Monte Carlo samples per hull (d >= 3)");

    RunOptions sandwich;
    auto* sandwich_cmd = app.add_subcommand("sandwich", "missed volume versus Hausdorff distance bounds");
    add_common(sandwich_cmd, sandwich, true);
    sandwich_cmd->add_option("--mc-volume", sandwich.mc_volume, "volume Monte Carlo samples per hull (d >= 3)");

    RunOptions cd;
    auto* cd_cmd = app.add_subcommand("cd", "Monte Carlo estimate of the missed-volume constant C(d)");
    add_common(cd_cmd, cd, false);
    cd_cmd->add_option("--outer", cd.outer, "outer samples");
    cd_cmd->add_option("--inner", cd.inner, "inner samples per outer sample");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (exact_cmd->parsed()) {
            if (exact.n.empty() && exact.functional != "vertices-limit") throw InvalidConfig("--n is required");
            if (exact.n.empty()) exact.n = "inf";
            return run_exact(exact, out);
        }
        if (sim_cmd->parsed()) return run_and_write(sim, ExperimentMode::functionals, out, err);
        if (haus_cmd->parsed())
            return run_and_write(haus,
                                 haus.almost_sure ? ExperimentMode::hausdorff_almost_sure
                                                  : ExperimentMode::hausdorff_expectation,
                                 out, err);
        if (efron_cmd->parsed()) return run_and_write(efron, ExperimentMode::efron, out, err);
        if (sandwich_cmd->parsed()) return run_and_write(sandwich, ExperimentMode::sandwich, out, err);
        if (cd_cmd->parsed()) return run_and_write(cd, ExperimentMode::cd_constant, out, err);
    } catch (const InvalidDimension& e) {
        err << "error: " << e.what() << '\n';
        return kExitUnsupported;
    } catch (const UnsupportedDimension& e) {
        err << "error: " << e.what() << '\n';
        return kExitUnsupported;
    } catch (const InvalidConfig& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace halfsphere
