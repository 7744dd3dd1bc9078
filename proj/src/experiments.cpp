#include "halfsphere/experiments.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <thread>

#include "halfsphere/conic_hull.hpp"
#include "halfsphere/errors.hpp"
#include "halfsphere/exact_formulas.hpp"
#include "halfsphere/functionals.hpp"
#include "halfsphere/random_source.hpp"
#include "halfsphere/version.hpp"

namespace halfsphere {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

// Sub-stream tags below a replication's stream.
constexpr std::uint64_t kPointsTag = 1;
constexpr std::uint64_t kVolumeTag = 2;
constexpr std::uint64_t kWidthTag = 3;
constexpr std::uint64_t kAreaTag = 4;
constexpr std::uint64_t kEfronVerticesTag = 5;
constexpr std::uint64_t kEfronVolumeTag = 6;

constexpr std::size_t kMaxViolationMessages = 50;
constexpr double kDegenerateFraction = 1e-3;

// Runs body(r) for r in [0, count) on `threads` workers; results land by index.
template <class Result, class Body>
std::vector<Result> replicate(std::size_t count, int threads, Body body) {
    std::vector<Result> out(count);
    const auto workers = static_cast<std::size_t>(std::clamp<long>(threads, 1, static_cast<long>(std::max<std::size_t>(count, 1))));
    if (workers == 1) {
        for (std::size_t r = 0; r < count; ++r) out[r] = body(static_cast<std::uint64_t>(r));
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t r = next++; r < count && !failed; r = next++) {
                try {
                    out[r] = body(static_cast<std::uint64_t>(r));
                } catch (...) {
                    if (!failed.exchange(true)) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return out;
}

struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            carry += (sum - t) + x;
        else
            carry += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + carry; }
};

struct Summary {
    double mean = kMissing;
    double stderr_ = kMissing;
    std::size_t count = 0;
};

// NaN entries (skipped replications) are left out.
Summary summarize(const std::vector<double>& xs) {
    CompensatedSum s;
    std::size_t count = 0;
    for (double x : xs) {
        if (std::isnan(x)) continue;
        s.add(x);
        ++count;
    }
    Summary out;
    out.count = count;
    if (count == 0) return out;
    out.mean = s.value() / static_cast<double>(count);
    if (count < 2) return out;
    CompensatedSum sq;
    for (double x : xs) {
        if (std::isnan(x)) continue;
        sq.add((x - out.mean) * (x - out.mean));
    }
    out.stderr_ = std::sqrt(sq.value() / static_cast<double>(count - 1) / static_cast<double>(count));
    return out;
}

EstimateRecord make_record(std::string name, const ExperimentConfig& c, std::uint64_t n, double mean, double se,
                           std::size_t count, std::optional<double> exact, std::optional<double> asymptotic) {
    EstimateRecord rec{std::move(name), c.d.value(), n, count, mean, se, exact, asymptotic, std::nullopt};
    if (exact) {
        const double diff = mean - *exact;
        if (se > 0.0)
            rec.z_score = diff / se;
        else
            rec.z_score = diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
    }
    return rec;
}

EstimateRecord make_record(std::string name, const ExperimentConfig& c, std::uint64_t n, const Summary& s,
                           std::optional<double> exact = std::nullopt,
                           std::optional<double> asymptotic = std::nullopt) {
    return make_record(std::move(name), c, n, s.mean, s.stderr_, s.count, exact, asymptotic);
}

// Frequency of an indicator with its binomial standard error.
Summary frequency(std::size_t hits, std::size_t count) {
    Summary s;
    s.count = count;
    if (count == 0) return s;
    const double p = static_cast<double>(hits) / static_cast<double>(count);
    s.mean = p;
    s.stderr_ = std::sqrt(p * (1.0 - p) / static_cast<double>(count));
    return s;
}

std::optional<double> optional_of(const std::function<double()>& f) {
    try {
        return f();
    } catch (const UnsupportedDimension&) {
        return std::nullopt;
    }
}

struct ViolationLog {
    std::vector<std::string> messages;
    std::size_t total = 0;
    void add(std::string m) {
        ++total;
        if (messages.size() < kMaxViolationMessages) messages.push_back(std::move(m));
    }
    void merge(const std::vector<std::string>& ms) {
        for (const auto& m : ms) add(m);
    }
    std::vector<std::string> finish() && {
        if (total > messages.size())
            messages.push_back(std::to_string(total - messages.size()) + " further violations not listed");
        return std::move(messages);
    }
};

std::string where(std::uint64_t r, std::uint64_t n) {
    return "replication " + std::to_string(r) + ", n = " + std::to_string(n) + ": ";
}

void check_combinatorics(const SphericalPolytope& hull, const PointSample& sample, std::uint64_t r, std::uint64_t n,
                         std::vector<std::string>& out) {
    const int d = hull.dim().value();
    const FaceCounts fc = face_counts(hull);
    if (2 * fc.ridges != d * fc.facets)
        out.push_back(where(r, n) + "2 f_{d-2} = " + std::to_string(2 * fc.ridges) + " but d f_{d-1} = " +
                      std::to_string(d * fc.facets));
    if (d == 2 && fc.vertices != fc.facets)
        out.push_back(where(r, n) + "f0 = " + std::to_string(fc.vertices) + " differs from f1 = " +
                      std::to_string(fc.facets));
    if (d == 3 && 2 * fc.vertices != fc.facets + 4)
        out.push_back(where(r, n) + "f0 = " + std::to_string(fc.vertices) + " but f2/2 + 2 = " +
                      std::to_string(fc.facets / 2 + 2));
    for (const UnitVector& x : sample.points) {
        if (!contains(hull, x)) {
            out.push_back(where(r, n) + "an input point lies outside the hull");
            break;
        }
    }
}

std::uint64_t max_n(const ExperimentConfig& c) { return *std::max_element(c.n_grid.begin(), c.n_grid.end()); }

// Point samples of one replication for every n of the grid.
class ReplicationSampler {
public:
    ReplicationSampler(const ExperimentConfig& c, std::uint64_t r)
        : config_(c), base_(c.seed, r), frame_(PoleFrame::standard(c.d)) {
        if (c.nested) {
            RandomSource rng = base_.fork(kPointsTag);
            sequence_ = sample_uniform_halfsphere(c.d, static_cast<std::size_t>(max_n(c)), frame_, rng);
        }
    }

    PointSample points(std::uint64_t n) const {
        if (sequence_) {
            PointSample s = *sequence_;
            s.points.erase(s.points.begin() + static_cast<std::ptrdiff_t>(n), s.points.end());
            return s;
        }
        RandomSource rng = base_.fork(n).fork(kPointsTag);
        return sample_uniform_halfsphere(config_.d, static_cast<std::size_t>(n), frame_, rng);
    }

    // Stream for a Monte Carlo estimate attached to the hull of size n.
    RandomSource stream(std::uint64_t n, std::uint64_t tag) const { return base_.fork(n).fork(tag); }

private:
    const ExperimentConfig& config_;
    RandomSource base_;
    PoleFrame frame_;
    std::optional<PointSample> sequence_;
};

RunReport empty_report(const ExperimentConfig& c) {
    RunReport report;
    report.config = c;
    report.library_version = kLibraryVersion;
    return report;
}

void finish_degenerate(RunReport& report, ViolationLog& log, std::size_t attempts) {
    if (static_cast<double>(report.degenerate_hulls) > kDegenerateFraction * static_cast<double>(attempts))
        log.add(std::to_string(report.degenerate_hulls) + " of " + std::to_string(attempts) +
                " hulls were degenerate, above the allowed fraction");
    report.invariant_violations = std::move(log).finish();
}

// ---------------------------------------------------------------- functionals

enum Slot { kFacets, kRidges, kVertices, kArea, kVolume, kMissed, kWidth, kWidthDual, kHausdorff, kSlots };

struct FunctionalsRep {
    std::vector<std::array<double, kSlots>> values;  // per n; NaN = skipped
    std::vector<std::string> violations;
    std::size_t degenerate = 0;
};

}  // namespace

std::string_view to_string(ExperimentMode mode) {
    switch (mode) {
        case ExperimentMode::functionals: return "functionals";
        case ExperimentMode::hausdorff_expectation: return "hausdorff_expectation";
        case ExperimentMode::hausdorff_almost_sure: return "hausdorff_almost_sure";
        case ExperimentMode::efron: return "efron";
        case ExperimentMode::cd_constant: return "cd_constant";
        case ExperimentMode::sandwich: return "sandwich";
    }
    return "unknown";
}

std::optional<ExperimentMode> parse_mode(std::string_view text) {
    for (auto m : {ExperimentMode::functionals, ExperimentMode::hausdorff_expectation,
                   ExperimentMode::hausdorff_almost_sure, ExperimentMode::efron, ExperimentMode::cd_constant,
                   ExperimentMode::sandwich})
        if (to_string(m) == text) return m;
    return std::nullopt;
}

void validate(const ExperimentConfig& c) {
    if (c.threads < 1) throw InvalidConfig("threads must be at least 1");
    if (c.mode == ExperimentMode::cd_constant) {
        if (c.cd_outer < 2 || c.cd_inner < 1) throw InvalidConfig("C(d) needs outer >= 2 and inner >= 1 samples");
        return;
    }
    if (c.reps < 2) throw InvalidConfig("reps must be at least 2");
    if (c.n_grid.empty()) throw InvalidConfig("the n grid is empty");
    const auto min_n = static_cast<std::uint64_t>(c.d.value() + 1);
    for (std::uint64_t n : c.n_grid)
        if (n < min_n) throw InvalidConfig("every n must be at least d + 1 = " + std::to_string(min_n));
    const bool nested_ok = c.mode == ExperimentMode::functionals || c.mode == ExperimentMode::hausdorff_expectation ||
                           c.mode == ExperimentMode::hausdorff_almost_sure;
    if (c.nested && !nested_ok) throw InvalidConfig("nested sampling applies to functionals and hausdorff runs only");
    const bool needs_volume = c.mode == ExperimentMode::efron || c.mode == ExperimentMode::sandwich;
    if (needs_volume && c.d.value() >= 3 && c.mc_volume_samples == 0)
        throw InvalidConfig("this mode needs volume samples at d >= 3");
}

const EstimateRecord* RunReport::find(std::string_view functional, std::uint64_t n) const {
    for (const auto& r : records)
        if (r.functional == functional && r.n == n) return &r;
    return nullptr;
}

RunReport run_functionals(const ExperimentConfig& c) {
    validate(c);
    const int d = c.d.value();
    const bool with_volume = d == 2 || c.mc_volume_samples > 0;
    const bool with_width = c.mc_width_samples > 0;
    const bool with_area = d <= 3 || c.mc_area_samples > 0;

    auto reps = replicate<FunctionalsRep>(c.reps, c.threads, [&](std::uint64_t r) {
        FunctionalsRep out;
        ReplicationSampler sampler(c, r);
        for (std::uint64_t n : c.n_grid) {
            std::array<double, kSlots> v;
            v.fill(kMissing);
            const PointSample sample = sampler.points(n);
            try {
                const SphericalPolytope hull = spherical_hull(sample);
                check_combinatorics(hull, sample, r, n, out.violations);
                const FaceCounts fc = face_counts(hull);
                v[kFacets] = fc.facets;
                v[kRidges] = fc.ridges;
                v[kVertices] = fc.vertices;
                if (with_area) {
                    RandomSource rng = sampler.stream(n, kAreaTag);
                    v[kArea] = surface_area(hull, rng, c.mc_area_samples).value;
                }
                if (with_volume) {
                    RandomSource rng = sampler.stream(n, kVolumeTag);
                    const VolumeValues vol = spherical_volume(hull, sample.pole, rng, c.mc_volume_samples);
                    v[kVolume] = vol.volume.value;
                    v[kMissed] = vol.missed_volume.value;
                }
                if (with_width) {
                    RandomSource rng = sampler.stream(n, kWidthTag);
                    const MeanWidthValues mw = mean_width(hull, rng, c.mc_width_samples);
                    v[kWidth] = mw.hit_count.value;
                    v[kWidthDual] = mw.dual_cone.value;
                }
                v[kHausdorff] = hausdorff_to_halfsphere(hull, sample.pole).value;
            } catch (const DegenerateHull&) {
                ++out.degenerate;
            }
            out.values.push_back(v);
        }
        return out;
    });

    RunReport report = empty_report(c);
    ViolationLog log;
    for (const auto& rep : reps) {
        log.merge(rep.violations);
        report.degenerate_hulls += rep.degenerate;
    }
    for (std::size_t i = 0; i < c.n_grid.size(); ++i) {
        const std::uint64_t n = c.n_grid[i];
        auto column = [&](Slot s) {
            std::vector<double> xs;
            xs.reserve(reps.size());
            for (const auto& rep : reps) xs.push_back(rep.values[i][static_cast<std::size_t>(s)]);
            return summarize(xs);
        };
        const double facets_exact = expected_facets(n, c.d).value;
        const double facets_limit = limit_facets(c.d).value;
        report.records.push_back(make_record("facets", c, n, column(kFacets), facets_exact, facets_limit));
        report.records.push_back(
            make_record("ridges", c, n, column(kRidges), d / 2.0 * facets_exact, d / 2.0 * facets_limit));
        const auto vexact = expected_vertices(n, c.d);
        report.records.push_back(make_record("vertices", c, n, column(kVertices),
                                             vexact ? std::optional<double>(vexact->value) : std::nullopt,
                                             optional_of([&] { return vertex_limit(c.d).value; })));
        if (with_area)
            report.records.push_back(make_record("surface_area", c, n, column(kArea),
                                                 expected_surface_area(n, c.d).value,
                                                 surface_area_asymptotic(n, c.d).value));
        if (with_volume) {
            report.records.push_back(make_record("volume", c, n, column(kVolume)));
            report.records.push_back(
                make_record("missed_volume", c, n, column(kMissed), std::nullopt,
                            optional_of([&] { return expected_missed_volume_asymptotic(n, c.d).value; })));
        }
        if (with_width) {
            const double exact = expected_mean_width(n, c.d).value;
            const double asym = mean_width_asymptotic(n, c.d).value;
            report.records.push_back(make_record("mean_width", c, n, column(kWidth), exact, asym));
            report.records.push_back(make_record("mean_width_dual", c, n, column(kWidthDual), exact, asym));
        }
        report.records.push_back(make_record("hausdorff", c, n, column(kHausdorff)));
    }
    finish_degenerate(report, log, c.reps * c.n_grid.size());
    return report;
}

// ---------------------------------------------------------------- hausdorff

namespace {

struct HausdorffRep {
    std::vector<double> delta;  // per n; NaN = degenerate
    std::vector<char> pole_outside;
    std::vector<std::string> violations;
    std::size_t degenerate = 0;
};

// Linear interpolation between order statistics of sorted data.
double quantile_sorted(const std::vector<double>& xs, double p) {
    const double h = p * static_cast<double>(xs.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, xs.size() - 1);
    return xs[lo] + (h - static_cast<double>(lo)) * (xs[hi] - xs[lo]);
}

// Quantile with a standard error from the distribution-free order-statistic
// 95% interval (half-width / 1.96).
Summary quantile_summary(const std::vector<double>& sorted, double p) {
    Summary s;
    s.count = sorted.size();
    if (sorted.empty()) return s;
    s.mean = quantile_sorted(sorted, p);
    const double m = static_cast<double>(sorted.size());
    const double spread = 1.96 * std::sqrt(m * p * (1.0 - p));
    const auto lo = static_cast<std::size_t>(std::clamp(std::floor(m * p - spread), 0.0, m - 1));
    const auto hi = static_cast<std::size_t>(std::clamp(std::ceil(m * p + spread), 0.0, m - 1));
    s.stderr_ = (sorted[hi] - sorted[lo]) / 2.0 / 1.96;
    return s;
}

std::string eps_label(int tenths) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%d.%d", tenths / 10, tenths % 10);
    return buf;
}

}  // namespace

RunReport run_hausdorff(const ExperimentConfig& c) {
    validate(c);
    if (c.mode != ExperimentMode::hausdorff_expectation && c.mode != ExperimentMode::hausdorff_almost_sure)
        throw InvalidConfig("run_hausdorff needs a hausdorff mode");
    const int d = c.d.value();

    auto reps = replicate<HausdorffRep>(c.reps, c.threads, [&](std::uint64_t r) {
        HausdorffRep out;
        ReplicationSampler sampler(c, r);
        for (std::uint64_t n : c.n_grid) {
            const PointSample sample = sampler.points(n);
            double delta = kMissing;
            char outside = 0;
            try {
                const SphericalPolytope hull = spherical_hull(sample);
                check_combinatorics(hull, sample, r, n, out.violations);
                const FunctionalValue h = hausdorff_to_halfsphere(hull, sample.pole);
                delta = h.value;
                outside = h.lower_bound_only;
            } catch (const DegenerateHull&) {
                ++out.degenerate;
            }
            out.delta.push_back(delta);
            out.pole_outside.push_back(outside);
        }
        return out;
    });

    RunReport report = empty_report(c);
    ViolationLog log;
    for (const auto& rep : reps) {
        log.merge(rep.violations);
        report.degenerate_hulls += rep.degenerate;
    }
    for (std::size_t i = 0; i < c.n_grid.size(); ++i) {
        const std::uint64_t n = c.n_grid[i];
        const double nn = static_cast<double>(n);
        std::vector<double> delta;
        std::size_t outside = 0;
        for (const auto& rep : reps) {
            delta.push_back(rep.delta[i]);
            outside += rep.pole_outside[i];
        }
        std::vector<double> valid;
        for (double x : delta)
            if (!std::isnan(x)) valid.push_back(x);
        report.records.push_back(make_record("hausdorff", c, n, summarize(delta)));
        report.records.push_back(make_record("pole_outside", c, n, frequency(outside, valid.size())));

        if (c.mode == ExperimentMode::hausdorff_expectation) {
            std::vector<double> scaled;
            for (double x : delta) scaled.push_back(nn * x);
            report.records.push_back(make_record("n_hausdorff", c, n, summarize(scaled)));
            std::vector<double> sorted;
            for (double x : valid) sorted.push_back(nn * x);
            std::sort(sorted.begin(), sorted.end());
            std::vector<double> sorted_log;
            for (double x : sorted) sorted_log.push_back(x / std::log(nn));
            for (auto [p, tag] : {std::pair{0.05, "q05"}, std::pair{0.5, "q50"}, std::pair{0.95, "q95"}}) {
                report.records.push_back(make_record(std::string("n_hausdorff_") + tag, c, n, quantile_summary(sorted, p)));
                report.records.push_back(
                    make_record(std::string("n_hausdorff_over_log_") + tag, c, n, quantile_summary(sorted_log, p)));
            }
            if (!sorted.empty()) {
                report.records.push_back(make_record("n_hausdorff_min", c, n, sorted.front(), 0.0, sorted.size(),
                                                     std::nullopt, std::nullopt));
                report.records.push_back(make_record("n_hausdorff_max", c, n, sorted.back(), 0.0, sorted.size(),
                                                     std::nullopt, std::nullopt));
            }
        } else {
            const double c_rate = omega(d + 1).value / (5.0 * omega(d).value);
            const double threshold = c_rate * std::log(nn) / nn;
            std::size_t above = 0;
            for (double x : valid) above += x >= threshold;
            report.records.push_back(make_record("hausdorff_above_log_rate", c, n, frequency(above, valid.size())));
            for (int tenths = 1; tenths <= 10; ++tenths) {
                const double bound = std::pow(nn, -(1.0 + tenths / 10.0));
                std::size_t below = 0;
                for (double x : valid) below += x <= bound;
                report.records.push_back(make_record("hausdorff_below_power_" + eps_label(tenths), c, n,
                                                     frequency(below, valid.size())));
            }
        }
    }
    finish_degenerate(report, log, c.reps * c.n_grid.size());
    return report;
}

// ---------------------------------------------------------------- efron

namespace {

struct EfronRep {
    std::vector<double> vertices_next;  // f0(P_{n+1})
    std::vector<double> volume;         // sigma(P_n)
    std::vector<std::string> violations;
    std::size_t degenerate = 0;
};

}  // namespace

RunReport run_efron(const ExperimentConfig& c) {
    validate(c);
    const PoleFrame frame = PoleFrame::standard(c.d);

    auto reps = replicate<EfronRep>(c.reps, c.threads, [&](std::uint64_t r) {
        EfronRep out;
        const RandomSource base(c.seed, r);
        for (std::uint64_t n : c.n_grid) {
            double f0 = kMissing;
            double vol = kMissing;
            // The two sets are independent replications.
            RandomSource rng_a = base.fork(kEfronVerticesTag).fork(n + 1);
            const PointSample a = sample_uniform_halfsphere(c.d, static_cast<std::size_t>(n + 1), frame, rng_a);
            try {
                const SphericalPolytope hull = spherical_hull(a);
                check_combinatorics(hull, a, r, n + 1, out.violations);
                f0 = face_counts(hull).vertices;
            } catch (const DegenerateHull&) {
                ++out.degenerate;
            }
            RandomSource rng_b = base.fork(kEfronVolumeTag).fork(n);
            const PointSample b = sample_uniform_halfsphere(c.d, static_cast<std::size_t>(n), frame, rng_b);
            try {
                const SphericalPolytope hull = spherical_hull(b);
                check_combinatorics(hull, b, r, n, out.violations);
                RandomSource mc = rng_b.fork(kVolumeTag);
                vol = spherical_volume(hull, frame, mc, c.mc_volume_samples).volume.value;
            } catch (const DegenerateHull&) {
                ++out.degenerate;
            }
            out.vertices_next.push_back(f0);
            out.volume.push_back(vol);
        }
        return out;
    });

    RunReport report = empty_report(c);
    ViolationLog log;
    for (const auto& rep : reps) {
        log.merge(rep.violations);
        report.degenerate_hulls += rep.degenerate;
    }
    const double scale = 2.0 / omega(c.d.ambient()).value;
    for (std::size_t i = 0; i < c.n_grid.size(); ++i) {
        const std::uint64_t n = c.n_grid[i];
        std::vector<double> f0;
        std::vector<double> vol;
        for (const auto& rep : reps) {
            f0.push_back(rep.vertices_next[i]);
            vol.push_back(rep.volume[i]);
        }
        const Summary sf = summarize(f0);
        const Summary sv = summarize(vol);
        const auto vexact = expected_vertices(n + 1, c.d);
        report.records.push_back(make_record("efron_vertices_next", c, n, sf,
                                             vexact ? std::optional<double>(vexact->value) : std::nullopt,
                                             optional_of([&] { return vertex_limit(c.d).value; })));
        report.records.push_back(make_record("efron_volume", c, n, sv));
        const double residual = efron_residual(sf.mean, sv.mean, n, c.d);
        const double se = std::hypot(sf.stderr_ / static_cast<double>(n + 1), scale * sv.stderr_);
        report.records.push_back(
            make_record("efron_residual", c, n, residual, se, std::min(sf.count, sv.count), 0.0, std::nullopt));
    }
    finish_degenerate(report, log, 2 * c.reps * c.n_grid.size());
    return report;
}

// ---------------------------------------------------------------- sandwich

namespace {

struct SandwichRep {
    std::vector<double> lower_ratio;  // (omega_{d+1}/2pi) delta / missed
    std::vector<double> upper_ratio;  // missed / (omega_d delta)
    std::vector<std::size_t> breaches;
    std::vector<std::string> violations;
    std::size_t degenerate = 0;
};

}  // namespace

RunReport run_sandwich(const ExperimentConfig& c) {
    validate(c);
    const int d = c.d.value();
    const double lower = omega(d + 1).value / (2.0 * kPi);
    const double upper = omega(d).value;

    auto reps = replicate<SandwichRep>(c.reps, c.threads, [&](std::uint64_t r) {
        SandwichRep out;
        ReplicationSampler sampler(c, r);
        for (std::uint64_t n : c.n_grid) {
            const PointSample sample = sampler.points(n);
            double lo_ratio = kMissing;
            double up_ratio = kMissing;
            std::size_t breach = 0;
            try {
                const SphericalPolytope hull = spherical_hull(sample);
                check_combinatorics(hull, sample, r, n, out.violations);
                RandomSource rng = sampler.stream(n, kVolumeTag);
                const VolumeValues vol = spherical_volume(hull, sample.pole, rng, c.mc_volume_samples);
                // A pole outside the hull yields the lower bound pi/2, which keeps both sides valid.
                const double delta = hausdorff_to_halfsphere(hull, sample.pole).value;
                const double missed = vol.missed_volume.value;
                const double slack = vol.missed_volume.std_error ? 4.0 * *vol.missed_volume.std_error : 1e-9;
                if (lower * delta > missed + slack) {
                    ++breach;
                    out.violations.push_back(where(r, n) + "missed volume below the lower sandwich bound");
                }
                if (missed > upper * delta + slack) {
                    ++breach;
                    out.violations.push_back(where(r, n) + "missed volume above the upper sandwich bound");
                }
                lo_ratio = missed > 0.0 ? lower * delta / missed : kMissing;
                up_ratio = delta > 0.0 ? missed / (upper * delta) : kMissing;
            } catch (const DegenerateHull&) {
                ++out.degenerate;
            }
            out.lower_ratio.push_back(lo_ratio);
            out.upper_ratio.push_back(up_ratio);
            out.breaches.push_back(breach);
        }
        return out;
    });

    RunReport report = empty_report(c);
    ViolationLog log;
    for (const auto& rep : reps) {
        log.merge(rep.violations);
        report.degenerate_hulls += rep.degenerate;
    }
    for (std::size_t i = 0; i < c.n_grid.size(); ++i) {
        const std::uint64_t n = c.n_grid[i];
        std::vector<double> lo;
        std::vector<double> up;
        std::size_t breaches = 0;
        for (const auto& rep : reps) {
            lo.push_back(rep.lower_ratio[i]);
            up.push_back(rep.upper_ratio[i]);
            breaches += rep.breaches[i];
        }
        report.records.push_back(make_record("sandwich_violations", c, n, static_cast<double>(breaches), 0.0, c.reps,
                                             std::nullopt, std::nullopt));
        report.records.push_back(make_record("sandwich_lower_ratio", c, n, summarize(lo)));
        report.records.push_back(make_record("sandwich_upper_ratio", c, n, summarize(up)));
    }
    finish_degenerate(report, log, c.reps * c.n_grid.size());
    return report;
}

// ---------------------------------------------------------------- C(d)

RunReport run_cd_constant(const ExperimentConfig& c) {
    validate(c);
    const ConstantEstimate est = c_d_monte_carlo(c.d, RandomSource(c.seed, 0), c.cd_outer, c.cd_inner, c.threads);
    RunReport report = empty_report(c);
    const auto exact = optional_of([&] { return c_d_closed_form(c.d).value; });
    report.records.push_back(
        make_record("cd_constant", c, 0, est.mean, est.std_error, est.samples, exact, std::nullopt));
    return report;
}

RunReport run_experiment(const ExperimentConfig& c) {
    switch (c.mode) {
        case ExperimentMode::functionals: return run_functionals(c);
        case ExperimentMode::hausdorff_expectation:
        case ExperimentMode::hausdorff_almost_sure: return run_hausdorff(c);
        case ExperimentMode::efron: return run_efron(c);
        case ExperimentMode::sandwich: return run_sandwich(c);
        case ExperimentMode::cd_constant: return run_cd_constant(c);
    }
    throw InvalidConfig("unknown mode");
}

}  // namespace halfsphere
