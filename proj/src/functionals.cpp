#include "halfsphere/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <vector>

#include <Eigen/LU>
#include <Eigen/QR>

#include "halfsphere/errors.hpp"
#include "halfsphere/exact_formulas.hpp"

namespace halfsphere {
namespace {

constexpr double kPi = std::numbers::pi;

// Angle at `apex` of the spherical triangle (apex, b, c).
double vertex_angle(const Vec& apex, const Vec& b, const Vec& c) {
    Vec tb = b - apex.dot(b) * apex;
    Vec tc = c - apex.dot(c) * apex;
    tb.normalize();
    tc.normalize();
    return stable_angle(tb, tc);
}

double girard_triangle(const Vec& a, const Vec& b, const Vec& c) {
    return vertex_angle(a, b, c) + vertex_angle(b, c, a) + vertex_angle(c, a, b) - kPi;
}

// Cyclic vertex order of a d = 2 polygon, walked along its edges.
std::vector<int> polygon_cycle(const SphericalPolytope& poly) {
    std::vector<std::vector<int>> adj(poly.vertices().size());
    for (const Facet& f : poly.facets()) {
        adj[static_cast<std::size_t>(f.vertex_indices[0])].push_back(f.vertex_indices[1]);
        adj[static_cast<std::size_t>(f.vertex_indices[1])].push_back(f.vertex_indices[0]);
    }
    for (const auto& a : adj) {
        if (a.size() != 2) throw DegenerateHull("polygon vertex without exactly two edges");
    }
    std::vector<int> cycle{0};
    int prev = -1;
    int cur = 0;
    while (true) {
        const auto& a = adj[static_cast<std::size_t>(cur)];
        const int next = a[0] != prev ? a[0] : a[1];
        if (next == 0) break;
        cycle.push_back(next);
        prev = cur;
        cur = next;
        if (cycle.size() > poly.vertices().size()) throw DegenerateHull("polygon edges do not form one cycle");
    }
    if (cycle.size() != poly.vertices().size()) throw DegenerateHull("polygon edges do not form one cycle");
    return cycle;
}

FunctionalValue mc_value(FunctionalKind kind, double value, double se, std::size_t n) {
    return FunctionalValue{kind, value, se, n, false};
}

}  // namespace

std::string_view to_string(FunctionalKind kind) {
    switch (kind) {
        case FunctionalKind::facets: return "facets";
        case FunctionalKind::ridges: return "ridges";
        case FunctionalKind::vertices: return "vertices";
        case FunctionalKind::surface_area: return "surface_area";
        case FunctionalKind::volume: return "volume";
        case FunctionalKind::missed_volume: return "missed_volume";
        case FunctionalKind::mean_width: return "mean_width";
        case FunctionalKind::hausdorff: return "hausdorff";
    }
    return "unknown";
}

FaceCounts face_counts(const SphericalPolytope& poly) {
    std::map<std::vector<int>, int> ridges;
    for (const Facet& f : poly.facets()) {
        for (std::size_t k = 0; k < f.vertex_indices.size(); ++k) {
            std::vector<int> r;
            for (std::size_t j = 0; j < f.vertex_indices.size(); ++j)
                if (j != k) r.push_back(f.vertex_indices[j]);
            std::sort(r.begin(), r.end());
            ++ridges[r];
        }
    }
    return FaceCounts{static_cast<int>(poly.vertices().size()), static_cast<int>(ridges.size()),
                      static_cast<int>(poly.facets().size())};
}

FunctionalValue surface_area(const SphericalPolytope& poly, RandomSource& rng, std::size_t mc_samples) {
    const int d = poly.dim().value();
    const auto& verts = poly.vertices();
    auto vert = [&](int i) -> const Vec& { return verts[static_cast<std::size_t>(i)].coords(); };

    if (d == 2) {
        double total = 0.0;
        for (const Facet& f : poly.facets()) total += stable_angle(vert(f.vertex_indices[0]), vert(f.vertex_indices[1]));
        return FunctionalValue{FunctionalKind::surface_area, total, std::nullopt, std::nullopt, false};
    }
    if (d == 3) {
        double total = 0.0;
        for (const Facet& f : poly.facets())
            total += girard_triangle(vert(f.vertex_indices[0]), vert(f.vertex_indices[1]), vert(f.vertex_indices[2]));
        return FunctionalValue{FunctionalKind::surface_area, total, std::nullopt, std::nullopt, false};
    }

    // d >= 4: solid angle of each facet cone inside its own d-dimensional span.
    const int n = poly.dim().ambient();
    const double sphere_measure = omega(d).value;
    const auto& facets = poly.facets();
    std::vector<double> weight(facets.size());
    for (std::size_t i = 0; i < facets.size(); ++i) {
        Vec centre = Vec::Zero(n);
        for (int v : facets[i].vertex_indices) centre += vert(v);
        centre.normalize();
        double radius = 0.0;
        for (int v : facets[i].vertex_indices) radius = std::max(radius, stable_angle(centre, vert(v)));
        // Cap size proxy; the cap of this radius around the centroid covers the facet.
        weight[i] = 1.0 - std::cos(std::min(radius, kPi / 2.0));
    }
    const double weight_sum = std::max(1e-300, std::accumulate(weight.begin(), weight.end(), 0.0));

    double total = 0.0;
    double variance = 0.0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < facets.size(); ++i) {
        const auto budget = std::max<std::size_t>(
            64, static_cast<std::size_t>(std::llround(static_cast<double>(mc_samples) * weight[i] / weight_sum)));
        Eigen::MatrixXd a(n, d);
        for (int j = 0; j < d; ++j) a.col(j) = vert(facets[i].vertex_indices[static_cast<std::size_t>(j)]);
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
        const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, d);
        const Eigen::MatrixXd coeff = (q.transpose() * a).inverse();
        RandomSource facet_rng = rng.fork(i);
        std::size_t hits = 0;
        Eigen::VectorXd g(d);
        for (std::size_t s = 0; s < budget; ++s) {
            for (int j = 0; j < d; ++j) g[j] = facet_rng.normal();
            if ((coeff * g).minCoeff() >= 0.0) ++hits;
        }
        const double p = static_cast<double>(hits) / static_cast<double>(budget);
        total += sphere_measure * p;
        variance += sphere_measure * sphere_measure * p * (1.0 - p) / static_cast<double>(budget);
        used += budget;
    }
    return mc_value(FunctionalKind::surface_area, total, std::sqrt(variance), used);
}

VolumeValues spherical_volume(const SphericalPolytope& poly, const PoleFrame& pole, RandomSource& rng,
                              std::size_t mc_samples) {
    const int d = poly.dim().value();
    const double half = omega(d + 1).value / 2.0;

    if (d == 2) {
        const std::vector<int> cycle = polygon_cycle(poly);
        const std::size_t k = cycle.size();
        const auto& verts = poly.vertices();
        double angle_sum = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            const Vec& prev = verts[static_cast<std::size_t>(cycle[(i + k - 1) % k])].coords();
            const Vec& cur = verts[static_cast<std::size_t>(cycle[i])].coords();
            const Vec& next = verts[static_cast<std::size_t>(cycle[(i + 1) % k])].coords();
            angle_sum += vertex_angle(cur, prev, next);
        }
        const double area = angle_sum - static_cast<double>(k - 2) * kPi;
        return VolumeValues{
            FunctionalValue{FunctionalKind::volume, area, std::nullopt, std::nullopt, false},
            FunctionalValue{FunctionalKind::missed_volume, half - area, std::nullopt, std::nullopt, false}};
    }

    if (mc_samples == 0) throw InvalidConfig("volume Monte Carlo needs at least one sample");
    std::size_t inside = 0;
    for (std::size_t s = 0; s < mc_samples; ++s) {
        if (contains(poly, sample_uniform_halfsphere_point(pole.pole(), rng))) ++inside;
    }
    const double p = static_cast<double>(inside) / static_cast<double>(mc_samples);
    const double se = half * std::sqrt(p * (1.0 - p) / static_cast<double>(mc_samples));
    return VolumeValues{mc_value(FunctionalKind::volume, half * p, se, mc_samples),
                        mc_value(FunctionalKind::missed_volume, half * (1.0 - p), se, mc_samples)};
}

MeanWidthValues mean_width(const SphericalPolytope& poly, RandomSource& rng, std::size_t mc_samples) {
    if (mc_samples == 0) throw InvalidConfig("mean width Monte Carlo needs at least one sample");
    const int n = poly.dim().ambient();
    const Eigen::MatrixXd& vm = poly.vertex_matrix();
    const double samples = static_cast<double>(mc_samples);

    RandomSource hit_rng = rng.fork(1);
    std::size_t hits = 0;
    for (std::size_t s = 0; s < mc_samples; ++s) {
        const UnitVector v = sample_uniform_sphere(n, hit_rng);
        bool pos = false;
        bool neg = false;
        bool zero = false;
        for (Eigen::Index j = 0; j < vm.cols(); ++j) {
            const double t = vm.col(j).dot(v.coords());
            pos |= t > 0.0;
            neg |= t < 0.0;
            zero |= t == 0.0;
        }
        // Tangency counts as a hit.
        if ((pos && neg) || zero) ++hits;
    }
    const double ph = static_cast<double>(hits) / samples;

    RandomSource dual_rng = rng.fork(2);
    std::size_t in_dual = 0;
    for (std::size_t s = 0; s < mc_samples; ++s) {
        const UnitVector v = sample_uniform_sphere(n, dual_rng);
        bool all_nonneg = true;
        for (Eigen::Index j = 0; j < vm.cols() && all_nonneg; ++j) all_nonneg = vm.col(j).dot(v.coords()) >= 0.0;
        if (all_nonneg) ++in_dual;
    }
    const double pd = static_cast<double>(in_dual) / samples;

    return MeanWidthValues{
        mc_value(FunctionalKind::mean_width, 0.5 * ph, 0.5 * std::sqrt(ph * (1.0 - ph) / samples), mc_samples),
        mc_value(FunctionalKind::mean_width, 0.5 - pd, std::sqrt(pd * (1.0 - pd) / samples), mc_samples)};
}

FunctionalValue hausdorff_to_halfsphere(const SphericalPolytope& poly, const PoleFrame& pole) {
    double delta = 0.0;
    for (const Facet& f : poly.facets()) {
        const double c = f.inward_normal.dot(pole.pole());
        if (c < -kHullEps) {
            return FunctionalValue{FunctionalKind::hausdorff, kPi / 2.0, std::nullopt, std::nullopt, true};
        }
        delta = std::max(delta, std::acos(std::clamp(c, -1.0, 1.0)));
    }
    return FunctionalValue{FunctionalKind::hausdorff, delta, std::nullopt, std::nullopt, false};
}

}  // namespace halfsphere
