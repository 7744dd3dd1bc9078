#include "halfsphere/conic_hull.hpp"

#include <algorithm>
#include <map>
#include <string>

#include <Eigen/QR>

#include "halfsphere/errors.hpp"
#include "halfsphere/nnls.hpp"

namespace halfsphere {
namespace {

constexpr double kPositiveMargin = 1e-9;
constexpr double kRankEps = 1e-10;

using Ridge = std::vector<int>;

struct WorkFacet {
    std::vector<int> verts;  // input indices, ascending
    Vec normal;
};

// Unit normal of the hyperplane spanned by the given points, oriented towards `inside`.
Vec hyperplane_normal(std::span<const UnitVector> points, const std::vector<int>& verts, const Vec& inside) {
    const int n = points.front().size();
    const int k = static_cast<int>(verts.size());
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxAmbient, kMaxAmbient> a(n, k);
    for (int j = 0; j < k; ++j) a.col(j) = points[static_cast<std::size_t>(verts[static_cast<std::size_t>(j)])].coords();
    Eigen::HouseholderQR<decltype(a)> qr(a);
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxAmbient, kMaxAmbient> q = qr.householderQ();
    Vec normal = q.col(n - 1);
    normal.normalize();
    if (normal.dot(inside) < 0.0) normal = -normal;
    return normal;
}

// d+1 linearly independent points chosen by largest residual against the span so far.
std::vector<int> initial_simplex(std::span<const UnitVector> points, int ambient) {
    std::vector<Vec> residual;
    residual.reserve(points.size());
    for (const UnitVector& p : points) residual.push_back(p.coords());
    std::vector<int> chosen;
    std::vector<bool> used(points.size(), false);
    for (int step = 0; step < ambient; ++step) {
        int best = -1;
        double best_norm = kRankEps;
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (used[i]) continue;
            const double r = residual[i].norm();
            if (r > best_norm) {
                best_norm = r;
                best = static_cast<int>(i);
            }
        }
        if (best < 0) throw DegenerateHull("points do not span a full-dimensional cone");
        used[static_cast<std::size_t>(best)] = true;
        chosen.push_back(best);
        const Vec q = residual[static_cast<std::size_t>(best)] / best_norm;
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (!used[i]) residual[i] -= q.dot(residual[i]) * q;
        }
    }
    return chosen;
}

Ridge drop(const std::vector<int>& verts, std::size_t k) {
    Ridge r;
    r.reserve(verts.size() - 1);
    for (std::size_t j = 0; j < verts.size(); ++j)
        if (j != k) r.push_back(verts[j]);
    return r;
}

}  // namespace

SphericalPolytope::SphericalPolytope(Dim dim, std::vector<UnitVector> vertices, std::vector<std::size_t> input_indices,
                                     std::vector<Facet> facets, UnitVector interior_direction)
    : dim_(dim),
      vertices_(std::move(vertices)),
      input_indices_(std::move(input_indices)),
      facets_(std::move(facets)),
      interior_(std::move(interior_direction)) {
    const int n = dim_.ambient();
    if (input_indices_.size() != vertices_.size()) throw DegenerateHull("vertex/input index count mismatch");
    vertex_matrix_.resize(n, static_cast<Eigen::Index>(vertices_.size()));
    for (std::size_t j = 0; j < vertices_.size(); ++j) {
        if (vertices_[j].size() != n) throw DegenerateHull("vertex has wrong coordinate count");
        vertex_matrix_.col(static_cast<Eigen::Index>(j)) = vertices_[j].coords();
    }
    normal_matrix_.resize(static_cast<Eigen::Index>(facets_.size()), n);
    for (std::size_t i = 0; i < facets_.size(); ++i) {
        const Facet& f = facets_[i];
        if (static_cast<int>(f.vertex_indices.size()) != dim_.value())
            throw DegenerateHull("facet is not simplicial");
        for (int v : f.vertex_indices) {
            if (v < 0 || static_cast<std::size_t>(v) >= vertices_.size()) throw DegenerateHull("facet vertex out of range");
        }
        normal_matrix_.row(static_cast<Eigen::Index>(i)) = f.inward_normal.coords().transpose();
    }
}

std::optional<UnitVector> strictly_positive_direction(std::span<const UnitVector> points) {
    if (points.empty()) return std::nullopt;
    const int n = points.front().size();
    Vec sum = Vec::Zero(n);
    for (const UnitVector& p : points) sum += p.coords();
    if (sum.norm() > 1e-12) {
        const UnitVector c(sum);
        double margin = 1.0;
        for (const UnitVector& p : points) margin = std::min(margin, p.dot(c));
        if (margin > kPositiveMargin) return c;
    }
    Eigen::MatrixXd g(static_cast<Eigen::Index>(points.size()), n);
    for (std::size_t i = 0; i < points.size(); ++i) g.row(static_cast<Eigen::Index>(i)) = points[i].coords().transpose();
    const auto c = least_distance(g, Eigen::VectorXd::Ones(g.rows()));
    if (!c || !(c->norm() > 0.0) || 1.0 / c->norm() <= 1e-12) return std::nullopt;
    const UnitVector dir{Vec(*c)};
    for (const UnitVector& p : points) {
        if (p.dot(dir) <= 0.0) return std::nullopt;
    }
    return dir;
}

SphericalPolytope spherical_hull(Dim dim, std::span<const UnitVector> points) {
    const int d = dim.value();
    const int ambient = dim.ambient();
    if (static_cast<int>(points.size()) < ambient)
        throw TooFewPoints("need at least d+1 = " + std::to_string(ambient) + " points");
    for (const UnitVector& p : points) {
        if (p.size() != ambient) throw InvalidDimension("point has wrong coordinate count for this dimension");
    }
    const auto centre = strictly_positive_direction(points);
    if (!centre) throw DegenerateHull("positive hull is not pointed: no strictly positive direction exists");

    const std::vector<int> simplex = initial_simplex(points, ambient);
    Vec inside = Vec::Zero(ambient);
    for (int i : simplex) inside += points[static_cast<std::size_t>(i)].coords();
    inside.normalize();

    std::vector<WorkFacet> facets;
    for (std::size_t k = 0; k < simplex.size(); ++k) {
        WorkFacet f;
        f.verts = drop(simplex, k);
        std::sort(f.verts.begin(), f.verts.end());
        f.normal = hyperplane_normal(points, f.verts, inside);
        facets.push_back(std::move(f));
    }

    std::vector<bool> in_simplex(points.size(), false);
    for (int i : simplex) in_simplex[static_cast<std::size_t>(i)] = true;

    std::vector<std::size_t> visible;
    std::map<Ridge, int> ridge_count;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (in_simplex[i]) continue;
        const Vec& x = points[i].coords();
        visible.clear();
        for (std::size_t f = 0; f < facets.size(); ++f) {
            // Ties (|<n,x>| <= eps) count as beneath: the earlier facet wins.
            if (facets[f].normal.dot(x) < -kHullEps) visible.push_back(f);
        }
        if (visible.empty()) continue;

        ridge_count.clear();
        for (std::size_t f : visible) {
            for (std::size_t k = 0; k < facets[f].verts.size(); ++k) ++ridge_count[drop(facets[f].verts, k)];
        }
        std::vector<WorkFacet> created;
        for (const auto& [ridge, count] : ridge_count) {
            if (count != 1) continue;
            WorkFacet nf;
            nf.verts = ridge;
            nf.verts.push_back(static_cast<int>(i));
            std::sort(nf.verts.begin(), nf.verts.end());
            nf.normal = hyperplane_normal(points, nf.verts, inside);
            created.push_back(std::move(nf));
        }
        if (created.empty()) throw DegenerateHull("point sees the whole hull: cone is not pointed");
        std::vector<bool> dead(facets.size(), false);
        for (std::size_t f : visible) dead[f] = true;
        std::vector<WorkFacet> kept;
        kept.reserve(facets.size() - visible.size() + created.size());
        for (std::size_t f = 0; f < facets.size(); ++f)
            if (!dead[f]) kept.push_back(std::move(facets[f]));
        for (WorkFacet& nf : created) kept.push_back(std::move(nf));
        facets = std::move(kept);
    }

    // Closed simplicial boundary: every ridge in exactly two facets.
    ridge_count.clear();
    for (const WorkFacet& f : facets)
        for (std::size_t k = 0; k < f.verts.size(); ++k) ++ridge_count[drop(f.verts, k)];
    for (const auto& [ridge, count] : ridge_count) {
        if (count != 2) throw DegenerateHull("numerically inconsistent hull boundary");
    }

    std::vector<int> used;
    for (const WorkFacet& f : facets) used.insert(used.end(), f.verts.begin(), f.verts.end());
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());
    std::map<int, int> remap;
    std::vector<UnitVector> vertices;
    std::vector<std::size_t> input_indices;
    for (int idx : used) {
        remap[idx] = static_cast<int>(vertices.size());
        vertices.push_back(points[static_cast<std::size_t>(idx)]);
        input_indices.push_back(static_cast<std::size_t>(idx));
    }
    std::sort(facets.begin(), facets.end(), [](const WorkFacet& a, const WorkFacet& b) { return a.verts < b.verts; });
    std::vector<Facet> out;
    out.reserve(facets.size());
    for (const WorkFacet& f : facets) {
        std::vector<int> vi;
        vi.reserve(static_cast<std::size_t>(d));
        for (int v : f.verts) vi.push_back(remap[v]);
        out.push_back(Facet{UnitVector(f.normal), std::move(vi)});
    }
    return SphericalPolytope(dim, std::move(vertices), std::move(input_indices), std::move(out), *centre);
}

SphericalPolytope spherical_hull(const PointSample& sample) {
    return spherical_hull(sample.dim, std::span<const UnitVector>(sample.points));
}

bool contains(const SphericalPolytope& poly, const UnitVector& x) {
    const Eigen::MatrixXd& normals = poly.normal_matrix();
    for (Eigen::Index i = 0; i < normals.rows(); ++i) {
        if (normals.row(i).dot(x.coords()) < -kHullEps) return false;
    }
    return true;
}

ConeProjection project_onto_cone(const SphericalPolytope& poly, const UnitVector& y) {
    const Eigen::MatrixXd& a = poly.vertex_matrix();
    const NnlsResult sol = solve_nnls(a, Eigen::VectorXd(y.coords()), 50 * static_cast<int>(a.cols()));
    ConeProjection out;
    out.point = Vec(a * sol.x);
    out.norm = std::min(1.0, out.point.norm());
    return out;
}

}  // namespace halfsphere
