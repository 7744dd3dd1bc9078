#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "halfsphere/sphere_core.hpp"

namespace halfsphere {

// Tolerance for all hull orientation predicates and membership tests.
inline constexpr double kHullEps = 1e-9;

struct Facet {
    UnitVector inward_normal;
    std::vector<int> vertex_indices;  // d indices into SphericalPolytope::vertices(), ascending
};

// Spherical polytope C cap S^d for a pointed full-dimensional cone C, stored by
// its extreme rays (vertices) and its simplicial facets.
class SphericalPolytope {
public:
    // Assembles a polytope from explicit parts. Throws DegenerateHull when a
    // facet does not carry exactly d vertex indices or an index is out of range.
    SphericalPolytope(Dim dim, std::vector<UnitVector> vertices, std::vector<std::size_t> input_indices,
                      std::vector<Facet> facets, UnitVector interior_direction);

    Dim dim() const { return dim_; }
    const std::vector<UnitVector>& vertices() const { return vertices_; }
    // Index of each vertex in the point sample the hull was built from.
    const std::vector<std::size_t>& vertex_input_indices() const { return input_indices_; }
    const std::vector<Facet>& facets() const { return facets_; }
    const UnitVector& interior_direction() const { return interior_; }

    // (d+1) x f0, one vertex per column.
    const Eigen::MatrixXd& vertex_matrix() const { return vertex_matrix_; }
    // f_{d-1} x (d+1), one inward normal per row.
    const Eigen::MatrixXd& normal_matrix() const { return normal_matrix_; }

private:
    Dim dim_;
    std::vector<UnitVector> vertices_;
    std::vector<std::size_t> input_indices_;
    std::vector<Facet> facets_;
    UnitVector interior_;
    Eigen::MatrixXd vertex_matrix_;
    Eigen::MatrixXd normal_matrix_;
};

// Direction c with <x, c> > 0 for every point: the normalized centroid when
// it works, otherwise the least-distance solution of <x_i, c> >= 1. nullopt
// when no such direction exists (the positive hull is not pointed).
std::optional<UnitVector> strictly_positive_direction(std::span<const UnitVector> points);

// conv_s of the points. Throws TooFewPoints for fewer than d+1 points and
// DegenerateHull when the points do not span R^{d+1} or their positive hull
// contains a line.
SphericalPolytope spherical_hull(Dim dim, std::span<const UnitVector> points);
SphericalPolytope spherical_hull(const PointSample& sample);

// <n, x> >= -kHullEps for every facet normal n.
bool contains(const SphericalPolytope& poly, const UnitVector& x);

struct ConeProjection {
    Vec point;
    double norm = 0.0;
};

// Euclidean projection of y onto pos(vertices) by NNLS over the vertex rays.
// When norm > 0 the geodesic distance from y to the polytope is arccos(norm).
// Throws IterationLimit after 50 * f0 active-set steps.
ConeProjection project_onto_cone(const SphericalPolytope& poly, const UnitVector& y);

}  // namespace halfsphere
