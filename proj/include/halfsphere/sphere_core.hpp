#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "halfsphere/random_source.hpp"

namespace halfsphere {

inline constexpr int kMinDim = 2;
inline constexpr int kMaxDim = 6;
inline constexpr int kMaxAmbient = kMaxDim + 1;

// Small vectors of R^{d+1}; stack storage, no heap traffic in inner loops.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxAmbient, 1>;

// Dimension d of the sphere S^d, restricted to the supported range [2, 6].
class Dim {
public:
    explicit Dim(int d);

    int value() const { return d_; }
    // Dimension of the surrounding vector space, d + 1.
    int ambient() const { return d_ + 1; }

    friend bool operator==(Dim, Dim) = default;

private:
    int d_;
};

// A point of S^d. The constructor normalizes its input.
class UnitVector {
public:
    explicit UnitVector(const Vec& v);

    static UnitVector axis(int size, int k);

    const Vec& coords() const { return c_; }
    int size() const { return static_cast<int>(c_.size()); }
    double operator[](int i) const { return c_[i]; }

    double dot(const UnitVector& other) const { return c_.dot(other.c_); }
    double dot(const Vec& v) const { return c_.dot(v); }

    UnitVector operator-() const;

private:
    struct Normalized {};
    UnitVector(Vec v, Normalized) : c_(std::move(v)) {}

    Vec c_;
};

// Pole e of the halfsphere together with an orthonormal basis of e^perp.
class PoleFrame {
public:
    // e = last coordinate axis, basis = the remaining axes in order.
    static PoleFrame standard(Dim dim);
    // Completes an arbitrary pole to an orthonormal frame (deterministic).
    static PoleFrame from_pole(const UnitVector& pole);

    Dim dim() const { return dim_; }
    const UnitVector& pole() const { return pole_; }
    const std::vector<UnitVector>& basis() const { return basis_; }

    // Point (cos a) e + (sin a) b of the frame, b = sum_i w_i basis_i normalized.
    UnitVector at_angle(double alpha, const Vec& tangent_weights) const;

private:
    PoleFrame(Dim dim, UnitVector pole, std::vector<UnitVector> basis)
        : dim_(dim), pole_(std::move(pole)), basis_(std::move(basis)) {}

    Dim dim_;
    UnitVector pole_;
    std::vector<UnitVector> basis_;
};

// n points in the closed halfsphere {<x, e> >= 0}.
struct PointSample {
    Dim dim;
    PoleFrame pole;
    std::vector<UnitVector> points;
};

// Uniform point on the whole sphere S^{size-1}.
UnitVector sample_uniform_sphere(int size, RandomSource& rng);

// Uniform point on the closed halfsphere with pole `pole` (Gaussian, normalize, flip).
UnitVector sample_uniform_halfsphere_point(const UnitVector& pole, RandomSource& rng);

// n independent points with distribution mu. Throws TooFewPoints for n == 0.
PointSample sample_uniform_halfsphere(Dim dim, std::size_t n, const PoleFrame& pole, RandomSource& rng);

// arccos of the clamped inner product.
double geodesic_distance(const UnitVector& x, const UnitVector& y);

// Same angle as geodesic_distance, computed as 2 atan2(|x-y|, |x+y|); accurate near 0 and pi.
double stable_angle(const Vec& x, const Vec& y);

// mu(v^- cap S_e^+) = alpha / pi with alpha the angle between v and the pole.
double wedge_measure(const UnitVector& v, const PoleFrame& pole);

// Orthonormal basis of c^perp, completed from the coordinate axes.
std::vector<UnitVector> orthonormal_complement(const UnitVector& c);

// Central projection onto the affine hyperplane <z, c> = 1, in coordinates of
// an orthonormal basis of c^perp.
class CrossSectionChart {
public:
    static constexpr double kHorizonEps = 1e-9;

    explicit CrossSectionChart(const UnitVector& centre);

    const UnitVector& centre() const { return centre_; }
    const std::vector<UnitVector>& basis() const { return basis_; }

    // Coordinates of x/<x,c> - c. Throws NearHorizon when <x,c> <= kHorizonEps.
    Vec map(const UnitVector& x) const;
    UnitVector inverse(const Vec& chart_point) const;

private:
    UnitVector centre_;
    std::vector<UnitVector> basis_;
};

Vec cross_section_map(const UnitVector& x, const UnitVector& c);
UnitVector cross_section_inverse(const Vec& chart_point, const UnitVector& c);

// Random rotation of R^{d+1} fixing the pole of `frame`.
Eigen::MatrixXd random_rotation_fixing_pole(const PoleFrame& frame, RandomSource& rng);

UnitVector rotate(const Eigen::MatrixXd& rotation, const UnitVector& x);

}  // namespace halfsphere
