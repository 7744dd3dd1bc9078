#include "halfsphere/sphere_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/QR>

#include "halfsphere/errors.hpp"

namespace halfsphere {

Dim::Dim(int d) : d_(d) {
    if (d < kMinDim || d > kMaxDim) {
        throw InvalidDimension("sphere dimension " + std::to_string(d) + " outside supported range [2, 6]");
    }
}

UnitVector::UnitVector(const Vec& v) : c_(v) {
    if (v.size() < 1 || v.size() > kMaxAmbient) throw Error("unit vector: bad coordinate count");
    const double norm = v.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) throw Error("unit vector: cannot normalize zero or non-finite vector");
    c_ /= norm;
}

UnitVector UnitVector::axis(int size, int k) {
    Vec v = Vec::Zero(size);
    v[k] = 1.0;
    return UnitVector(std::move(v), Normalized{});
}

UnitVector UnitVector::operator-() const {
    return UnitVector(Vec(-c_), Normalized{});
}

PoleFrame PoleFrame::standard(Dim dim) {
    const int n = dim.ambient();
    std::vector<UnitVector> basis;
    basis.reserve(dim.value());
    for (int k = 0; k < dim.value(); ++k) basis.push_back(UnitVector::axis(n, k));
    return PoleFrame(dim, UnitVector::axis(n, n - 1), std::move(basis));
}

PoleFrame PoleFrame::from_pole(const UnitVector& pole) {
    const Dim dim(pole.size() - 1);
    return PoleFrame(dim, pole, orthonormal_complement(pole));
}

UnitVector PoleFrame::at_angle(double alpha, const Vec& tangent_weights) const {
    Vec t = Vec::Zero(dim_.ambient());
    for (int i = 0; i < dim_.value(); ++i) t += tangent_weights[i] * basis_[i].coords();
    t.normalize();
    return UnitVector(Vec(std::cos(alpha) * pole_.coords() + std::sin(alpha) * t));
}

std::vector<UnitVector> orthonormal_complement(const UnitVector& c) {
    const int n = c.size();
    // Gram-Schmidt over the axes, least aligned with c first.
    std::vector<int> order(n);
    for (int k = 0; k < n; ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return std::abs(c[a]) < std::abs(c[b]); });
    std::vector<Vec> kept{c.coords()};
    std::vector<UnitVector> basis;
    for (int k : order) {
        if (static_cast<int>(basis.size()) == n - 1) break;
        Vec v = Vec::Zero(n);
        v[k] = 1.0;
        for (int pass = 0; pass < 2; ++pass) {
            for (const Vec& q : kept) v -= q.dot(v) * q;
        }
        if (v.norm() < 1e-8) continue;
        v.normalize();
        kept.push_back(v);
        basis.emplace_back(v);
    }
    return basis;
}

UnitVector sample_uniform_sphere(int size, RandomSource& rng) {
    Vec g(size);
    do {
        for (int i = 0; i < size; ++i) g[i] = rng.normal();
    } while (g.squaredNorm() == 0.0);
    return UnitVector(g);
}

UnitVector sample_uniform_halfsphere_point(const UnitVector& pole, RandomSource& rng) {
    UnitVector x = sample_uniform_sphere(pole.size(), rng);
    return x.dot(pole) < 0.0 ? -x : x;
}

PointSample sample_uniform_halfsphere(Dim dim, std::size_t n, const PoleFrame& pole, RandomSource& rng) {
    if (n == 0) throw TooFewPoints("sample size must be at least 1");
    if (!(pole.dim() == dim)) throw InvalidDimension("pole frame dimension does not match sample dimension");
    std::vector<UnitVector> points;
    points.reserve(n);
    for (std::size_t i = 0; i < n; ++i) points.push_back(sample_uniform_halfsphere_point(pole.pole(), rng));
    return PointSample{dim, pole, std::move(points)};
}

double geodesic_distance(const UnitVector& x, const UnitVector& y) {
    return std::acos(std::clamp(x.dot(y), -1.0, 1.0));
}

double stable_angle(const Vec& x, const Vec& y) {
    return 2.0 * std::atan2((x - y).norm(), (x + y).norm());
}

double wedge_measure(const UnitVector& v, const PoleFrame& pole) {
    return geodesic_distance(v, pole.pole()) / M_PI;
}

CrossSectionChart::CrossSectionChart(const UnitVector& centre)
    : centre_(centre), basis_(orthonormal_complement(centre)) {}

Vec CrossSectionChart::map(const UnitVector& x) const {
    const double h = x.dot(centre_);
    if (h <= kHorizonEps) throw NearHorizon("point too close to the horizon of the chart centre");
    const Vec z = x.coords() / h - centre_.coords();
    Vec out(static_cast<int>(basis_.size()));
    for (std::size_t i = 0; i < basis_.size(); ++i) out[static_cast<int>(i)] = basis_[i].dot(z);
    return out;
}

UnitVector CrossSectionChart::inverse(const Vec& chart_point) const {
    Vec z = centre_.coords();
    for (std::size_t i = 0; i < basis_.size(); ++i) z += chart_point[static_cast<int>(i)] * basis_[i].coords();
    return UnitVector(z);
}

Vec cross_section_map(const UnitVector& x, const UnitVector& c) {
    return CrossSectionChart(c).map(x);
}

UnitVector cross_section_inverse(const Vec& chart_point, const UnitVector& c) {
    return CrossSectionChart(c).inverse(chart_point);
}

Eigen::MatrixXd random_rotation_fixing_pole(const PoleFrame& frame, RandomSource& rng) {
    const int d = frame.dim().value();
    const int n = frame.dim().ambient();
    Eigen::MatrixXd g(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) g(i, j) = rng.normal();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    // Sign fix makes q Haar distributed.
    for (int j = 0; j < d; ++j) {
        if (qr.matrixQR()(j, j) < 0) q.col(j) = -q.col(j);
    }
    Eigen::MatrixXd b(n, d);
    for (int j = 0; j < d; ++j) b.col(j) = frame.basis()[j].coords();
    const Eigen::VectorXd e = frame.pole().coords();
    return e * e.transpose() + b * q * b.transpose();
}

UnitVector rotate(const Eigen::MatrixXd& rotation, const UnitVector& x) {
    return UnitVector(Vec(rotation * x.coords()));
}

}  // namespace halfsphere
