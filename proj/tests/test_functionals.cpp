#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/LU>

#include "halfsphere/conic_hull.hpp"
#include "halfsphere/errors.hpp"
#include "halfsphere/exact_formulas.hpp"
#include "halfsphere/functionals.hpp"

using namespace halfsphere;

namespace {

constexpr double pi = std::numbers::pi;

PointSample random_sample(int d, std::size_t n, std::uint64_t seed, std::uint64_t stream = 0) {
    RandomSource rng(seed, stream);
    return sample_uniform_halfsphere(Dim(d), n, PoleFrame::standard(Dim(d)), rng);
}

std::vector<UnitVector> orthant(int d) {
    std::vector<UnitVector> pts;
    for (int k = 0; k <= d; ++k) pts.push_back(UnitVector::axis(d + 1, k));
    return pts;
}

// Solid angle of the cone over a spherical triangle, by the vector triple product formula.
double triangle_solid_angle(const Vec& a, const Vec& b, const Vec& c) {
    Eigen::MatrixXd m(a.size(), 3);
    m.col(0) = a;
    m.col(1) = b;
    m.col(2) = c;
    // Volume of the parallelepiped inside its own span.
    const double num = std::sqrt(std::max(0.0, (m.transpose() * m).determinant()));
    const double den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
    return 2.0 * std::atan2(num, den);
}

// Largest distance from points of the halfsphere to the polytope, by brute-force projection.
double hausdorff_oracle(const SphericalPolytope& hull, const PoleFrame& frame, int boundary_points, int interior_points,
                        RandomSource& rng) {
    double best = 0.0;
    const auto& b = frame.basis();
    for (int k = 0; k < boundary_points; ++k) {
        const double phi = 2 * pi * k / boundary_points;
        const Vec x = std::cos(phi) * b[0].coords() + std::sin(phi) * b[1].coords();
        best = std::max(best, std::acos(std::clamp(project_onto_cone(hull, UnitVector(x)).norm, -1.0, 1.0)));
    }
    for (int k = 0; k < interior_points; ++k) {
        const UnitVector x = sample_uniform_halfsphere_point(frame.pole(), rng);
        best = std::max(best, std::acos(std::clamp(project_onto_cone(hull, x).norm, -1.0, 1.0)));
    }
    return best;
}

}  // namespace

TEST_CASE("orthant functionals") {
    for (int d = 2; d <= 6; ++d) {
        CAPTURE(d);
        const Dim dim(d);
        const SphericalPolytope hull = spherical_hull(dim, orthant(d));
        RandomSource rng(20, static_cast<std::uint64_t>(d));

        const FaceCounts fc = face_counts(hull);
        CHECK(fc.vertices == d + 1);
        CHECK(fc.facets == d + 1);
        CHECK(fc.ridges == d * (d + 1) / 2);

        const double area_exact = (d + 1) * omega(d).value / std::pow(2.0, d);
        const FunctionalValue area = surface_area(hull, rng, 200000);
        if (d <= 3) {
            CHECK_FALSE(area.is_monte_carlo());
            CHECK(area.value == doctest::Approx(area_exact).epsilon(1e-12));
        } else {
            REQUIRE(area.is_monte_carlo());
            CHECK(std::abs(area.value - area_exact) < 5 * *area.std_error);
        }

        const double vol_exact = omega(d + 1).value / std::pow(2.0, d + 1);
        const VolumeValues vol = spherical_volume(hull, PoleFrame::standard(dim), rng, 200000);
        if (d == 2) {
            CHECK(vol.volume.value == doctest::Approx(pi / 2).epsilon(1e-12));
            CHECK(vol.missed_volume.value == doctest::Approx(3 * pi / 2).epsilon(1e-12));
        } else {
            CHECK(std::abs(vol.volume.value - vol_exact) < 5 * *vol.volume.std_error);
        }

        const MeanWidthValues mw = mean_width(hull, rng, 200000);
        const double mw_exact = 0.5 - std::pow(2.0, -(d + 1));
        CHECK(std::abs(mw.hit_count.value - mw_exact) < 5 * *mw.hit_count.std_error);
        CHECK(std::abs(mw.dual_cone.value - mw_exact) < 5 * *mw.dual_cone.std_error);

        // Facets through the pole: the distance to the halfsphere is a right angle, attained.
        const FunctionalValue delta = hausdorff_to_halfsphere(hull, PoleFrame::standard(dim));
        CHECK(delta.value == doctest::Approx(pi / 2).epsilon(1e-12));
        CHECK_FALSE(delta.lower_bound_only);
    }
}

TEST_CASE("d = 3 surface area against the triple-product oracle") {
    for (std::uint64_t rep = 0; rep < 30; ++rep) {
        const PointSample s = random_sample(3, 10 + 10 * rep, 21, rep);
        const SphericalPolytope hull = spherical_hull(s);
        double oracle = 0.0;
        for (const Facet& f : hull.facets())
            oracle += triangle_solid_angle(hull.vertices()[static_cast<std::size_t>(f.vertex_indices[0])].coords(),
                                           hull.vertices()[static_cast<std::size_t>(f.vertex_indices[1])].coords(),
                                           hull.vertices()[static_cast<std::size_t>(f.vertex_indices[2])].coords());
        RandomSource rng(0, 0);
        CHECK(surface_area(hull, rng, 0).value == doctest::Approx(oracle).epsilon(1e-12));
    }
}

TEST_CASE("d = 2 area against a triangle fan oracle") {
    for (std::uint64_t rep = 0; rep < 30; ++rep) {
        const PointSample s = random_sample(2, 5 + 20 * rep, 22, rep);
        const SphericalPolytope hull = spherical_hull(s);
        const Vec c = hull.interior_direction().coords();
        double oracle = 0.0;
        for (const Facet& f : hull.facets())
            oracle += triangle_solid_angle(c, hull.vertices()[static_cast<std::size_t>(f.vertex_indices[0])].coords(),
                                           hull.vertices()[static_cast<std::size_t>(f.vertex_indices[1])].coords());
        RandomSource rng(0, 0);
        const VolumeValues v = spherical_volume(hull, s.pole, rng, 0);
        CHECK(v.volume.value == doctest::Approx(oracle).epsilon(1e-11));
        CHECK(std::abs(v.volume.value + v.missed_volume.value - 2 * pi) < 1e-9);
    }
}

TEST_CASE("d = 2 exact area agrees with hit counting") {
    const PointSample s = random_sample(2, 15, 23);
    const SphericalPolytope hull = spherical_hull(s);
    RandomSource rng(24, 0);
    const double exact = spherical_volume(hull, s.pole, rng, 0).volume.value;
    const std::size_t m = 400000;
    std::size_t inside = 0;
    for (std::size_t k = 0; k < m; ++k) inside += contains(hull, sample_uniform_halfsphere_point(s.pole.pole(), rng));
    const double p = static_cast<double>(inside) / static_cast<double>(m);
    const double se = 2 * pi * std::sqrt(p * (1 - p) / static_cast<double>(m));
    CHECK(std::abs(2 * pi * p - exact) < 5 * se);
}

TEST_CASE("d = 4 surface area Monte Carlo is stable under a larger budget") {
    const PointSample s = random_sample(4, 60, 25);
    const SphericalPolytope hull = spherical_hull(s);
    RandomSource a(26, 0);
    RandomSource b(27, 0);
    const FunctionalValue small = surface_area(hull, a, 20000);
    const FunctionalValue large = surface_area(hull, b, 200000);
    CHECK(*large.samples_used > *small.samples_used);
    CHECK(*large.std_error < *small.std_error);
    CHECK(std::abs(small.value - large.value) < 4 * std::hypot(*small.std_error, *large.std_error));
}

TEST_CASE("large samples nearly fill the halfsphere") {
    {
        const PointSample s = random_sample(2, 2000, 28);
        RandomSource rng(0, 0);
        const double v = spherical_volume(spherical_hull(s), s.pole, rng, 0).volume.value;
        CHECK(v > 0.98 * 2 * pi);
        CHECK(v < 2 * pi);
    }
    {
        const PointSample s = random_sample(3, 2000, 29);
        RandomSource rng(30, 0);
        const double v = spherical_volume(spherical_hull(s), s.pole, rng, 20000).volume.value;
        CHECK(v > 0.98 * pi * pi);
    }
}

TEST_CASE("mean width estimators agree") {
    int over = 0;
    double z_sum = 0.0;
    for (std::uint64_t rep = 0; rep < 100; ++rep) {
        const int d = 2 + static_cast<int>(rep % 3);
        const PointSample s = random_sample(d, 30, 31, rep);
        const SphericalPolytope hull = spherical_hull(s);
        RandomSource rng(32, rep);
        const MeanWidthValues mw = mean_width(hull, rng, 4000);
        CHECK(mw.hit_count.value >= 0.0);
        CHECK(mw.hit_count.value <= 0.5);
        CHECK(mw.dual_cone.value <= 0.5);
        const double se = std::hypot(*mw.hit_count.std_error, *mw.dual_cone.std_error);
        if (se == 0.0) {
            CHECK(mw.hit_count.value == mw.dual_cone.value);
            continue;
        }
        const double z = (mw.hit_count.value - mw.dual_cone.value) / se;
        over += std::abs(z) > 3.5;
        z_sum += z;
    }
    CHECK(over <= 1);
    CHECK(std::abs(z_sum) / 10.0 < 4.0);
}

TEST_CASE("Hausdorff distance against the projection oracle") {
    const PoleFrame frame = PoleFrame::standard(Dim(2));
    // Three points symmetric about the pole.
    std::vector<UnitVector> pts;
    for (int k = 0; k < 3; ++k) {
        const double phi = 2 * pi * k / 3;
        pts.push_back(frame.at_angle(0.3, Vec((Vec(2) << std::cos(phi), std::sin(phi)).finished())));
    }
    const SphericalPolytope tri = spherical_hull(Dim(2), pts);
    RandomSource rng(33, 0);
    const FunctionalValue delta = hausdorff_to_halfsphere(tri, frame);
    const double oracle = hausdorff_oracle(tri, frame, 20000, 2000, rng);
    CHECK_FALSE(delta.lower_bound_only);
    CHECK(oracle <= delta.value + 1e-9);
    CHECK(std::abs(oracle - delta.value) < 2e-3);

    for (int d = 2; d <= 3; ++d) {
        for (std::uint64_t rep = 0; rep < 5; ++rep) {
            const PointSample s = random_sample(d, 40, 34, rep);
            const SphericalPolytope hull = spherical_hull(s);
            const FunctionalValue dv = hausdorff_to_halfsphere(hull, s.pole);
            const double o = hausdorff_oracle(hull, s.pole, d == 2 ? 20000 : 0, 5000, rng);
            CHECK(o <= dv.value + 1e-9);
            if (d == 2) CHECK(std::abs(o - dv.value) < 2e-3);
            if (dv.lower_bound_only) CHECK(dv.value == doctest::Approx(pi / 2));
        }
    }
}

TEST_CASE("pole outside the polytope") {
    const PoleFrame frame = PoleFrame::standard(Dim(2));
    std::vector<UnitVector> pts;
    for (double a : {0.1, 0.2, 0.3, 0.4}) pts.emplace_back(Vec((Vec(3) << std::cos(a), std::sin(a), 0.2).finished()));
    const SphericalPolytope hull = spherical_hull(Dim(2), pts);
    const FunctionalValue delta = hausdorff_to_halfsphere(hull, frame);
    CHECK(delta.lower_bound_only);
    CHECK(delta.value == doctest::Approx(pi / 2));
    RandomSource rng(35, 0);
    CHECK(hausdorff_oracle(hull, frame, 2000, 0, rng) >= pi / 2 - 1e-9);
}

TEST_CASE("monotone under inclusion") {
    for (std::uint64_t rep = 0; rep < 20; ++rep) {
        const PointSample big = random_sample(2, 200, 36, rep);
        PointSample small = big;
        small.points.erase(small.points.begin() + 30, small.points.end());
        const SphericalPolytope a = spherical_hull(small);
        const SphericalPolytope b = spherical_hull(big);
        RandomSource rng(0, 0);
        CHECK(hausdorff_to_halfsphere(b, big.pole).value <= hausdorff_to_halfsphere(a, big.pole).value + 1e-12);
        CHECK(spherical_volume(b, big.pole, rng, 0).volume.value >=
              spherical_volume(a, big.pole, rng, 0).volume.value - 1e-12);
        CHECK(surface_area(b, rng, 0).value >= surface_area(a, rng, 0).value - 1e-12);
    }
}

TEST_CASE("missed volume is sandwiched by the Hausdorff distance") {
    for (int d = 2; d <= 4; ++d) {
        const double lower = omega(d + 1).value / (2 * pi);
        const double upper = omega(d).value;
        for (std::uint64_t rep = 0; rep < 20; ++rep) {
            const PointSample s = random_sample(d, 50 + 20 * rep, 37, rep);
            const SphericalPolytope hull = spherical_hull(s);
            RandomSource rng(38, rep);
            const VolumeValues v = spherical_volume(hull, s.pole, rng, 20000);
            const double delta = hausdorff_to_halfsphere(hull, s.pole).value;
            const double slack = v.missed_volume.std_error ? 4 * *v.missed_volume.std_error : 1e-9;
            CHECK(lower * delta <= v.missed_volume.value + slack);
            CHECK(v.missed_volume.value <= upper * delta + slack);
        }
    }
}

TEST_CASE("functionals are invariant under rotations about the pole") {
    for (int d = 2; d <= 3; ++d) {
        const PointSample s = random_sample(d, 80, 39, static_cast<std::uint64_t>(d));
        RandomSource rot(40, 0);
        const Eigen::MatrixXd r = random_rotation_fixing_pole(s.pole, rot);
        PointSample rs = s;
        for (auto& p : rs.points) p = rotate(r, p);
        const SphericalPolytope a = spherical_hull(s);
        const SphericalPolytope b = spherical_hull(rs);
        RandomSource rng(0, 0);
        CHECK(surface_area(a, rng, 0).value == doctest::Approx(surface_area(b, rng, 0).value).epsilon(1e-10));
        CHECK(hausdorff_to_halfsphere(a, s.pole).value ==
              doctest::Approx(hausdorff_to_halfsphere(b, s.pole).value).epsilon(1e-10));
        if (d == 2)
            CHECK(spherical_volume(a, s.pole, rng, 0).volume.value ==
                  doctest::Approx(spherical_volume(b, s.pole, rng, 0).volume.value).epsilon(1e-10));
    }
}

TEST_CASE("Monte Carlo paths reject an empty budget") {
    const PointSample s = random_sample(3, 20, 41);
    const SphericalPolytope hull = spherical_hull(s);
    RandomSource rng(0, 0);
    CHECK_THROWS_AS(spherical_volume(hull, s.pole, rng, 0), InvalidConfig);
    CHECK_THROWS_AS(mean_width(hull, rng, 0), InvalidConfig);
}
