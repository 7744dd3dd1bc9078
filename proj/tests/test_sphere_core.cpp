#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "halfsphere/errors.hpp"
#include "halfsphere/random_source.hpp"
#include "halfsphere/sphere_core.hpp"

using namespace halfsphere;

namespace {

struct Moments {
    double mean;
    double stderr_of_mean;
};

Moments moments(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    const double mean = s / static_cast<double>(xs.size());
    double v = 0.0;
    for (double x : xs) v += (x - mean) * (x - mean);
    v /= static_cast<double>(xs.size() - 1);
    return {mean, std::sqrt(v / static_cast<double>(xs.size()))};
}

}  // namespace

TEST_CASE("Philox4x32-10 known answers") {
    using detail::philox4x32_10;
    CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) ==
          std::array<std::uint32_t, 4>{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    CHECK(philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
          std::array<std::uint32_t, 4>{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    CHECK(philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
          std::array<std::uint32_t, 4>{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("random streams are reproducible and distinct") {
    RandomSource a(42, 7);
    RandomSource b(42, 7);
    RandomSource c(42, 8);
    bool differs = false;
    for (int i = 0; i < 1000; ++i) {
        const double x = a.normal();
        CHECK(x == b.normal());
        differs |= x != c.normal();
    }
    CHECK(differs);
    RandomSource f1 = RandomSource(1, 2).fork(5);
    RandomSource f2 = RandomSource(1, 2).fork(5);
    RandomSource f3 = RandomSource(1, 2).fork(6);
    CHECK(f1.next_u64() == f2.next_u64());
    CHECK(f1.next_u64() != f3.next_u64());
    for (int i = 0; i < 1000; ++i) {
        const double u = a.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("dimension range") {
    CHECK_THROWS_AS(Dim(1), InvalidDimension);
    CHECK_THROWS_AS(Dim(7), InvalidDimension);
    CHECK(Dim(2).ambient() == 3);
    CHECK(Dim(6).value() == 6);
}

TEST_CASE("unit vectors normalize on construction") {
    Vec v(3);
    v << 3.0, 4.0, 12.0;
    const UnitVector u(v);
    CHECK(std::abs(u.coords().norm() - 1.0) <= 1e-12);
    CHECK(u[0] == doctest::Approx(3.0 / 13.0));
    CHECK_THROWS_AS(UnitVector(Vec::Zero(3)), Error);
}

TEST_CASE("pole frames are orthonormal") {
    RandomSource rng(3, 0);
    for (int d = 2; d <= 6; ++d) {
        std::vector<PoleFrame> frames{PoleFrame::standard(Dim(d)),
                                      PoleFrame::from_pole(sample_uniform_sphere(d + 1, rng))};
        for (const PoleFrame& f : frames) {
            std::vector<Vec> all{f.pole().coords()};
            for (const UnitVector& b : f.basis()) all.push_back(b.coords());
            REQUIRE(all.size() == static_cast<std::size_t>(d + 1));
            for (std::size_t i = 0; i < all.size(); ++i)
                for (std::size_t j = 0; j < all.size(); ++j)
                    CHECK(std::abs(all[i].dot(all[j]) - (i == j ? 1.0 : 0.0)) <= 1e-12);
        }
    }
}

TEST_CASE("halfsphere samples are unit and on the right side") {
    RandomSource rng(11, 0);
    for (int d = 2; d <= 6; ++d) {
        const PoleFrame frame = PoleFrame::from_pole(sample_uniform_sphere(d + 1, rng));
        RandomSource s(5, static_cast<std::uint64_t>(d));
        const PointSample sample = sample_uniform_halfsphere(Dim(d), 2000, frame, s);
        for (const UnitVector& x : sample.points) {
            CHECK(std::abs(x.coords().norm() - 1.0) <= 1e-12);
            CHECK(x.dot(frame.pole()) >= 0.0);
        }
    }
    RandomSource r0(1, 1);
    CHECK_THROWS_AS(sample_uniform_halfsphere(Dim(2), 0, PoleFrame::standard(Dim(2)), r0), TooFewPoints);
}

TEST_CASE("sampling is deterministic") {
    const PoleFrame frame = PoleFrame::standard(Dim(3));
    RandomSource a(99, 4);
    RandomSource b(99, 4);
    const PointSample sa = sample_uniform_halfsphere(Dim(3), 500, frame, a);
    const PointSample sb = sample_uniform_halfsphere(Dim(3), 500, frame, b);
    for (std::size_t i = 0; i < sa.points.size(); ++i) CHECK(sa.points[i].coords() == sb.points[i].coords());
}

TEST_CASE("height distribution matches the uniform halfsphere") {
    // d = 2: E<x,e> = int cos sin / int sin over [0, pi/2] = 1/2.
    // d = 3: E<x,e> = int cos sin^2 / int sin^2 = (1/3)/(pi/4) = 4/(3 pi).
    const std::vector<std::pair<int, double>> cases{{2, 0.5}, {3, 4.0 / (3.0 * std::numbers::pi)}};
    for (const auto& [d, expected] : cases) {
        const PoleFrame frame = PoleFrame::standard(Dim(d));
        RandomSource rng(2024, static_cast<std::uint64_t>(d));
        const PointSample s = sample_uniform_halfsphere(Dim(d), 100000, frame, rng);
        std::vector<double> h;
        for (const UnitVector& x : s.points) h.push_back(x.dot(frame.pole()));
        const Moments m = moments(h);
        CHECK(std::abs(m.mean - expected) <= 4.0 * m.stderr_of_mean);
    }

    // Independent sampler: rejection from the cube, projected and flipped.
    RandomSource cube(77, 0);
    std::vector<double> h;
    while (h.size() < 100000) {
        const double x = 2 * cube.uniform() - 1, y = 2 * cube.uniform() - 1, z = 2 * cube.uniform() - 1;
        const double r = std::sqrt(x * x + y * y + z * z);
        if (r > 1.0 || r < 1e-3) continue;
        h.push_back(std::abs(z) / r);
    }
    const Moments oracle = moments(h);
    CHECK(std::abs(oracle.mean - 0.5) <= 4.0 * oracle.stderr_of_mean);
}

TEST_CASE("reflection symmetry across a boundary direction") {
    const PoleFrame frame = PoleFrame::standard(Dim(2));
    RandomSource rng(8, 1);
    const PointSample s = sample_uniform_halfsphere(Dim(2), 100000, frame, rng);
    Vec u(3);
    u << 0.6, -0.8, 0.0;
    const UnitVector dir(u);
    std::vector<double> ind;
    for (const UnitVector& x : s.points) ind.push_back(x.dot(dir) >= 0.0 ? 1.0 : 0.0);
    const Moments m = moments(ind);
    CHECK(std::abs(m.mean - 0.5) <= 4.0 * m.stderr_of_mean);
}

TEST_CASE("geodesic distance") {
    const PoleFrame frame = PoleFrame::standard(Dim(2));
    const UnitVector& e = frame.pole();
    CHECK(geodesic_distance(e, e) == 0.0);
    CHECK(geodesic_distance(e, -e) == doctest::Approx(std::numbers::pi));
    CHECK(geodesic_distance(e, frame.basis()[0]) == doctest::Approx(std::numbers::pi / 2));

    // Inner products overshooting 1 are clamped.
    Vec almost(3);
    almost << 1e-9, 0.0, 1.0;
    CHECK(std::isfinite(geodesic_distance(UnitVector(almost), e)));

    RandomSource rng(5, 5);
    std::vector<UnitVector> pts;
    for (int i = 0; i < 40; ++i) pts.push_back(sample_uniform_sphere(4, rng));
    for (const auto& x : pts)
        for (const auto& y : pts) {
            CHECK(geodesic_distance(x, y) == geodesic_distance(y, x));
            for (const auto& z : pts)
                CHECK(geodesic_distance(x, z) <= geodesic_distance(x, y) + geodesic_distance(y, z) + 1e-12);
        }
}

TEST_CASE("stable angle agrees with arccos away from the ends") {
    RandomSource rng(6, 6);
    for (int i = 0; i < 1000; ++i) {
        const UnitVector x = sample_uniform_sphere(5, rng);
        const UnitVector y = sample_uniform_sphere(5, rng);
        CHECK(stable_angle(x.coords(), y.coords()) == doctest::Approx(geodesic_distance(x, y)).epsilon(1e-9));
    }
}

TEST_CASE("wedge measure") {
    const PoleFrame frame = PoleFrame::standard(Dim(2));
    CHECK(wedge_measure(frame.pole(), frame) == 0.0);
    CHECK(wedge_measure(frame.basis()[1], frame) == doctest::Approx(0.5));

    const double alpha = std::numbers::pi / 3;
    Vec w(2);
    w << 1.0, 0.0;
    const UnitVector v = frame.at_angle(alpha, w);
    CHECK(wedge_measure(v, frame) == doctest::Approx(1.0 / 3.0));

    RandomSource rng(17, 0);
    const PointSample s = sample_uniform_halfsphere(Dim(2), 100000, frame, rng);
    std::vector<double> ind;
    for (const UnitVector& x : s.points) ind.push_back(v.dot(x) <= 0.0 ? 1.0 : 0.0);
    const Moments m = moments(ind);
    CHECK(std::abs(m.mean - 1.0 / 3.0) <= 4.0 * m.stderr_of_mean);
}

TEST_CASE("cross-section chart") {
    RandomSource rng(21, 0);
    for (int d = 2; d <= 6; ++d) {
        const UnitVector c = sample_uniform_sphere(d + 1, rng);
        const CrossSectionChart chart(c);
        CHECK(chart.map(c).norm() <= 1e-14);
        int tested = 0;
        while (tested < 200) {
            const UnitVector x = sample_uniform_sphere(d + 1, rng);
            if (x.dot(c) <= 0.1) continue;
            ++tested;
            const UnitVector back = chart.inverse(chart.map(x));
            CHECK((back.coords() - x.coords()).norm() <= 1e-10);
            CHECK((cross_section_inverse(cross_section_map(x, c), c).coords() - x.coords()).norm() <= 1e-10);
        }
        Vec h = c.coords();
        h += 10.0 * chart.basis()[0].coords();
        const UnitVector steep(h);
        Vec hz = c.coords() * 1e-12 + chart.basis()[0].coords();
        CHECK_THROWS_AS(chart.map(UnitVector(hz)), NearHorizon);
        CHECK_NOTHROW(chart.map(steep));
    }
}

TEST_CASE("gnomonic chart maps great circles through the centre to lines") {
    RandomSource rng(22, 0);
    for (int trial = 0; trial < 50; ++trial) {
        const UnitVector c = sample_uniform_sphere(4, rng);
        // Great circle spanned by c and a unit tangent t.
        Vec t = sample_uniform_sphere(4, rng).coords();
        t -= t.dot(c.coords()) * c.coords();
        t.normalize();
        const CrossSectionChart chart(c);
        std::vector<Vec> pts;
        for (double a : {-1.0, 0.3, 1.2}) pts.push_back(chart.map(UnitVector(Vec(std::cos(a) * c.coords() + std::sin(a) * t))));
        const Vec u = pts[1] - pts[0];
        const Vec w = pts[2] - pts[0];
        const double residual = (w - (w.dot(u) / u.squaredNorm()) * u).norm();
        CHECK(residual < 1e-9);
    }
}

TEST_CASE("rotations fixing the pole preserve distances") {
    RandomSource rng(31, 0);
    for (int d = 2; d <= 5; ++d) {
        const PoleFrame frame = PoleFrame::from_pole(sample_uniform_sphere(d + 1, rng));
        const Eigen::MatrixXd r = random_rotation_fixing_pole(frame, rng);
        CHECK((r * frame.pole().coords() - frame.pole().coords()).norm() < 1e-12);
        const PointSample s = sample_uniform_halfsphere(Dim(d), 30, frame, rng);
        for (std::size_t i = 0; i < s.points.size(); ++i)
            for (std::size_t j = i + 1; j < s.points.size(); ++j) {
                const double before = geodesic_distance(s.points[i], s.points[j]);
                const double after = geodesic_distance(rotate(r, s.points[i]), rotate(r, s.points[j]));
                CHECK(std::abs(before - after) < 1e-12);
            }
    }
}
