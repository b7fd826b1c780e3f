// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "error.hpp"
#include "geom.hpp"
#include "rng.hpp"

using namespace siamdiff;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("rotate_about_axis: identity cases") {
    Rng rng(3);
    std::vector<Vec3> pts;
    for (int i = 0; i < 10; ++i) pts.push_back({rng.gaussian(), rng.gaussian(), rng.gaussian()});
    const auto orig = pts;

    auto copy = pts;
    rotate_about_axis(copy, {0, 0, 0}, {0, 0, 1}, 0.0);
    for (size_t i = 0; i < pts.size(); ++i) CHECK((copy[i] - orig[i]).norm() == 0.0);

    copy = pts;
    rotate_about_axis(copy, {1, 2, 3}, {0, 1, 0}, 2 * kPi);
    for (size_t i = 0; i < pts.size(); ++i) CHECK((copy[i] - orig[i]).norm() < 1e-9);
}

TEST_CASE("rotate_about_axis: quarter turn about z") {
    std::vector<Vec3> pts = {{1, 0, 0}};
    rotate_about_axis(pts, {0, 0, 0}, {0, 0, 1}, kPi / 2);
    CHECK(pts[0].x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(pts[0].y == doctest::Approx(1.0));
    CHECK(pts[0].z == doctest::Approx(0.0));
}

TEST_CASE("rotate_about_axis rejects non-unit axis and preserves axis distances") {
    std::vector<Vec3> pts = {{1, 1, 1}};
    CHECK_THROWS_AS(rotate_about_axis(pts, {0, 0, 0}, {0, 0, 2}, 1.0), InvalidParameterError);

    Rng rng(9);
    for (int rep = 0; rep < 50; ++rep) {
        const Vec3 origin{rng.gaussian(), rng.gaussian(), rng.gaussian()};
        const Vec3 axis = Vec3{rng.gaussian(), rng.gaussian(), rng.gaussian()}.normalized();
        const Vec3 p{rng.gaussian() * 3, rng.gaussian() * 3, rng.gaussian() * 3};
        const Vec3 q = rotate_point_about_axis(p, origin, axis, rng.uniform() * 2 * kPi);
        // Distance to any point on the axis is preserved.
        const Vec3 on_axis = origin + axis * 1.7;
        CHECK((p - on_axis).norm() == doctest::Approx((q - on_axis).norm()).epsilon(1e-12));
    }
}

TEST_CASE("rmsd basics and elementwise oracle") {
    std::vector<Vec3> a = {{0, 0, 0}, {1, 1, 1}};
    CHECK(rmsd(a, a) == 0.0);

    std::vector<Vec3> b = a;
    for (auto& p : b) p.x += 1.0;
    CHECK(rmsd(a, b) == doctest::Approx(1.0));

    std::vector<Vec3> c = {{0, 0, 0}};
    CHECK_THROWS_AS(rmsd(a, c), ShapeError);

    Rng rng(5);
    std::vector<Vec3> x, y;
    for (int i = 0; i < 10; ++i) {
        x.push_back({rng.gaussian(), rng.gaussian(), rng.gaussian()});
        y.push_back({rng.gaussian(), rng.gaussian(), rng.gaussian()});
    }
    double acc = 0;
    for (int i = 0; i < 10; ++i) {
        const Vec3 d = x[size_t(i)] - y[size_t(i)];
        acc += d.x * d.x + d.y * d.y + d.z * d.z;
    }
    CHECK(rmsd(x, y) == doctest::Approx(std::sqrt(acc / 10.0)).epsilon(1e-12));
}

TEST_CASE("random rigid transforms are proper rotations") {
    Rng rng(17);
    for (int i = 0; i < 100; ++i) {
        const RigidTransform g = RigidTransform::random(rng);
        CHECK(g.is_valid());
    }
}

TEST_CASE("place_from_internal reproduces bond, angle, dihedral") {
    const Vec3 a{0, 0, 0}, b{1.5, 0, 0}, c{2.0, 1.3, 0};
    const double bond = 1.52, theta = 111.0 * kPi / 180.0, phi = 57.0 * kPi / 180.0;
    const Vec3 d = place_from_internal(a, b, c, bond, theta, phi);
    CHECK((d - c).norm() == doctest::Approx(bond).epsilon(1e-12));
    const Vec3 cb = b - c, cd = d - c;
    const double ang = std::acos(cb.dot(cd) / (cb.norm() * cd.norm()));
    CHECK(ang == doctest::Approx(theta).epsilon(1e-10));
    CHECK(dihedral_angle(a, b, c, d) == doctest::Approx(phi).epsilon(1e-10));
}
