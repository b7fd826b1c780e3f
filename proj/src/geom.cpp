// SPDX-License-Identifier: Apache-2.0
#include "geom.hpp"

#include <cmath>

#include "error.hpp"
#include "rng.hpp"

namespace siamdiff {

double Vec3::norm() const { return std::sqrt(x * x + y * y + z * z); }

Vec3 Vec3::normalized() const {
    const double n = norm();
    if (n < 1e-12) throw GeometryError("cannot normalize near-zero vector");
    return {x / n, y / n, z / n};
}

Vec3 RigidTransform::apply(const Vec3& p) const {
    return {r[0][0] * p.x + r[0][1] * p.y + r[0][2] * p.z + t.x,
            r[1][0] * p.x + r[1][1] * p.y + r[1][2] * p.z + t.y,
            r[2][0] * p.x + r[2][1] * p.y + r[2][2] * p.z + t.z};
}

void RigidTransform::apply_in_place(std::span<Vec3> pts) const {
    for (auto& p : pts) p = apply(p);
}

bool RigidTransform::is_valid(double tol) const {
    // R^T R == I
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            double dot = 0;
            for (int k = 0; k < 3; ++k) dot += r[k][i] * r[k][j];
            const double want = (i == j) ? 1.0 : 0.0;
            if (std::fabs(dot - want) > tol) return false;
        }
    }
    const double det = r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1]) -
                       r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0]) +
                       r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0]);
    return std::fabs(det - 1.0) <= tol;
}

RigidTransform RigidTransform::random(Rng& rng, double translation_scale) {
    // Normalized 4-gaussian quaternion gives a uniform rotation.
    double q[4];
    double n2 = 0;
    do {
        n2 = 0;
        for (auto& qi : q) {
            qi = rng.gaussian();
            n2 += qi * qi;
        }
    } while (n2 < 1e-12);
    const double n = std::sqrt(n2);
    const double w = q[0] / n, x = q[1] / n, y = q[2] / n, z = q[3] / n;

    RigidTransform g;
    g.r[0][0] = 1 - 2 * (y * y + z * z);
    g.r[0][1] = 2 * (x * y - w * z);
    g.r[0][2] = 2 * (x * z + w * y);
    g.r[1][0] = 2 * (x * y + w * z);
    g.r[1][1] = 1 - 2 * (x * x + z * z);
    g.r[1][2] = 2 * (y * z - w * x);
    g.r[2][0] = 2 * (x * z - w * y);
    g.r[2][1] = 2 * (y * z + w * x);
    g.r[2][2] = 1 - 2 * (x * x + y * y);
    g.t = {translation_scale * rng.gaussian(), translation_scale * rng.gaussian(),
           translation_scale * rng.gaussian()};
    return g;
}

Vec3 rotate_point_about_axis(const Vec3& p, const Vec3& axis_origin, const Vec3& axis_dir,
                             double angle) {
    const Vec3 v = p - axis_origin;
    const double c = std::cos(angle), s = std::sin(angle);
    const Vec3 kxv = axis_dir.cross(v);
    const double kdv = axis_dir.dot(v);
    const Vec3 rot = v * c + kxv * s + axis_dir * (kdv * (1.0 - c));
    return axis_origin + rot;
}

void rotate_about_axis(std::span<Vec3> pts, const Vec3& axis_origin, const Vec3& axis_dir,
                       double angle) {
    if (std::fabs(axis_dir.norm() - 1.0) > 1e-9)
        throw InvalidParameterError("rotate_about_axis: axis_dir must be unit length");
    for (auto& p : pts) p = rotate_point_about_axis(p, axis_origin, axis_dir, angle);
}

double rmsd(std::span<const Vec3> a, std::span<const Vec3> b) {
    if (a.size() != b.size()) throw ShapeError("rmsd: point count mismatch");
    if (a.empty()) throw ShapeError("rmsd: empty point sets");
    double acc = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        const Vec3 d = a[i] - b[i];
        acc += d.dot(d);
    }
    return std::sqrt(acc / double(a.size()));
}

double dihedral_angle(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    const Vec3 b1 = b - a, b2 = c - b, b3 = d - c;
    const Vec3 n1 = b1.cross(b2), n2 = b2.cross(b3);
    const Vec3 m = n1.cross(b2.normalized());
    return std::atan2(m.dot(n2), n1.dot(n2));
}

Vec3 place_from_internal(const Vec3& a, const Vec3& b, const Vec3& c, double bond, double theta,
                         double phi) {
    const Vec3 bc = (c - b).normalized();
    const Vec3 ab = b - a;
    Vec3 n = ab.cross(bc);
    if (n.norm() < 1e-10) throw GeometryError("place_from_internal: collinear reference frame");
    n = n.normalized();
    const Vec3 m = n.cross(bc);
    const Vec3 d2{-bond * std::cos(theta), bond * std::sin(theta) * std::cos(phi),
                  -bond * std::sin(theta) * std::sin(phi)};
    return c + bc * d2.x + m * d2.y + n * d2.z;
}

}  // namespace siamdiff
