// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace siamdiff {

class Rng;

struct Vec3 {
    double x = 0, y = 0, z = 0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3& operator+=(const Vec3& o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const;
    Vec3 normalized() const;  // throws GeometryError on near-zero length
};

// Proper rigid motion: rotation (row-vector convention, p' = R * p + t).
struct RigidTransform {
    double r[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    Vec3 t;

    Vec3 apply(const Vec3& p) const;
    void apply_in_place(std::span<Vec3> pts) const;

    // Checks R^T R = I and det(R) = 1 within 1e-9.
    bool is_valid(double tol = 1e-9) const;

    // Uniform random rotation (quaternion method) plus gaussian translation.
    static RigidTransform random(Rng& rng, double translation_scale = 10.0);
};

// Rodrigues rotation of points about an arbitrary axis. axis_dir must be unit
// length within 1e-9.
void rotate_about_axis(std::span<Vec3> pts, const Vec3& axis_origin, const Vec3& axis_dir,
                       double angle);
Vec3 rotate_point_about_axis(const Vec3& p, const Vec3& axis_origin, const Vec3& axis_dir,
                             double angle);

// Root-mean-square deviation without superposition; point counts must match.
double rmsd(std::span<const Vec3> a, std::span<const Vec3> b);

double dihedral_angle(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);

// Place a point D from reference frame (a, b, c) with bond length r(c,d),
// planar angle theta(b,c,d) and dihedral phi(a,b,c,d). Angles in radians.
Vec3 place_from_internal(const Vec3& a, const Vec3& b, const Vec3& c, double bond, double theta,
                         double phi);

}  // namespace siamdiff
