// SPDX-License-Identifier: Apache-2.0
//
// uavrt - deterministic ray-tracing simulator for UAV air-to-ground mmWave channels
// Copyright 2026 the uavrt contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef UAVRT_GEOMETRY_HPP
#define UAVRT_GEOMETRY_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

namespace uavrt
{

    // Right-handed Cartesian frame, z up, all lengths in meters.
    struct Vec3
    {
        double x = 0.0, y = 0.0, z = 0.0;

        Vec3 operator+(const Vec3 &o) const { return {x + o.x, y + o.y, z + o.z}; }
        Vec3 operator-(const Vec3 &o) const { return {x - o.x, y - o.y, z - o.z}; }
        Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
        Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
        Vec3 operator-() const { return {-x, -y, -z}; }
        Vec3 &operator+=(const Vec3 &o) { x += o.x, y += o.y, z += o.z; return *this; }

        double dot(const Vec3 &o) const { return x * o.x + y * o.y + z * o.z; }
        Vec3 cross(const Vec3 &o) const { return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x}; }
        double norm2() const { return dot(*this); }
        double norm() const;
        Vec3 normalized() const; // throws std::invalid_argument on near-zero length
        bool is_finite() const;
    };

    inline Vec3 operator*(double s, const Vec3 &v) { return v * s; }
    inline double dot(const Vec3 &a, const Vec3 &b) { return a.dot(b); }
    inline Vec3 cross(const Vec3 &a, const Vec3 &b) { return a.cross(b); }

    // Azimuth measured in the x-y plane from +x, wrapped to (-pi, pi];
    // elevation measured from the horizontal plane toward +z, in [-pi/2, pi/2].
    struct SphericalAngles
    {
        double azimuth = 0.0;
        double elevation = 0.0;
    };

    // Wrap an angle to (-pi, pi].
    double wrap_angle(double a);

    // Unit direction vector for a pair of angles:
    // (cos el * cos az, cos el * sin az, sin el).
    Vec3 spherical_unit_vector(const SphericalAngles &a);

    // Angles of the direction from one point toward another. The horizontal
    // component is recovered with the two-argument arctangent so all
    // quadrants resolve; a vertical separation maps to elevation +-pi/2 with
    // azimuth 0. Throws std::invalid_argument when the points coincide.
    SphericalAngles angles_of_separation(const Vec3 &from, const Vec3 &to);

    // Triangle referencing a shared vertex table. face_id groups the
    // triangles of one logical planar face (a wall, a roof); object_id
    // groups the triangles of one scene object.
    struct Triangle
    {
        std::uint32_t a = 0, b = 0, c = 0;
        std::uint32_t material_id = 0;
        std::uint32_t face_id = 0;
        std::uint32_t object_id = 0;
    };

    // Plane in Hessian form: normal.dot(p) + d == 0, unit normal.
    struct Plane
    {
        Vec3 normal;
        double d = 0.0;

        static Plane from_points(const Vec3 &a, const Vec3 &b, const Vec3 &c); // throws on degenerate triple
        double signed_distance(const Vec3 &p) const { return normal.dot(p) + d; }
    };

    // Reflect a point across a plane. Involutive and distance preserving.
    Vec3 mirror_point(const Vec3 &p, const Plane &plane);

    struct Ray
    {
        Vec3 origin;
        Vec3 dir; // unit length
    };

    struct Hit
    {
        std::uint32_t triangle_index = 0;
        double distance = 0.0;
        Vec3 point;
    };

    // Moeller-Trumbore ray/triangle test; returns the hit parameter t > 0 or
    // nothing. Both triangle orientations register.
    std::optional<double> intersect_triangle(const Ray &ray, const Vec3 &a, const Vec3 &b, const Vec3 &c);

    struct Aabb
    {
        Vec3 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
        Vec3 hi{std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};

        void grow(const Vec3 &p);
        void grow(const Aabb &b);
        bool hit(const Ray &ray, double t_min, double t_max) const;
    };

    // Bounding volume hierarchy over a triangle soup. The hierarchy stores
    // indices into the caller's triangle array; vertex and triangle tables
    // are passed back in on every query so the scene owns the geometry.
    class Bvh
    {
      public:
        Bvh() = default;

        [[nodiscard]] static Bvh build(const std::vector<Vec3> &vertices, const std::vector<Triangle> &triangles);

        bool empty() const { return nodes_.empty(); }

        // Nearest hit with distance in (t_min, t_max); t_min defaults to the
        // self-intersection guard of 1e-6 m.
        std::optional<Hit> nearest(const Ray &ray, const std::vector<Vec3> &vertices,
                                   const std::vector<Triangle> &triangles,
                                   double t_min = 1e-6,
                                   double t_max = std::numeric_limits<double>::infinity()) const;

        // All hits with distance in (t_min, t_max), appended to out in
        // traversal order. Used for segment scans that must see every facet
        // crossing, e.g. to count foliage penetrations.
        void collect(const Ray &ray, const std::vector<Vec3> &vertices,
                     const std::vector<Triangle> &triangles,
                     double t_min, double t_max, std::vector<Hit> &out) const;

      private:
        struct Node
        {
            Aabb box;
            std::int32_t left = -1, right = -1;
            std::uint32_t first = 0, count = 0;
        };

        std::vector<Node> nodes_;
        std::vector<std::uint32_t> order_;

        std::int32_t build_node(const std::vector<Aabb> &boxes, const std::vector<Vec3> &centroids,
                                std::uint32_t first, std::uint32_t count);
    };

    // Straight edge where two faces meet at an exterior angle n*pi,
    // 1 < n <= 2 (n = 1.5 for a right-angle corner, n = 2 for a knife edge).
    // face0_tangent lies in the zero face, perpendicular to the edge,
    // pointing from the edge into the face surface; face0_normal is that
    // face's outward normal. Directions around the edge are measured from
    // face0_tangent rotating through face0_normal, so the exterior region
    // spans [0, n*pi].
    struct Wedge
    {
        Vec3 p0, p1;
        Vec3 edge_dir;      // unit, p0 -> p1
        Vec3 face0_tangent; // unit
        Vec3 face0_normal;  // unit
        double n_factor = 2.0;
        std::uint32_t face0_id = 0, facen_id = 0;
        std::uint32_t tri0_index = 0, tri1_index = 0;
        std::uint32_t material_id = 0;
        std::uint32_t object_id = 0;
    };

    // Angle of a direction around a wedge exterior, in [0, 2*pi). Directions
    // with an angle of at most n_factor*pi lie in air; larger angles point
    // into the solid. Throws std::invalid_argument when the direction is
    // parallel to the edge.
    double wedge_exterior_angle(const Wedge &w, const Vec3 &dir);

} // namespace uavrt

#endif
