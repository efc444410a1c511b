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

#include "uavrt/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace uavrt
{

    double Vec3::norm() const
    {
        return std::sqrt(norm2());
    }

    Vec3 Vec3::normalized() const
    {
        double n = norm();
        if (!(n > 1e-12))
            throw std::invalid_argument("Cannot normalize a near-zero vector.");
        return *this / n;
    }

    bool Vec3::is_finite() const
    {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }

    double wrap_angle(double a)
    {
        constexpr double two_pi = 2.0 * std::numbers::pi;
        a = std::fmod(a + std::numbers::pi, two_pi);
        if (a <= 0.0)
            a += two_pi;
        return a - std::numbers::pi;
    }

    Vec3 spherical_unit_vector(const SphericalAngles &a)
    {
        double ce = std::cos(a.elevation);
        return {ce * std::cos(a.azimuth), ce * std::sin(a.azimuth), std::sin(a.elevation)};
    }

    SphericalAngles angles_of_separation(const Vec3 &from, const Vec3 &to)
    {
        Vec3 d = to - from;
        double horiz = std::hypot(d.x, d.y);
        if (horiz < 1e-12 && std::abs(d.z) < 1e-12)
            throw std::invalid_argument("Angles of separation are undefined for coincident points.");

        SphericalAngles a;
        if (horiz < 1e-12)
        {
            // Vertical separation: pin azimuth to 0 by convention.
            a.azimuth = 0.0;
            a.elevation = (d.z > 0.0) ? 0.5 * std::numbers::pi : -0.5 * std::numbers::pi;
            return a;
        }
        a.azimuth = wrap_angle(std::atan2(d.y, d.x));
        a.elevation = std::atan2(d.z, horiz);
        return a;
    }

    Plane Plane::from_points(const Vec3 &a, const Vec3 &b, const Vec3 &c)
    {
        Vec3 n = (b - a).cross(c - a);
        double len = n.norm();
        if (!(len > 1e-12))
            throw std::invalid_argument("Degenerate point triple does not define a plane.");
        Plane p;
        p.normal = n / len;
        p.d = -p.normal.dot(a);
        return p;
    }

    Vec3 mirror_point(const Vec3 &p, const Plane &plane)
    {
        return p - plane.normal * (2.0 * plane.signed_distance(p));
    }

    std::optional<double> intersect_triangle(const Ray &ray, const Vec3 &a, const Vec3 &b, const Vec3 &c)
    {
        const Vec3 e1 = b - a;
        const Vec3 e2 = c - a;
        const Vec3 pvec = ray.dir.cross(e2);
        const double det = e1.dot(pvec);
        if (std::abs(det) < 1e-14)
            return std::nullopt;
        const double inv_det = 1.0 / det;
        const Vec3 tvec = ray.origin - a;
        const double u = tvec.dot(pvec) * inv_det;
        if (u < -1e-12 || u > 1.0 + 1e-12)
            return std::nullopt;
        const Vec3 qvec = tvec.cross(e1);
        const double v = ray.dir.dot(qvec) * inv_det;
        if (v < -1e-12 || u + v > 1.0 + 1e-12)
            return std::nullopt;
        const double t = e2.dot(qvec) * inv_det;
        if (t <= 0.0)
            return std::nullopt;
        return t;
    }

    void Aabb::grow(const Vec3 &p)
    {
        lo.x = std::min(lo.x, p.x), lo.y = std::min(lo.y, p.y), lo.z = std::min(lo.z, p.z);
        hi.x = std::max(hi.x, p.x), hi.y = std::max(hi.y, p.y), hi.z = std::max(hi.z, p.z);
    }

    void Aabb::grow(const Aabb &b)
    {
        grow(b.lo);
        grow(b.hi);
    }

    bool Aabb::hit(const Ray &ray, double t_min, double t_max) const
    {
        for (int axis = 0; axis < 3; axis++)
        {
            const double o = axis == 0 ? ray.origin.x : axis == 1 ? ray.origin.y : ray.origin.z;
            const double d = axis == 0 ? ray.dir.x : axis == 1 ? ray.dir.y : ray.dir.z;
            const double l = axis == 0 ? lo.x : axis == 1 ? lo.y : lo.z;
            const double h = axis == 0 ? hi.x : axis == 1 ? hi.y : hi.z;
            if (std::abs(d) < 1e-300)
            {
                if (o < l || o > h)
                    return false;
                continue;
            }
            double inv = 1.0 / d;
            double t0 = (l - o) * inv;
            double t1 = (h - o) * inv;
            if (t0 > t1)
                std::swap(t0, t1);
            t_min = std::max(t_min, t0);
            t_max = std::min(t_max, t1);
            if (t_max < t_min)
                return false;
        }
        return true;
    }

    static Aabb triangle_box(const std::vector<Vec3> &v, const Triangle &t)
    {
        Aabb b;
        b.grow(v[t.a]);
        b.grow(v[t.b]);
        b.grow(v[t.c]);
        return b;
    }

    std::int32_t Bvh::build_node(const std::vector<Aabb> &boxes, const std::vector<Vec3> &centroids,
                                 std::uint32_t first, std::uint32_t count)
    {
        Node node;
        for (std::uint32_t i = 0; i < count; i++)
            node.box.grow(boxes[order_[first + i]]);

        constexpr std::uint32_t leaf_size = 4;
        if (count <= leaf_size)
        {
            node.first = first;
            node.count = count;
            nodes_.push_back(node);
            return std::int32_t(nodes_.size()) - 1;
        }

        // Split at the centroid median of the widest axis; ties resolve by
        // original index so the tree is reproducible.
        Aabb cbox;
        for (std::uint32_t i = 0; i < count; i++)
            cbox.grow(centroids[order_[first + i]]);
        Vec3 ext = cbox.hi - cbox.lo;
        int axis = 0;
        if (ext.y > ext.x)
            axis = 1;
        if (ext.z > (axis == 0 ? ext.x : ext.y))
            axis = 2;

        auto key = [&](std::uint32_t idx) {
            const Vec3 &c = centroids[idx];
            return axis == 0 ? c.x : axis == 1 ? c.y : c.z;
        };
        std::uint32_t mid = count / 2;
        std::nth_element(order_.begin() + first, order_.begin() + first + mid, order_.begin() + first + count,
                         [&](std::uint32_t l, std::uint32_t r) {
                             double kl = key(l), kr = key(r);
                             if (kl != kr)
                                 return kl < kr;
                             return l < r;
                         });

        std::int32_t self = std::int32_t(nodes_.size());
        nodes_.push_back(node);
        std::int32_t left = build_node(boxes, centroids, first, mid);
        std::int32_t right = build_node(boxes, centroids, first + mid, count - mid);
        nodes_[self].left = left;
        nodes_[self].right = right;
        return self;
    }

    Bvh Bvh::build(const std::vector<Vec3> &vertices, const std::vector<Triangle> &triangles)
    {
        Bvh bvh;
        if (triangles.empty())
            return bvh;

        std::vector<Aabb> boxes(triangles.size());
        std::vector<Vec3> centroids(triangles.size());
        for (std::size_t i = 0; i < triangles.size(); i++)
        {
            boxes[i] = triangle_box(vertices, triangles[i]);
            centroids[i] = (vertices[triangles[i].a] + vertices[triangles[i].b] + vertices[triangles[i].c]) / 3.0;
        }
        bvh.order_.resize(triangles.size());
        for (std::uint32_t i = 0; i < triangles.size(); i++)
            bvh.order_[i] = i;
        bvh.nodes_.reserve(2 * triangles.size());
        bvh.build_node(boxes, centroids, 0, std::uint32_t(triangles.size()));
        return bvh;
    }

    std::optional<Hit> Bvh::nearest(const Ray &ray, const std::vector<Vec3> &vertices,
                                    const std::vector<Triangle> &triangles,
                                    double t_min, double t_max) const
    {
        if (nodes_.empty())
            return std::nullopt;

        std::optional<Hit> best;
        std::int32_t stack[64];
        int top = 0;
        stack[top++] = 0;
        while (top > 0)
        {
            const Node &node = nodes_[stack[--top]];
            if (!node.box.hit(ray, t_min, t_max))
                continue;
            if (node.count > 0)
            {
                for (std::uint32_t i = 0; i < node.count; i++)
                {
                    std::uint32_t idx = order_[node.first + i];
                    const Triangle &tri = triangles[idx];
                    auto t = intersect_triangle(ray, vertices[tri.a], vertices[tri.b], vertices[tri.c]);
                    if (t && *t > t_min && *t < t_max)
                    {
                        t_max = *t;
                        best = Hit{idx, *t, ray.origin + ray.dir * *t};
                    }
                }
            }
            else
            {
                stack[top++] = node.left;
                stack[top++] = node.right;
            }
        }
        return best;
    }

    void Bvh::collect(const Ray &ray, const std::vector<Vec3> &vertices,
                      const std::vector<Triangle> &triangles,
                      double t_min, double t_max, std::vector<Hit> &out) const
    {
        if (nodes_.empty())
            return;

        std::int32_t stack[64];
        int top = 0;
        stack[top++] = 0;
        while (top > 0)
        {
            const Node &node = nodes_[stack[--top]];
            if (!node.box.hit(ray, t_min, t_max))
                continue;
            if (node.count > 0)
            {
                for (std::uint32_t i = 0; i < node.count; i++)
                {
                    std::uint32_t idx = order_[node.first + i];
                    const Triangle &tri = triangles[idx];
                    auto t = intersect_triangle(ray, vertices[tri.a], vertices[tri.b], vertices[tri.c]);
                    if (t && *t > t_min && *t < t_max)
                        out.push_back(Hit{idx, *t, ray.origin + ray.dir * *t});
                }
            }
            else
            {
                stack[top++] = node.left;
                stack[top++] = node.right;
            }
        }
    }

    double wedge_exterior_angle(const Wedge &w, const Vec3 &dir)
    {
        Vec3 perp = dir - w.edge_dir * dir.dot(w.edge_dir);
        double len = perp.norm();
        if (!(len > 1e-12))
            throw std::invalid_argument("Direction parallel to the wedge edge has no exterior angle.");
        perp = perp / len;
        double a = std::atan2(perp.dot(w.face0_normal), perp.dot(w.face0_tangent));
        if (a < 0.0)
            a += 2.0 * std::numbers::pi;
        return a;
    }

} // namespace uavrt
