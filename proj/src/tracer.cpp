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

#include "uavrt/tracer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace uavrt
{

    namespace
    {

        constexpr double pi = std::numbers::pi;

        // Endpoint guard for occlusion scans, in metres along the segment.
        // Hits closer than this to either endpoint belong to the facet the
        // endpoint sits on and must not count as blockers.
        constexpr double k_endpoint_eps = 1e-6;

        struct SegmentScan
        {
            bool blocked = false;
            int foliage_crossings = 0;
        };

        // Walk every facet crossing the open segment (a, b). Opaque facets
        // block; foliage facets are transparent but counted.
        SegmentScan scan_segment(const SceneDatabase &scene, const Vec3 &a, const Vec3 &b)
        {
            SegmentScan out;
            const Vec3 diff = b - a;
            const double len = diff.norm();
            if (len <= 2.0 * k_endpoint_eps)
                return out;

            const Ray ray{a, diff * (1.0 / len)};
            std::vector<Hit> hits;
            scene.bvh.collect(ray, scene.vertices, scene.triangles, k_endpoint_eps, len - k_endpoint_eps, hits);
            for (const Hit &h : hits)
            {
                const Material &m = scene.materials[scene.triangles[h.triangle_index].material_id];
                if (m.foliage)
                    ++out.foliage_crossings;
                else
                {
                    out.blocked = true;
                    break;
                }
            }
            return out;
        }

        void require_distinct(const TraceQuery &q)
        {
            if ((q.tx - q.rx).norm() == 0.0)
                throw std::invalid_argument("trace: transmitter and receiver coincide");
        }

        double clamped_acos(double c)
        {
            return std::acos(std::clamp(c, -1.0, 1.0));
        }

    } // namespace

    std::optional<PropagationPath> trace_los(const SceneDatabase &scene, const TraceQuery &q)
    {
        require_distinct(q);

        const SegmentScan scan = scan_segment(scene, q.tx, q.rx);
        if (scan.blocked)
            return std::nullopt;

        PropagationPath p;
        p.kind = PathKind::los;
        p.d_total = (q.tx - q.rx).norm();
        p.departure = angles_of_separation(q.tx, q.rx);
        p.arrival = angles_of_separation(q.rx, q.tx);
        p.foliage_crossings = scan.foliage_crossings;
        return p;
    }

    std::vector<PropagationPath> trace_reflections(const SceneDatabase &scene, const TraceQuery &q)
    {
        require_distinct(q);

        std::vector<PropagationPath> out;
        for (std::size_t i = 0; i < scene.triangles.size(); ++i)
        {
            const Triangle &tri = scene.triangles[i];
            const Material &m = scene.materials[tri.material_id];
            if (!m.reflective || m.foliage)
                continue;

            const Vec3 &va = scene.vertices[tri.a];
            const Vec3 &vb = scene.vertices[tri.b];
            const Vec3 &vc = scene.vertices[tri.c];
            const Plane plane = Plane::from_points(va, vb, vc);

            // Facets are one-sided: both endpoints must face the outward
            // normal, otherwise the mirror construction is unphysical.
            if (plane.signed_distance(q.tx) < 1e-9 || plane.signed_distance(q.rx) < 1e-9)
                continue;

            const Vec3 image = mirror_point(q.tx, plane);
            const Vec3 seg = q.rx - image;
            const double seg_len = seg.norm();
            if (seg_len <= 2.0 * k_endpoint_eps)
                continue;
            const Ray mirror_ray{image, seg * (1.0 / seg_len)};
            const auto t = intersect_triangle(mirror_ray, va, vb, vc);
            if (!t || *t >= seg_len)
                continue;

            const Vec3 s = image + mirror_ray.dir * (*t);
            const SegmentScan leg_in = scan_segment(scene, q.tx, s);
            if (leg_in.blocked)
                continue;
            const SegmentScan leg_out = scan_segment(scene, s, q.rx);
            if (leg_out.blocked)
                continue;

            PropagationPath p;
            p.kind = PathKind::reflected;
            p.interaction = s;
            p.id = tri.face_id;
            p.dist_s_tx = (q.tx - s).norm();
            p.dist_rx_s = (q.rx - s).norm();
            p.d_total = p.dist_s_tx + p.dist_rx_s;
            p.departure = angles_of_separation(q.tx, s);
            p.arrival = angles_of_separation(q.rx, s);
            p.foliage_crossings = leg_in.foliage_crossings + leg_out.foliage_crossings;
            p.incidence_theta = clamped_acos(dot((q.tx - s).normalized(), plane.normal));
            p.facet_normal = plane.normal;
            p.material_id = tri.material_id;
            out.push_back(p);
        }
        return out;
    }

    std::vector<PropagationPath> trace_diffractions(const SceneDatabase &scene, const TraceQuery &q)
    {
        require_distinct(q);

        std::vector<PropagationPath> out;
        for (std::size_t wi = 0; wi < scene.wedges.size(); ++wi)
        {
            const Wedge &w = scene.wedges[wi];
            const Vec3 axis = w.edge_dir;
            const double edge_len = (w.p1 - w.p0).norm();

            // Axial/radial split of both endpoints about the edge line.
            const Vec3 rel_tx = q.tx - w.p0;
            const Vec3 rel_rx = q.rx - w.p0;
            const double ax_tx = dot(rel_tx, axis);
            const double ax_rx = dot(rel_rx, axis);
            const double rho_tx = (rel_tx - axis * ax_tx).norm();
            const double rho_rx = (rel_rx - axis * ax_rx).norm();
            if (rho_tx < 1e-9 || rho_rx < 1e-9)
                continue; // endpoint on the edge line: no transverse plane

            // Unfolding the two legs into a common plane turns the length
            // minimisation into a straight line, crossing the edge at the
            // radius-weighted mean of the axial coordinates.
            const double s_opt = (ax_tx * rho_rx + ax_rx * rho_tx) / (rho_tx + rho_rx);
            if (s_opt < 0.0 || s_opt > edge_len)
                continue;
            const Vec3 bend = w.p0 + axis * s_opt;

            const Vec3 to_tx = q.tx - bend;
            const Vec3 to_rx = q.rx - bend;
            const double phi_inc = wedge_exterior_angle(w, to_tx);
            const double phi_obs = wedge_exterior_angle(w, to_rx);
            const double limit = w.n_factor * pi + 1e-9;
            if (phi_inc > limit || phi_obs > limit)
                continue; // inside the solid sector

            const SegmentScan leg_in = scan_segment(scene, q.tx, bend);
            if (leg_in.blocked)
                continue;
            const SegmentScan leg_out = scan_segment(scene, bend, q.rx);
            if (leg_out.blocked)
                continue;

            PropagationPath p;
            p.kind = PathKind::diffracted;
            p.interaction = bend;
            p.id = static_cast<std::uint32_t>(wi);
            p.dist_s_tx = to_tx.norm();
            p.dist_rx_s = to_rx.norm();
            p.d_total = p.dist_s_tx + p.dist_rx_s;
            p.departure = angles_of_separation(q.tx, bend);
            p.arrival = angles_of_separation(q.rx, bend);
            p.foliage_crossings = leg_in.foliage_crossings + leg_out.foliage_crossings;
            p.phi_incidence = phi_inc;
            p.phi_observation = phi_obs;
            p.n_factor = w.n_factor;
            p.material_id = w.material_id;
            out.push_back(p);
        }
        return out;
    }

    std::vector<PropagationPath> trace_all(const SceneDatabase &scene, const TraceQuery &q)
    {
        std::vector<PropagationPath> out;
        if (auto los = trace_los(scene, q))
            out.push_back(*los);
        if (q.options.enable_reflections)
        {
            auto refl = trace_reflections(scene, q);
            out.insert(out.end(), refl.begin(), refl.end());
        }
        if (q.options.enable_diffractions)
        {
            auto diff = trace_diffractions(scene, q);
            out.insert(out.end(), diff.begin(), diff.end());
        }

        std::sort(out.begin(), out.end(), [](const PropagationPath &a, const PropagationPath &b) {
            if (a.kind != b.kind)
                return static_cast<int>(a.kind) < static_cast<int>(b.kind);
            if (a.id != b.id)
                return a.id < b.id;
            return a.d_total < b.d_total;
        });
        // Coplanar facets can each accept a specular point landing exactly on
        // a shared edge or vertex; that is one physical bounce, so collapse
        // reflections with the same face or a coincident interaction point.
        out.erase(std::unique(out.begin(), out.end(),
                              [](const PropagationPath &a, const PropagationPath &b) {
                                  if (a.kind != PathKind::reflected || b.kind != PathKind::reflected)
                                      return false;
                                  return a.id == b.id || (a.interaction - b.interaction).norm() < 1e-6;
                              }),
                  out.end());

        if (q.max_paths > 0 && out.size() > q.max_paths)
            out.resize(q.max_paths);
        return out;
    }

} // namespace uavrt
