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

#pragma once

#include "uavrt/scene.hpp"

#include <optional>
#include <vector>

namespace uavrt
{

    enum class PathKind : int
    {
        los = 0,
        reflected = 1,
        diffracted = 2,
    };

    // One geometric propagation path at a single time instant, carrying every
    // quantity the field models need.
    struct PropagationPath
    {
        PathKind kind = PathKind::los;
        Vec3 interaction;     // bounce/bend point; unset for line of sight
        std::uint32_t id = 0; // reflected: face id; diffracted: wedge index; 0 for LoS

        double dist_rx_s = 0.0; // receiver -> interaction (0 for LoS)
        double dist_s_tx = 0.0; // interaction -> transmitter (0 for LoS)
        double d_total = 0.0;   // unfolded length (direct distance for LoS)

        SphericalAngles departure; // at the transmitter, toward the first leg
        SphericalAngles arrival;   // at the receiver, toward the incoming ray

        int foliage_crossings = 0; // foliage facets pierced along the path

        // Reflection geometry.
        double incidence_theta = 0.0; // measured from the facet normal
        Vec3 facet_normal;

        // Diffraction geometry, in the edge-normal plane.
        double phi_incidence = 0.0;
        double phi_observation = 0.0;
        double n_factor = 0.0;

        std::uint32_t material_id = 0;
    };

    struct TraceOptions
    {
        bool enable_reflections = true;
        bool enable_diffractions = true;
    };

    struct TraceQuery
    {
        Vec3 tx;
        Vec3 rx;
        TraceOptions options;
        std::size_t max_paths = 0; // 0 = unlimited
    };

    // Direct path, present unless an opaque facet blocks the segment.
    // Foliage facets never block; each pierced one increments the crossing
    // count. Throws std::invalid_argument when tx and rx coincide.
    std::optional<PropagationPath> trace_los(const SceneDatabase &scene, const TraceQuery &q);

    // Image-method single-bounce candidates: one specular path per facet at
    // most, accepted when the mirror segment pierces the facet interior, both
    // legs are unoccluded, and transmitter and receiver sit on its outward
    // side. Foliage facets reflect nothing.
    std::vector<PropagationPath> trace_reflections(const SceneDatabase &scene, const TraceQuery &q);

    // Single-edge diffraction candidates: for each wedge, the bend point that
    // minimises the unfolded path length along the edge (closed form); the
    // path is kept when the point falls within the edge segment, the face
    // angles are inside the exterior cone, and both legs are unoccluded.
    std::vector<PropagationPath> trace_diffractions(const SceneDatabase &scene, const TraceQuery &q);

    // LoS + reflections + diffractions per the query options, deduplicated,
    // deterministically ordered by (kind, id), truncated to max_paths when
    // set.
    std::vector<PropagationPath> trace_all(const SceneDatabase &scene, const TraceQuery &q);

} // namespace uavrt
