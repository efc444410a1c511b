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

#include "uavrt/geometry.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace uavrt
{

    // Piecewise-linear flight path sampled at a fixed interval.
    struct Trajectory
    {
        std::vector<Vec3> waypoints; // at least two, consecutive ones distinct
        double speed_mps = 0.0;
        double delta_t_s = 1.0;
        double duration_s = 0.0;
    };

    // Platform state at one sample instant. The velocity is labelled by the
    // step that ends at t, so position(t) = position(t - dt) + velocity(t)*dt
    // holds sample by sample; the first state carries the initial heading.
    struct KinematicState
    {
        double t = 0.0;
        Vec3 position;
        Vec3 velocity;
        SphericalAngles velocity_angles; // zero when the platform is at rest
    };

    // Walk the polyline at constant speed and emit
    // floor(duration/dt) + 1 states. The platform parks at the last waypoint
    // once the path is exhausted (zero velocity). Throws std::invalid_argument
    // on an invalid trajectory.
    std::vector<KinematicState> sample_trajectory(const Trajectory &traj);

    // Key-value text: "speed <mps>", "dt <s>", "duration <s>", and one
    // "waypoint <x> <y> <z>" per vertex. '#' comments allowed. Throws
    // std::runtime_error with "<name>:<line>: message" on malformed input.
    Trajectory load_trajectory(std::istream &in, const std::string &stream_name = "<trajectory>");
    Trajectory load_trajectory_file(const std::string &path);

    // Law-of-cosines range update: the distance from a fixed point to the
    // moving platform after one step, given the previous range, the angles of
    // the previous platform position as seen from the fixed point, and the
    // step velocity. Matches |prev_vec + v*dt| to rounding.
    double range_update_closed_form(double prev_range, const SphericalAngles &range_dir,
                                    const Vec3 &velocity, double delta_t);

    // Range update for the receiver at the origin.
    double distance_tx_rx_closed_form(const Vec3 &prev_tx_position, const Vec3 &velocity, double delta_t);

    // Range update for a fixed scatterer.
    double distance_tx_scatterer_closed_form(const Vec3 &prev_tx_position, const Vec3 &scatterer,
                                             const Vec3 &velocity, double delta_t);

    // Left-rectangle accumulation of the projected velocity history:
    // (2*pi/lambda) * sum_i dot(v_i, r_i) * dt, where r_i is the unit arrival
    // direction of the ray (pointing from the receiver toward the incoming
    // wave). Throws std::invalid_argument when the spans differ in length.
    double doppler_phase(std::span<const Vec3> velocities, std::span<const Vec3> arrival_dirs,
                         double delta_t, double wavelength_m);

    // Propagation delay of an unfolded path length, in seconds.
    double propagation_delay(double total_distance_m);

} // namespace uavrt
