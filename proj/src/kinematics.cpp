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

#include "uavrt/kinematics.hpp"

#include "uavrt/em.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace uavrt
{
    namespace
    {
        [[noreturn]] void parse_fail(const std::string &name, int line, const std::string &message)
        {
            throw std::runtime_error(name + ":" + std::to_string(line) + ": " + message);
        }

        void validate(const Trajectory &traj)
        {
            if (!(traj.speed_mps > 0.0))
                throw std::invalid_argument("Trajectory speed must be positive.");
            if (!(traj.delta_t_s > 0.0))
                throw std::invalid_argument("Trajectory sample interval must be positive.");
            if (!(traj.duration_s > 0.0))
                throw std::invalid_argument("Trajectory duration must be positive.");
            if (traj.waypoints.size() < 2)
                throw std::invalid_argument("Trajectory needs at least two waypoints.");
            for (std::size_t i = 1; i < traj.waypoints.size(); i++)
                if ((traj.waypoints[i] - traj.waypoints[i - 1]).norm() < 1e-12)
                    throw std::invalid_argument("Consecutive trajectory waypoints must be distinct.");
        }

        // Point at a given arclength along the polyline, clamped to its end.
        Vec3 point_at(const std::vector<Vec3> &wp, const std::vector<double> &seg_len, double s)
        {
            for (std::size_t i = 0; i + 1 < wp.size(); i++)
            {
                if (s <= seg_len[i])
                    return wp[i] + (wp[i + 1] - wp[i]) * (s / seg_len[i]);
                s -= seg_len[i];
            }
            return wp.back();
        }
    } // namespace

    std::vector<KinematicState> sample_trajectory(const Trajectory &traj)
    {
        validate(traj);

        std::vector<double> seg_len(traj.waypoints.size() - 1);
        for (std::size_t i = 0; i + 1 < traj.waypoints.size(); i++)
            seg_len[i] = (traj.waypoints[i + 1] - traj.waypoints[i]).norm();

        // A hair of slack so durations that are exact multiples of dt do not
        // lose their final sample to representation error.
        const std::size_t count = std::size_t(std::floor(traj.duration_s / traj.delta_t_s + 1e-9)) + 1;

        std::vector<KinematicState> states(count);
        for (std::size_t k = 0; k < count; k++)
        {
            states[k].t = double(k) * traj.delta_t_s;
            states[k].position = point_at(traj.waypoints, seg_len, traj.speed_mps * states[k].t);
        }

        for (std::size_t k = 0; k < count; k++)
        {
            if (k == 0)
                states[0].velocity = (traj.waypoints[1] - traj.waypoints[0]).normalized() * traj.speed_mps;
            else
                states[k].velocity = (states[k].position - states[k - 1].position) / traj.delta_t_s;

            if (states[k].velocity.norm() > 1e-12)
                states[k].velocity_angles = angles_of_separation({0.0, 0.0, 0.0}, states[k].velocity);
            else
            {
                states[k].velocity = {0.0, 0.0, 0.0};
                states[k].velocity_angles = {0.0, 0.0};
            }
        }
        return states;
    }

    Trajectory load_trajectory(std::istream &in, const std::string &stream_name)
    {
        Trajectory traj;
        std::string line;
        int line_no = 0;
        bool saw_speed = false, saw_duration = false;

        while (std::getline(in, line))
        {
            line_no++;
            std::istringstream stream(line);
            std::string key;
            if (!(stream >> key) || key[0] == '#')
                continue;

            auto read_value = [&](double &out) {
                if (!(stream >> out) || !std::isfinite(out))
                    parse_fail(stream_name, line_no, "expected a number after '" + key + "'");
            };

            if (key == "speed")
            {
                read_value(traj.speed_mps);
                saw_speed = true;
            }
            else if (key == "dt")
                read_value(traj.delta_t_s);
            else if (key == "duration")
            {
                read_value(traj.duration_s);
                saw_duration = true;
            }
            else if (key == "waypoint")
            {
                Vec3 p;
                read_value(p.x);
                read_value(p.y);
                read_value(p.z);
                traj.waypoints.push_back(p);
            }
            else
                parse_fail(stream_name, line_no, "unknown key '" + key + "'");

            std::string extra;
            if (stream >> extra && extra[0] != '#')
                parse_fail(stream_name, line_no, "unexpected trailing '" + extra + "'");
        }

        if (!saw_speed)
            parse_fail(stream_name, line_no + 1, "missing 'speed'");
        if (!saw_duration)
            parse_fail(stream_name, line_no + 1, "missing 'duration'");
        try
        {
            validate(traj);
        }
        catch (const std::invalid_argument &e)
        {
            throw std::runtime_error(stream_name + ": " + e.what());
        }
        return traj;
    }

    Trajectory load_trajectory_file(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw std::runtime_error("cannot open '" + path + "'");
        return load_trajectory(in, path);
    }

    double range_update_closed_form(double prev_range, const SphericalAngles &range_dir,
                                    const Vec3 &velocity, double delta_t)
    {
        const double step = velocity.norm() * delta_t;
        if (step == 0.0)
            return prev_range;
        const SphericalAngles v = angles_of_separation({0.0, 0.0, 0.0}, velocity);
        // Spherical dot product between the range direction and the heading.
        const double cos_between = std::cos(range_dir.elevation) * std::cos(v.elevation) *
                                       std::cos(range_dir.azimuth - v.azimuth) +
                                   std::sin(range_dir.elevation) * std::sin(v.elevation);
        return std::sqrt(prev_range * prev_range + step * step + 2.0 * prev_range * step * cos_between);
    }

    double distance_tx_rx_closed_form(const Vec3 &prev_tx_position, const Vec3 &velocity, double delta_t)
    {
        return range_update_closed_form(prev_tx_position.norm(),
                                        angles_of_separation({0.0, 0.0, 0.0}, prev_tx_position),
                                        velocity, delta_t);
    }

    double distance_tx_scatterer_closed_form(const Vec3 &prev_tx_position, const Vec3 &scatterer,
                                             const Vec3 &velocity, double delta_t)
    {
        return range_update_closed_form((prev_tx_position - scatterer).norm(),
                                        angles_of_separation(scatterer, prev_tx_position),
                                        velocity, delta_t);
    }

    double doppler_phase(std::span<const Vec3> velocities, std::span<const Vec3> arrival_dirs,
                         double delta_t, double wavelength_m)
    {
        if (velocities.size() != arrival_dirs.size())
            throw std::invalid_argument("Velocity and arrival-direction histories must align.");
        if (!(wavelength_m > 0.0) || !(delta_t > 0.0))
            throw std::invalid_argument("Wavelength and time step must be positive.");

        double projected = 0.0;
        for (std::size_t i = 0; i < velocities.size(); i++)
            projected += dot(velocities[i], arrival_dirs[i]) * delta_t;
        return 2.0 * std::numbers::pi / wavelength_m * projected;
    }

    double propagation_delay(double total_distance_m)
    {
        if (total_distance_m < 0.0)
            throw std::invalid_argument("Path length cannot be negative.");
        return total_distance_m / speed_of_light;
    }

} // namespace uavrt
