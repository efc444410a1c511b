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

#include "uavrt/em.hpp"
#include "uavrt/kinematics.hpp"
#include "uavrt/scene.hpp"
#include "uavrt/tracer.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

namespace uavrt
{

    // One ray of one channel snapshot.
    struct RayRecord
    {
        std::uint32_t ray_id = 0; // 0 direct, 1000000 + face id, 2000000 + wedge index
        PathKind kind = PathKind::los;
        double attenuation_db = 0.0;   // total path attenuation, larger = weaker
        double relative_gain_db = 0.0; // reference attenuation minus this ray's, <= 0
        double delay_s = 0.0;
        double relative_delay_s = 0.0; // against the straight tx-rx line, >= 0
        double phase_rad = 0.0;        // initial draw + accumulated Doppler, in (-pi, pi]
        SphericalAngles departure;
        SphericalAngles arrival;
        int foliage_crossings = 0;
        double foliage_db = 0.0; // penetration loss included in attenuation_db
    };

    // All valid rays of one time instant, direct ray first when present.
    struct ChannelSnapshot
    {
        double t = 0.0;
        std::vector<RayRecord> rays;

        std::size_t valid_ray_count() const { return rays.size(); }
    };

    struct SimulationConfig
    {
        double frequency_mhz = 28000.0;
        Vec3 receiver;                  // fixed ground terminal
        double threshold_db = -45.0;    // relative-gain cutoff; -inf disables
        double foliage_loss_db = 10.0;  // per pierced foliage facet
        double tx_power_dbm = 20.0;     // metadata only, gains stay relative
        double polarization_tilt = 0.0; // reserved; vertical polarization assumed
        std::uint64_t seed = 1;
        std::size_t max_paths = 0;
        TraceOptions trace;
        std::size_t workers = 0; // tracer worker threads; 0 = all available cores
    };

    // Snapshot series of one flight.
    struct SimulationRun
    {
        std::vector<ChannelSnapshot> snapshots;
        std::string scene_note;
        std::string trajectory_note;
        double trace_seconds = 0.0; // wall clock spent inside the tracer
        std::uint64_t seed = 0;
    };

    // Stable ray identity across snapshots, derived from the interaction
    // geometry alone.
    std::uint32_t ray_id_of(const PropagationPath &path);

    // Threads phase state through a snapshot series: a hash-seeded initial
    // phase per ray id plus a Doppler sum accumulated while the ray recurs.
    // A ray that disappears keeps its accumulator and resumes from it if the
    // same id shows up again. Counter-based, so identical seeds give
    // identical series.
    class PhaseTracker
    {
      public:
        PhaseTracker(std::uint64_t seed, double wavelength_m);

        // Uniform initial phase in [0, 2*pi), a pure function of (seed, id).
        static double initial_phase(std::uint64_t seed, std::uint32_t ray_id);

        // Start the snapshot at time t; steps within it use dt = t - previous
        // t (0 for the first snapshot, whose velocity only labels heading).
        void begin_snapshot(double t);

        // Accumulate one ray's Doppler over the current step and return its
        // wrapped total phase. toward_tx is the unit direction from the
        // ray's first scene target (or the receiver) back to the
        // transmitter: by stationarity of the bounce point, the path-length
        // rate is dot(velocity, toward_tx).
        double step(std::uint32_t ray_id, const Vec3 &velocity, const Vec3 &toward_tx);

      private:
        std::uint64_t seed_;
        double wavelength_m_;
        double last_t_ = 0.0;
        double dt_ = 0.0;
        bool started_ = false;
        std::unordered_map<std::uint32_t, double> accumulated_;
    };

    // Turn one instant's traced paths into ray records: powers from the
    // field models against the direct-ray reference, delays against the
    // straight-line delay, phases from the tracker, foliage penetration
    // added per crossing. No threshold is applied here.
    ChannelSnapshot synthesize_snapshot(const std::vector<PropagationPath> &paths,
                                        const KinematicState &state, const SceneDatabase &scene,
                                        const SimulationConfig &cfg, PhaseTracker &phases);

    // Drop rays whose relative gain falls below the threshold; the direct
    // ray always survives. Throws std::invalid_argument for a non-negative
    // threshold (-inf is the documented off switch).
    ChannelSnapshot filter_rays(const ChannelSnapshot &snapshot, double threshold_db);

    // Full pipeline over a sampled trajectory: trace, synthesize, filter,
    // one snapshot per kinematic state. Tracing runs on cfg.workers threads
    // (instants are independent); synthesis then reduces sequentially in
    // time order, so the result is bitwise independent of the pool size.
    // The notes are provenance strings stored verbatim.
    SimulationRun run_simulation(const SceneDatabase &scene, const Trajectory &trajectory,
                                 const SimulationConfig &cfg, std::string scene_note = {},
                                 std::string trajectory_note = {});

    // One CSV row per ray per instant:
    //   t,ray_id,kind,rel_power_dB,rel_delay_ns,aod_az_deg,aod_el_deg,
    //   aoa_az_deg,aoa_el_deg,phase_rad
    // Numbers are printed with %.9g, so equal runs serialize byte for byte.
    void write_run_csv(std::ostream &out, const SimulationRun &run);
    void write_run_csv_file(const std::string &path, const SimulationRun &run);

    // Inverse of write_run_csv for the analysis pipeline: rebuilds snapshots
    // (times, kinds, relative gains/delays, angles, phases) from a CSV.
    // Fields the CSV does not carry (absolute attenuation and delay, foliage
    // data, trace timing) come back zeroed. Malformed input raises
    // std::runtime_error as "<name>:<line>: message".
    SimulationRun read_run_csv(std::istream &in, const std::string &stream_name = "<run>");
    SimulationRun read_run_csv_file(const std::string &path);

} // namespace uavrt
