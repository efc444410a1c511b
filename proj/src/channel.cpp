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

#include "uavrt/channel.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <istream>
#include <mutex>
#include <numbers>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace uavrt
{

    namespace
    {

        constexpr double pi = std::numbers::pi;
        constexpr double two_pi = 2.0 * std::numbers::pi;

        std::uint64_t splitmix64(std::uint64_t x)
        {
            x += 0x9e3779b97f4a7c15ULL;
            x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
            x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
            return x ^ (x >> 31);
        }

        // Split of a unit field direction for a vertically polarized wave
        // transverse to propagation direction d: the in-plane unit vector of
        // global up. Degenerates for vertical propagation, where the caller
        // falls back to an even split.
        std::optional<Vec3> vertical_pol_unit(const Vec3 &d)
        {
            const Vec3 v = Vec3{0, 0, 1} - d * d.z;
            const double len = v.norm();
            if (len < 1e-9)
                return std::nullopt;
            return v * (1.0 / len);
        }

        // Effective scalar reflection coefficient for a vertically polarized
        // incident field: project the field onto the perpendicular/parallel
        // axes of the incidence plane and blend the two Fresnel coefficients
        // by power weight. Near normal incidence the plane of incidence is
        // ill-defined and the two coefficients describe the same reflection
        // in opposite sign conventions, so the parallel one stands alone
        // there instead of a blend that would cancel.
        double effective_reflection(double epsilon_r, double theta, const Vec3 &d_in, const Vec3 &normal)
        {
            const double r_par = reflection_coefficient(epsilon_r, theta, Polarization::parallel);
            const double r_perp = reflection_coefficient(epsilon_r, theta, Polarization::perpendicular);

            double w_perp = 0.0;
            const Vec3 perp_axis = cross(d_in, normal);
            const double plen = perp_axis.norm();
            const auto pol = vertical_pol_unit(d_in);
            if (plen > 1e-9 && pol)
            {
                const double c = dot(*pol, perp_axis * (1.0 / plen));
                w_perp = c * c;
            }
            return w_perp * r_perp + (1.0 - w_perp) * r_par;
        }

        // Fraction of a vertically polarized field lying along the wedge
        // edge (the soft component of the diffraction heuristic).
        double edge_soft_weight(const Vec3 &d_in, const Vec3 &edge_dir)
        {
            const auto pol = vertical_pol_unit(d_in);
            if (!pol)
                return 0.5;
            const Vec3 edge_transverse = edge_dir - d_in * dot(edge_dir, d_in);
            const double len = edge_transverse.norm();
            if (len < 1e-9)
                return 0.5; // propagation along the edge: no transverse split
            const double c = dot(*pol, edge_transverse * (1.0 / len));
            return c * c;
        }

    } // namespace

    std::uint32_t ray_id_of(const PropagationPath &path)
    {
        switch (path.kind)
        {
        case PathKind::los:
            return 0;
        case PathKind::reflected:
            return 1000000u + path.id;
        case PathKind::diffracted:
            return 2000000u + path.id;
        }
        throw std::logic_error("Unknown path kind.");
    }

    PhaseTracker::PhaseTracker(std::uint64_t seed, double wavelength_m)
        : seed_(seed), wavelength_m_(wavelength_m)
    {
        if (!(wavelength_m > 0.0))
            throw std::invalid_argument("Wavelength must be positive.");
    }

    double PhaseTracker::initial_phase(std::uint64_t seed, std::uint32_t ray_id)
    {
        const std::uint64_t h = splitmix64(splitmix64(seed) ^ (0x51ed270b2f75a5e3ULL + ray_id));
        return two_pi * (double(h >> 11) * 0x1.0p-53);
    }

    void PhaseTracker::begin_snapshot(double t)
    {
        dt_ = started_ ? t - last_t_ : 0.0;
        if (dt_ < 0.0)
            throw std::invalid_argument("Snapshots must advance in time.");
        last_t_ = t;
        started_ = true;
    }

    double PhaseTracker::step(std::uint32_t ray_id, const Vec3 &velocity, const Vec3 &toward_tx)
    {
        double &acc = accumulated_[ray_id];
        acc += two_pi / wavelength_m_ * dot(velocity, toward_tx) * dt_;
        return wrap_angle(initial_phase(seed_, ray_id) + acc);
    }

    ChannelSnapshot synthesize_snapshot(const std::vector<PropagationPath> &paths,
                                        const KinematicState &state, const SceneDatabase &scene,
                                        const SimulationConfig &cfg, PhaseTracker &phases)
    {
        const WaveContext ctx(cfg.frequency_mhz);
        const Vec3 tx = state.position;
        const Vec3 rx = cfg.receiver;
        const double d_direct = (tx - rx).norm();
        if (!(d_direct > 0.0))
            throw std::invalid_argument("Transmitter sits on the receiver.");

        const std::complex<double> e_ref = los_field(ctx, d_direct);
        const double p_direct = fspl_db(ctx, d_direct);
        const double tau_direct = propagation_delay(d_direct);

        phases.begin_snapshot(state.t);

        ChannelSnapshot snap;
        snap.t = state.t;
        snap.rays.reserve(paths.size());

        // Reference attenuation: the actual direct ray when present (its
        // foliage loss included), the free-space direct line otherwise.
        double p_reference = p_direct;
        for (const PropagationPath &path : paths)
            if (path.kind == PathKind::los)
                p_reference = p_direct + cfg.foliage_loss_db * path.foliage_crossings;

        for (const PropagationPath &path : paths)
        {
            RayRecord ray;
            ray.ray_id = ray_id_of(path);
            ray.kind = path.kind;
            ray.departure = path.departure;
            ray.arrival = path.arrival;
            ray.foliage_crossings = path.foliage_crossings;
            ray.foliage_db = cfg.foliage_loss_db * path.foliage_crossings;

            double excess = 0.0; // field loss against the direct reference
            Vec3 toward_tx;      // unit, first target -> transmitter
            if (path.kind == PathKind::los)
            {
                ray.delay_s = tau_direct;
                toward_tx = (tx - rx) * (1.0 / d_direct);
            }
            else
            {
                ray.delay_s = propagation_delay(path.d_total);
                toward_tx = (tx - path.interaction) * (1.0 / path.dist_s_tx);

                if (path.kind == PathKind::reflected)
                {
                    const double eps = scene.materials[path.material_id].epsilon_r;
                    const Vec3 d_in = -toward_tx; // propagation toward the facet
                    const double r = effective_reflection(eps, path.incidence_theta, d_in,
                                                          path.facet_normal);
                    const auto e = reflected_field(std::complex<double>(1.0, 0.0), r,
                                                   path.dist_rx_s, path.dist_s_tx, ctx);
                    excess = excess_loss_db(e, e_ref);
                }
                else
                {
                    const Wedge &w = scene.wedges[path.id];
                    const double eps = scene.materials[path.material_id].epsilon_r;
                    const double soft = edge_soft_weight(-toward_tx, w.edge_dir);
                    const auto [r0, rn] = wedge_face_coefficients(eps, path.phi_incidence,
                                                                  path.phi_observation,
                                                                  path.n_factor, soft);
                    WedgeDiffractionInput in;
                    in.dist_rx_s = path.dist_rx_s;
                    in.dist_s_tx = path.dist_s_tx;
                    in.n_factor = path.n_factor;
                    in.phi_incidence = path.phi_incidence;
                    in.phi_observation = path.phi_observation;
                    in.r0 = r0;
                    in.rn = rn;
                    const auto e = diffracted_field(std::complex<double>(1.0, 0.0), in, ctx);
                    excess = excess_loss_db(e, e_ref);
                }
            }

            ray.attenuation_db = p_direct - excess + ray.foliage_db;
            ray.relative_gain_db = p_reference - ray.attenuation_db;
            ray.relative_delay_s = ray.delay_s - tau_direct;
            ray.phase_rad = phases.step(ray.ray_id, state.velocity, toward_tx);
            snap.rays.push_back(ray);
        }

        // Direct ray first, then ascending ray id: the tracer emits kinds in
        // this order already, but the contract belongs to the snapshot.
        std::stable_sort(snap.rays.begin(), snap.rays.end(),
                         [](const RayRecord &a, const RayRecord &b) { return a.ray_id < b.ray_id; });
        return snap;
    }

    ChannelSnapshot filter_rays(const ChannelSnapshot &snapshot, double threshold_db)
    {
        if (!(threshold_db < 0.0))
            throw std::invalid_argument("Threshold must be negative (use -inf to disable).");

        ChannelSnapshot out;
        out.t = snapshot.t;
        out.rays.reserve(snapshot.rays.size());
        for (const RayRecord &ray : snapshot.rays)
            if (ray.kind == PathKind::los || ray.relative_gain_db >= threshold_db)
                out.rays.push_back(ray);
        return out;
    }

    SimulationRun run_simulation(const SceneDatabase &scene, const Trajectory &trajectory,
                                 const SimulationConfig &cfg, std::string scene_note,
                                 std::string trajectory_note)
    {
        const WaveContext ctx(cfg.frequency_mhz);

        SimulationRun run;
        run.scene_note = std::move(scene_note);
        run.trajectory_note = std::move(trajectory_note);
        run.seed = cfg.seed;

        const auto states = sample_trajectory(trajectory);
        run.snapshots.reserve(states.size());

        // Phase 1: trace every instant. Instants are independent, so this
        // is the parallel section; trace_seconds sums the time spent inside
        // trace_all across all workers.
        std::vector<std::vector<PropagationPath>> traced(states.size());
        std::size_t workers =
            cfg.workers ? cfg.workers
                        : std::max<std::size_t>(1, std::thread::hardware_concurrency());
        workers = std::min(workers, std::max<std::size_t>(1, states.size()));

        std::atomic<std::size_t> cursor{0};
        std::atomic<std::int64_t> trace_ns{0};
        std::exception_ptr first_failure;
        std::mutex failure_mutex;

        auto drain_queue = [&]()
        {
            try
            {
                for (;;)
                {
                    const std::size_t i = cursor.fetch_add(1);
                    if (i >= states.size())
                        break;
                    TraceQuery q{states[i].position, cfg.receiver, cfg.trace, cfg.max_paths};
                    const auto t0 = std::chrono::steady_clock::now();
                    traced[i] = trace_all(scene, q);
                    const auto t1 = std::chrono::steady_clock::now();
                    trace_ns.fetch_add(
                        std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
                }
            }
            catch (...)
            {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!first_failure)
                    first_failure = std::current_exception();
            }
        };

        if (workers <= 1)
        {
            drain_queue();
        }
        else
        {
            std::vector<std::thread> pool;
            pool.reserve(workers);
            for (std::size_t w = 0; w < workers; w++)
                pool.emplace_back(drain_queue);
            for (std::thread &worker : pool)
                worker.join();
        }
        if (first_failure)
            std::rethrow_exception(first_failure);
        run.trace_seconds = double(trace_ns.load()) * 1e-9;

        // Phase 2: sequential reduction in time order; the phase tracker is
        // a running sum over consecutive snapshots, so this part must not be
        // reordered. The pool size therefore cannot change the output.
        PhaseTracker phases(cfg.seed, ctx.wavelength_m);
        for (std::size_t i = 0; i < states.size(); i++)
        {
            auto snap = synthesize_snapshot(traced[i], states[i], scene, cfg, phases);
            run.snapshots.push_back(filter_rays(snap, cfg.threshold_db));
        }
        return run;
    }

    namespace
    {

        void append_g9(std::string &buf, double v)
        {
            char tmp[40];
            std::snprintf(tmp, sizeof tmp, "%.9g", v);
            buf += tmp;
        }

        const char *kind_word(PathKind k)
        {
            switch (k)
            {
            case PathKind::los:
                return "los";
            case PathKind::reflected:
                return "reflected";
            case PathKind::diffracted:
                return "diffracted";
            }
            return "?";
        }

    } // namespace

    void write_run_csv(std::ostream &out, const SimulationRun &run)
    {
        constexpr double rad_to_deg = 180.0 / pi;

        std::string buf;
        buf.reserve(64 * 1024);
        buf += "t,ray_id,kind,rel_power_dB,rel_delay_ns,aod_az_deg,aod_el_deg,"
               "aoa_az_deg,aoa_el_deg,phase_rad\n";
        for (const ChannelSnapshot &snap : run.snapshots)
        {
            for (const RayRecord &ray : snap.rays)
            {
                append_g9(buf, snap.t);
                buf += ',';
                buf += std::to_string(ray.ray_id);
                buf += ',';
                buf += kind_word(ray.kind);
                buf += ',';
                append_g9(buf, ray.relative_gain_db);
                buf += ',';
                append_g9(buf, ray.relative_delay_s * 1e9);
                buf += ',';
                append_g9(buf, ray.departure.azimuth * rad_to_deg);
                buf += ',';
                append_g9(buf, ray.departure.elevation * rad_to_deg);
                buf += ',';
                append_g9(buf, ray.arrival.azimuth * rad_to_deg);
                buf += ',';
                append_g9(buf, ray.arrival.elevation * rad_to_deg);
                buf += ',';
                append_g9(buf, ray.phase_rad);
                buf += '\n';
            }
        }
        out << buf;
    }

    void write_run_csv_file(const std::string &path, const SimulationRun &run)
    {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw std::runtime_error("Cannot open '" + path + "' for writing.");
        write_run_csv(out, run);
    }

    namespace
    {

        [[noreturn]] void row_fail(const std::string &name, std::size_t line,
                                   const std::string &message)
        {
            throw std::runtime_error(name + ":" + std::to_string(line) + ": " + message);
        }

        double row_number(const std::string &field, const std::string &name, std::size_t line)
        {
            std::size_t used = 0;
            double v = 0.0;
            try
            {
                v = std::stod(field, &used);
            }
            catch (const std::exception &)
            {
                row_fail(name, line, "expected a number, got '" + field + "'");
            }
            if (used != field.size() || !std::isfinite(v))
                row_fail(name, line, "expected a finite number, got '" + field + "'");
            return v;
        }

    } // namespace

    SimulationRun read_run_csv(std::istream &in, const std::string &stream_name)
    {
        constexpr const char *expected_header =
            "t,ray_id,kind,rel_power_dB,rel_delay_ns,aod_az_deg,aod_el_deg,"
            "aoa_az_deg,aoa_el_deg,phase_rad";
        constexpr double deg_to_rad = pi / 180.0;

        std::string line;
        std::size_t line_no = 1;
        if (!std::getline(in, line))
            row_fail(stream_name, line_no, "missing header row");
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line != expected_header)
            row_fail(stream_name, line_no, "unexpected header '" + line + "'");

        SimulationRun run;
        while (std::getline(in, line))
        {
            line_no++;
            if (!line.empty() && line.back() == '\r')
                line.pop_back();

            std::vector<std::string> fields;
            std::size_t start = 0;
            for (;;)
            {
                const std::size_t comma = line.find(',', start);
                if (comma == std::string::npos)
                {
                    fields.push_back(line.substr(start));
                    break;
                }
                fields.push_back(line.substr(start, comma - start));
                start = comma + 1;
            }
            if (fields.size() != 10)
                row_fail(stream_name, line_no,
                         "expected 10 fields, got " + std::to_string(fields.size()));

            RayRecord ray;
            const double t = row_number(fields[0], stream_name, line_no);
            ray.ray_id = std::uint32_t(row_number(fields[1], stream_name, line_no));
            if (fields[2] == "los")
                ray.kind = PathKind::los;
            else if (fields[2] == "reflected")
                ray.kind = PathKind::reflected;
            else if (fields[2] == "diffracted")
                ray.kind = PathKind::diffracted;
            else
                row_fail(stream_name, line_no, "unknown ray kind '" + fields[2] + "'");
            ray.relative_gain_db = row_number(fields[3], stream_name, line_no);
            ray.relative_delay_s = row_number(fields[4], stream_name, line_no) * 1e-9;
            ray.departure.azimuth = row_number(fields[5], stream_name, line_no) * deg_to_rad;
            ray.departure.elevation = row_number(fields[6], stream_name, line_no) * deg_to_rad;
            ray.arrival.azimuth = row_number(fields[7], stream_name, line_no) * deg_to_rad;
            ray.arrival.elevation = row_number(fields[8], stream_name, line_no) * deg_to_rad;
            ray.phase_rad = row_number(fields[9], stream_name, line_no);

            if (run.snapshots.empty() || run.snapshots.back().t != t)
            {
                ChannelSnapshot snap;
                snap.t = t;
                run.snapshots.push_back(std::move(snap));
            }
            run.snapshots.back().rays.push_back(ray);
        }
        return run;
    }

    SimulationRun read_run_csv_file(const std::string &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw std::runtime_error("Cannot open '" + path + "' for reading.");
        return read_run_csv(in, path);
    }

} // namespace uavrt
