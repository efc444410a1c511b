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

#include "uavrt/uavrt.h"

#include "uavrt/channel.hpp"
#include "uavrt/kinematics.hpp"
#include "uavrt/scene.hpp"
#include "uavrt/stats.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <new>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

struct uavrt_scene
{
    uavrt::SceneDatabase db;
};

struct uavrt_trajectory
{
    uavrt::Trajectory plan;
    std::size_t state_count = 0;
};

struct uavrt_run
{
    uavrt::SimulationRun run;
};

namespace
{

    thread_local std::string g_last_error;

    // Our own error strings follow two fixed shapes: parsers fail with
    // "<file>:<line>: message" and file openers with "Cannot open ...".
    // Everything else from a runtime_error is an internal failure.
    bool has_line_marker(const std::string &message)
    {
        for (std::size_t i = 0; i + 2 < message.size(); i++)
        {
            if (message[i] != ':' || !std::isdigit(static_cast<unsigned char>(message[i + 1])))
                continue;
            std::size_t j = i + 1;
            while (j < message.size() && std::isdigit(static_cast<unsigned char>(message[j])))
                j++;
            if (j < message.size() && message[j] == ':')
                return true;
        }
        return false;
    }

    uavrt_status fail(uavrt_status code, std::string message)
    {
        g_last_error = std::move(message);
        return code;
    }

    template <typename Fn> uavrt_status guarded(Fn &&fn)
    {
        g_last_error.clear();
        try
        {
            return fn();
        }
        catch (const std::invalid_argument &e)
        {
            return fail(UAVRT_ERR_ARGUMENT, e.what());
        }
        catch (const std::runtime_error &e)
        {
            const std::string message = e.what();
            if (message.rfind("Cannot open", 0) == 0 || message.rfind("cannot open", 0) == 0 ||
                message.rfind("failed writing", 0) == 0)
                return fail(UAVRT_ERR_IO, message);
            if (has_line_marker(message))
                return fail(UAVRT_ERR_PARSE, message);
            return fail(UAVRT_ERR_INTERNAL, message);
        }
        catch (const std::exception &e)
        {
            return fail(UAVRT_ERR_INTERNAL, e.what());
        }
        catch (...)
        {
            return fail(UAVRT_ERR_INTERNAL, "unknown failure");
        }
    }

    uavrt_status require(bool ok, const char *what)
    {
        if (ok)
            return UAVRT_OK;
        throw std::invalid_argument(what);
    }

    uavrt::SimulationConfig to_config(const uavrt_sim_params &p)
    {
        uavrt::SimulationConfig cfg;
        cfg.frequency_mhz = p.frequency_mhz;
        cfg.receiver = {p.rx_x_m, p.rx_y_m, p.rx_z_m};
        cfg.threshold_db = p.threshold_db;
        cfg.foliage_loss_db = p.foliage_loss_db;
        cfg.tx_power_dbm = p.tx_power_dbm;
        cfg.seed = p.seed;
        cfg.max_paths = p.max_paths;
        cfg.trace.enable_reflections = p.enable_reflections != 0;
        cfg.trace.enable_diffractions = p.enable_diffractions != 0;
        cfg.workers = p.workers;
        return cfg;
    }

    bool valid_label(const char *label)
    {
        if (!label || !*label)
            return false;
        for (const char *c = label; *c; c++)
        {
            const bool ok = std::isalnum(static_cast<unsigned char>(*c)) || *c == '_' ||
                            *c == '.' || *c == '-';
            if (!ok)
                return false;
        }
        return true;
    }

    std::string g17(double v)
    {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }

    std::string g9(double v)
    {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.9g", v);
        return buf;
    }

    std::ofstream open_out(const std::filesystem::path &path)
    {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw std::runtime_error("Cannot open '" + path.string() + "' for writing.");
        return out;
    }

    double mean_ray_count_of(const uavrt::SimulationRun &run)
    {
        if (run.snapshots.empty())
            return std::numeric_limits<double>::quiet_NaN();
        double sum = 0.0;
        for (const auto &snap : run.snapshots)
            sum += double(snap.valid_ray_count());
        return sum / double(run.snapshots.size());
    }

    double mean_delay_spread_of(const uavrt::SimulationRun &run)
    {
        double sum = 0.0;
        std::size_t used = 0;
        for (const auto &snap : run.snapshots)
        {
            if (snap.rays.empty())
                continue;
            sum += uavrt::rms_delay_spread(snap);
            used++;
        }
        if (used == 0)
            return std::numeric_limits<double>::quiet_NaN();
        return sum / double(used);
    }

    void write_fit_line(std::string &buf, const char *name, const std::vector<double> &samples)
    {
        std::vector<double> magnitudes;
        magnitudes.reserve(samples.size());
        for (double s : samples)
            magnitudes.push_back(std::abs(s));
        buf += "fit ";
        buf += name;
        try
        {
            const auto fit = uavrt::fit_lognormal(magnitudes);
            buf += " mu " + g17(fit.mu) + " sigma " + g17(fit.sigma) + " count " +
                   std::to_string(fit.count) + " note " +
                   (fit.domain_note.empty() ? "none" : fit.domain_note) + "\n";
        }
        catch (const std::invalid_argument &e)
        {
            buf += std::string(" unavailable: ") + e.what() + "\n";
        }
    }

} // namespace

extern "C"
{

    const char *uavrt_version(void)
    {
        return "1.0.0";
    }

    const char *uavrt_last_error(void)
    {
        return g_last_error.c_str();
    }

    void uavrt_sim_params_init(uavrt_sim_params *params)
    {
        if (!params)
            return;
        const uavrt::SimulationConfig defaults;
        params->frequency_mhz = defaults.frequency_mhz;
        params->rx_x_m = defaults.receiver.x;
        params->rx_y_m = defaults.receiver.y;
        params->rx_z_m = defaults.receiver.z;
        params->threshold_db = defaults.threshold_db;
        params->foliage_loss_db = defaults.foliage_loss_db;
        params->tx_power_dbm = defaults.tx_power_dbm;
        params->seed = defaults.seed;
        params->max_paths = defaults.max_paths;
        params->enable_reflections = defaults.trace.enable_reflections ? 1 : 0;
        params->enable_diffractions = defaults.trace.enable_diffractions ? 1 : 0;
        params->workers = defaults.workers;
    }

    uavrt_status uavrt_scene_build(const char *dem_path, const char *footprints_path,
                                   const char *materials_path, double min_height_m,
                                   int include_vegetation, int include_water,
                                   uavrt_scene **out_scene)
    {
        return guarded(
            [&]
            {
                require(out_scene != nullptr, "out_scene must not be NULL");
                *out_scene = nullptr;
                require(dem_path != nullptr, "dem_path must not be NULL");
                require(footprints_path != nullptr, "footprints_path must not be NULL");
                require(materials_path != nullptr, "materials_path must not be NULL");
                require(min_height_m >= 0.0, "min_height_m must be non-negative");

                uavrt::RawScene raw;
                raw.dem = uavrt::load_dem_file(dem_path);
                raw.materials = uavrt::load_materials_file(materials_path);
                uavrt::load_footprints_file(footprints_path, raw);

                uavrt::LodCriteria criteria;
                criteria.min_building_height = min_height_m;
                criteria.include_vegetation = include_vegetation != 0;
                criteria.include_water = include_water != 0;

                auto handle = std::make_unique<uavrt_scene>();
                handle->db = uavrt::reconstruct(raw, criteria);
                *out_scene = handle.release();
                return UAVRT_OK;
            });
    }

    uavrt_status uavrt_scene_load(const char *db_path, uavrt_scene **out_scene)
    {
        return guarded(
            [&]
            {
                require(out_scene != nullptr, "out_scene must not be NULL");
                *out_scene = nullptr;
                require(db_path != nullptr, "db_path must not be NULL");
                auto handle = std::make_unique<uavrt_scene>();
                handle->db = uavrt::SceneDatabase::load_file(db_path);
                *out_scene = handle.release();
                return UAVRT_OK;
            });
    }

    uavrt_status uavrt_scene_save(const uavrt_scene *scene, const char *db_path)
    {
        return guarded(
            [&]
            {
                require(scene != nullptr, "scene must not be NULL");
                require(db_path != nullptr, "db_path must not be NULL");
                scene->db.save_file(db_path);
                return UAVRT_OK;
            });
    }

    size_t uavrt_scene_facet_count(const uavrt_scene *scene)
    {
        return scene ? scene->db.facet_count() : 0;
    }

    size_t uavrt_scene_wedge_count(const uavrt_scene *scene)
    {
        return scene ? scene->db.wedges.size() : 0;
    }

    void uavrt_scene_free(uavrt_scene *scene)
    {
        delete scene;
    }

    uavrt_status uavrt_trajectory_load(const char *path, uavrt_trajectory **out_trajectory)
    {
        return guarded(
            [&]
            {
                require(out_trajectory != nullptr, "out_trajectory must not be NULL");
                *out_trajectory = nullptr;
                require(path != nullptr, "path must not be NULL");
                auto handle = std::make_unique<uavrt_trajectory>();
                handle->plan = uavrt::load_trajectory_file(path);
                handle->state_count = uavrt::sample_trajectory(handle->plan).size();
                *out_trajectory = handle.release();
                return UAVRT_OK;
            });
    }

    size_t uavrt_trajectory_state_count(const uavrt_trajectory *trajectory)
    {
        return trajectory ? trajectory->state_count : 0;
    }

    uavrt_status uavrt_trajectory_set_dt(uavrt_trajectory *trajectory, double dt_s)
    {
        return guarded(
            [&]
            {
                require(trajectory != nullptr, "trajectory must not be NULL");
                require(dt_s > 0.0, "dt_s must be positive");
                trajectory->plan.delta_t_s = dt_s;
                trajectory->state_count = uavrt::sample_trajectory(trajectory->plan).size();
                return UAVRT_OK;
            });
    }

    void uavrt_trajectory_free(uavrt_trajectory *trajectory)
    {
        delete trajectory;
    }

    uavrt_status uavrt_simulate(const uavrt_scene *scene, const uavrt_trajectory *trajectory,
                                const uavrt_sim_params *params, const char *scene_note,
                                const char *trajectory_note, uavrt_run **out_run)
    {
        return guarded(
            [&]
            {
                require(out_run != nullptr, "out_run must not be NULL");
                *out_run = nullptr;
                require(scene != nullptr, "scene must not be NULL");
                require(trajectory != nullptr, "trajectory must not be NULL");
                require(params != nullptr, "params must not be NULL");

                auto handle = std::make_unique<uavrt_run>();
                handle->run = uavrt::run_simulation(scene->db, trajectory->plan,
                                                    to_config(*params),
                                                    scene_note ? scene_note : "",
                                                    trajectory_note ? trajectory_note : "");
                *out_run = handle.release();
                return UAVRT_OK;
            });
    }

    uavrt_status uavrt_run_write_csv(const uavrt_run *run, const char *csv_path)
    {
        return guarded(
            [&]
            {
                require(run != nullptr, "run must not be NULL");
                require(csv_path != nullptr, "csv_path must not be NULL");
                uavrt::write_run_csv_file(csv_path, run->run);
                return UAVRT_OK;
            });
    }

    uavrt_status uavrt_run_load_csv(const char *csv_path, uavrt_run **out_run)
    {
        return guarded(
            [&]
            {
                require(out_run != nullptr, "out_run must not be NULL");
                *out_run = nullptr;
                require(csv_path != nullptr, "csv_path must not be NULL");
                auto handle = std::make_unique<uavrt_run>();
                handle->run = uavrt::read_run_csv_file(csv_path);
                *out_run = handle.release();
                return UAVRT_OK;
            });
    }

    size_t uavrt_run_snapshot_count(const uavrt_run *run)
    {
        return run ? run->run.snapshots.size() : 0;
    }

    size_t uavrt_run_ray_count(const uavrt_run *run, size_t snapshot_index)
    {
        if (!run || snapshot_index >= run->run.snapshots.size())
            return 0;
        return run->run.snapshots[snapshot_index].valid_ray_count();
    }

    double uavrt_run_trace_seconds(const uavrt_run *run)
    {
        return run ? run->run.trace_seconds : 0.0;
    }

    uavrt_status uavrt_run_delay_spread(const uavrt_run *run, size_t snapshot_index,
                                        double *out_seconds)
    {
        return guarded(
            [&]
            {
                require(out_seconds != nullptr, "out_seconds must not be NULL");
                *out_seconds = std::numeric_limits<double>::quiet_NaN();
                require(run != nullptr, "run must not be NULL");
                require(snapshot_index < run->run.snapshots.size(),
                        "snapshot_index is out of range");
                *out_seconds = uavrt::rms_delay_spread(run->run.snapshots[snapshot_index]);
                return UAVRT_OK;
            });
    }

    void uavrt_run_free(uavrt_run *run)
    {
        delete run;
    }

    uavrt_status uavrt_stats_write(const uavrt_run *const *runs, const char *const *labels,
                                   size_t count, const char *out_dir)
    {
        return guarded(
            [&]
            {
                require(runs != nullptr, "runs must not be NULL");
                require(labels != nullptr, "labels must not be NULL");
                require(count >= 1, "need at least one run");
                require(out_dir != nullptr, "out_dir must not be NULL");
                for (std::size_t i = 0; i < count; i++)
                {
                    require(runs[i] != nullptr, "runs contains a NULL handle");
                    require(valid_label(labels[i]),
                            "labels must be non-empty tokens of [A-Za-z0-9_.-]");
                    for (std::size_t j = 0; j < i; j++)
                        require(std::string(labels[i]) != labels[j], "labels must be distinct");
                }

                const std::filesystem::path dir(out_dir);
                std::filesystem::create_directories(dir);

                std::vector<uavrt::LabeledRun> labelled;
                std::vector<const uavrt::SimulationRun *> bare;
                for (std::size_t i = 0; i < count; i++)
                {
                    labelled.push_back({labels[i], &runs[i]->run});
                    bare.push_back(&runs[i]->run);
                }

                // Per-run delay-spread series; an empty snapshot has no
                // spread and records nan.
                for (const auto &lr : labelled)
                {
                    auto out = open_out(dir / ("delay_spread_" + lr.label + ".csv"));
                    std::string buf = "t,sigma_ns\n";
                    for (const auto &snap : lr.run->snapshots)
                    {
                        buf += g9(snap.t);
                        buf += ',';
                        if (snap.rays.empty())
                            buf += "nan";
                        else
                            buf += g9(uavrt::rms_delay_spread(snap) * 1e9);
                        buf += '\n';
                    }
                    out << buf;
                }

                {
                    auto out = open_out(dir / "power_distribution.csv");
                    uavrt::write_histogram_csv(
                        out, uavrt::make_histogram(uavrt::pooled_nlos_gains(bare), 50,
                                                   uavrt::Histogram::Mode::pdf));
                }

                const auto offsets = uavrt::angle_offsets(bare);
                const struct
                {
                    const char *file;
                    const char *column;
                    const std::vector<double> *samples;
                } angle_outputs[] = {
                    {"offsets_aod_azimuth.csv", "aod_azimuth_offset_rad", &offsets.aod_azimuth},
                    {"offsets_aod_elevation.csv", "aod_elevation_offset_rad",
                     &offsets.aod_elevation},
                    {"offsets_aoa_azimuth.csv", "aoa_azimuth_offset_rad", &offsets.aoa_azimuth},
                    {"offsets_aoa_elevation.csv", "aoa_elevation_offset_rad",
                     &offsets.aoa_elevation},
                };
                for (const auto &entry : angle_outputs)
                {
                    auto out = open_out(dir / entry.file);
                    uavrt::write_samples_csv(out, entry.column, *entry.samples);
                }

                if (count >= 2)
                {
                    {
                        auto out = open_out(dir / "ray_counts.csv");
                        uavrt::write_ray_count_csv(out, labelled);
                    }
                    {
                        auto out = open_out(dir / "comparison.txt");
                        uavrt::write_comparison(out, uavrt::compare_runs(labelled));
                    }
                }

                std::string buf = "uavrt-stats 1\n";
                buf += "runs " + std::to_string(count) + "\n";
                for (const auto &lr : labelled)
                {
                    buf += "run " + lr.label;
                    buf += " snapshots " + std::to_string(lr.run->snapshots.size());
                    buf += " trace_s " + g17(lr.run->trace_seconds);
                    buf += " mean_ray_count " + g17(mean_ray_count_of(*lr.run));
                    buf += " mean_delay_spread_ns " + g17(mean_delay_spread_of(*lr.run) * 1e9);
                    buf += "\n";
                }
                write_fit_line(buf, "aod_azimuth_offset_abs_rad", offsets.aod_azimuth);
                write_fit_line(buf, "aod_elevation_offset_abs_rad", offsets.aod_elevation);
                write_fit_line(buf, "aoa_azimuth_offset_abs_rad", offsets.aoa_azimuth);
                write_fit_line(buf, "aoa_elevation_offset_abs_rad", offsets.aoa_elevation);
                buf += "skipped_instants " + std::to_string(offsets.skipped_instants) + "\n";
                buf += "end\n";
                open_out(dir / "summary.txt") << buf;

                return UAVRT_OK;
            });
    }

    uavrt_status uavrt_benchmark(const uavrt_scene *const *scenes, const char *const *labels,
                                 size_t count, const uavrt_trajectory *trajectory,
                                 const uavrt_sim_params *params, size_t repetitions,
                                 const char *report_path)
    {
        return guarded(
            [&]
            {
                require(scenes != nullptr, "scenes must not be NULL");
                require(labels != nullptr, "labels must not be NULL");
                require(count >= 2, "benchmark needs at least two scene databases");
                require(trajectory != nullptr, "trajectory must not be NULL");
                require(params != nullptr, "params must not be NULL");
                require(repetitions >= 1, "repetitions must be at least 1");
                require(report_path != nullptr, "report_path must not be NULL");
                for (std::size_t i = 0; i < count; i++)
                {
                    require(scenes[i] != nullptr, "scenes contains a NULL handle");
                    require(valid_label(labels[i]),
                            "labels must be non-empty tokens of [A-Za-z0-9_.-]");
                }

                const auto cfg = to_config(*params);

                std::string buf = "uavrt-benchmark 1\n";
                buf += "states " + std::to_string(trajectory->state_count) + "\n";
                buf += "repetitions " + std::to_string(repetitions) + "\n";
                for (std::size_t i = 0; i < count; i++)
                {
                    std::vector<double> times;
                    times.reserve(repetitions);
                    double mean_count = 0.0;
                    for (std::size_t r = 0; r < repetitions; r++)
                    {
                        const auto run =
                            uavrt::run_simulation(scenes[i]->db, trajectory->plan, cfg);
                        times.push_back(run.trace_seconds);
                        mean_count = mean_ray_count_of(run); // identical every repetition
                    }
                    double mean = 0.0;
                    for (double t : times)
                        mean += t;
                    mean /= double(times.size());
                    double var = 0.0;
                    for (double t : times)
                        var += (t - mean) * (t - mean);
                    var /= double(times.size());

                    buf += labels[i];
                    buf += " mean_trace_s " + g17(mean);
                    buf += " std_trace_s " + g17(std::sqrt(var));
                    buf += " mean_ray_count " + g17(mean_count);
                    buf += "\n";
                }
                buf += "end\n";
                open_out(report_path) << buf;
                return UAVRT_OK;
            });
    }

} // extern "C"
