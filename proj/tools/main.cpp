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

// Command-line front end. Everything substantive happens behind the C API;
// this file only parses the config, wires subcommands and maps status codes
// to exit codes: 0 success, 2 configuration, 3 input parsing, 4 runtime.

#include "uavrt/uavrt.h"

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace
{

    constexpr int exit_config = 2;
    constexpr int exit_parse = 3;
    constexpr int exit_runtime = 4;

    struct ConfigError : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    struct LodEntry
    {
        std::string label;
        double min_height_m = 0.0;
        bool vegetation = false;
        bool water = false;
    };

    struct LabeledPath
    {
        std::string label;
        std::string path;
    };

    // Mirror of the config file; scalar keys carry their unit in the name.
    struct Config
    {
        double frequency_mhz = 28000.0;
        double bandwidth_mhz = 0.0; // metadata, echoed into manifests
        double tx_power_dbm = 20.0; // metadata, echoed into manifests
        double threshold_db = -45.0;
        double foliage_loss_db = 10.0;
        double rx_x_m = 0.0;
        double rx_y_m = 0.0;
        double rx_z_m = 0.0;
        bool rx_seen = false;
        std::uint64_t seed = 0;
        std::size_t max_paths = 0;
        std::size_t workers = 0;
        std::size_t repetitions = 5;
        double dt_s = 0.0; // 0 = keep each trajectory file's own interval
        bool enable_reflections = true;
        bool enable_diffractions = true;
        std::string output_dir;
        std::string dem;
        std::string footprints;
        std::string materials;
        std::vector<LodEntry> lods;
        std::vector<LabeledPath> scene_dbs;
        std::vector<std::string> trajectories;
        std::vector<LabeledPath> runs;
        std::string hash_hex; // FNV-1a of the config bytes, for manifests
    };

    std::string fnv1a_hex(const std::string &bytes)
    {
        std::uint64_t h = 1469598103934665603ULL;
        for (unsigned char c : bytes)
        {
            h ^= c;
            h *= 1099511628211ULL;
        }
        char buf[20];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
        return buf;
    }

    [[noreturn]] void config_fail(const std::string &name, std::size_t line,
                                  const std::string &message)
    {
        throw ConfigError(name + ":" + std::to_string(line) + ": " + message);
    }

    double parse_double(const std::string &token, const std::string &name, std::size_t line,
                        bool allow_infinite = false)
    {
        std::size_t used = 0;
        double v = 0.0;
        try
        {
            v = std::stod(token, &used);
        }
        catch (const std::exception &)
        {
            config_fail(name, line, "expected a number, got '" + token + "'");
        }
        if (used != token.size())
            config_fail(name, line, "expected a number, got '" + token + "'");
        if (!std::isfinite(v) && !(allow_infinite && v < 0))
            config_fail(name, line, "value out of range: '" + token + "'");
        return v;
    }

    std::uint64_t parse_uint(const std::string &token, const std::string &name,
                             std::size_t line)
    {
        if (token.empty() || token[0] == '-')
            config_fail(name, line, "expected a non-negative integer, got '" + token + "'");
        std::size_t used = 0;
        unsigned long long v = 0;
        try
        {
            v = std::stoull(token, &used);
        }
        catch (const std::exception &)
        {
            config_fail(name, line, "expected a non-negative integer, got '" + token + "'");
        }
        if (used != token.size())
            config_fail(name, line, "expected a non-negative integer, got '" + token + "'");
        return v;
    }

    bool parse_flag01(const std::string &token, const std::string &name, std::size_t line)
    {
        if (token == "0")
            return false;
        if (token == "1")
            return true;
        config_fail(name, line, "expected 0 or 1, got '" + token + "'");
    }

    // Paths inside the config resolve relative to the config file itself.
    std::string resolve(const fs::path &base, const std::string &token)
    {
        fs::path p(token);
        if (p.is_absolute())
            return p.string();
        return (base / p).string();
    }

    Config load_config(const std::string &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw ConfigError("cannot open config '" + path + "'");
        std::stringstream whole;
        whole << in.rdbuf();
        const std::string bytes = whole.str();

        Config cfg;
        cfg.hash_hex = fnv1a_hex(bytes);
        const fs::path base = fs::path(path).parent_path();

        std::istringstream lines(bytes);
        std::string line;
        std::size_t line_no = 0;
        int rx_fields = 0;
        while (std::getline(lines, line))
        {
            line_no++;
            if (const auto hash = line.find('#'); hash != std::string::npos)
                line.erase(hash);
            std::istringstream words(line);
            std::vector<std::string> tok;
            std::string w;
            while (words >> w)
                tok.push_back(w);
            if (tok.empty())
                continue;

            const std::string &key = tok[0];
            const auto want = [&](std::size_t n)
            {
                if (tok.size() != n + 1)
                    config_fail(path, line_no,
                                "key '" + key + "' expects " + std::to_string(n) +
                                    " value(s), got " + std::to_string(tok.size() - 1));
            };

            if (key == "frequency_mhz")
                want(1), cfg.frequency_mhz = parse_double(tok[1], path, line_no);
            else if (key == "bandwidth_mhz")
                want(1), cfg.bandwidth_mhz = parse_double(tok[1], path, line_no);
            else if (key == "tx_power_dbm")
                want(1), cfg.tx_power_dbm = parse_double(tok[1], path, line_no);
            else if (key == "threshold_db")
                want(1), cfg.threshold_db = parse_double(tok[1], path, line_no, true);
            else if (key == "foliage_loss_db")
                want(1), cfg.foliage_loss_db = parse_double(tok[1], path, line_no);
            else if (key == "rx_x_m")
                want(1), cfg.rx_x_m = parse_double(tok[1], path, line_no), rx_fields |= 1;
            else if (key == "rx_y_m")
                want(1), cfg.rx_y_m = parse_double(tok[1], path, line_no), rx_fields |= 2;
            else if (key == "rx_z_m")
                want(1), cfg.rx_z_m = parse_double(tok[1], path, line_no), rx_fields |= 4;
            else if (key == "seed")
                want(1), cfg.seed = parse_uint(tok[1], path, line_no);
            else if (key == "max_paths")
                want(1), cfg.max_paths = std::size_t(parse_uint(tok[1], path, line_no));
            else if (key == "workers")
                want(1), cfg.workers = std::size_t(parse_uint(tok[1], path, line_no));
            else if (key == "repetitions")
                want(1), cfg.repetitions = std::size_t(parse_uint(tok[1], path, line_no));
            else if (key == "dt_s")
                want(1), cfg.dt_s = parse_double(tok[1], path, line_no);
            else if (key == "enable_reflections")
                want(1), cfg.enable_reflections = parse_flag01(tok[1], path, line_no);
            else if (key == "enable_diffractions")
                want(1), cfg.enable_diffractions = parse_flag01(tok[1], path, line_no);
            else if (key == "output_dir")
                want(1), cfg.output_dir = resolve(base, tok[1]);
            else if (key == "dem")
                want(1), cfg.dem = resolve(base, tok[1]);
            else if (key == "footprints")
                want(1), cfg.footprints = resolve(base, tok[1]);
            else if (key == "materials")
                want(1), cfg.materials = resolve(base, tok[1]);
            else if (key == "lod")
            {
                want(4);
                LodEntry lod;
                lod.label = tok[1];
                lod.min_height_m = parse_double(tok[2], path, line_no);
                lod.vegetation = parse_flag01(tok[3], path, line_no);
                lod.water = parse_flag01(tok[4], path, line_no);
                cfg.lods.push_back(lod);
            }
            else if (key == "scene_db")
                want(2), cfg.scene_dbs.push_back({tok[1], tok[2]});
            else if (key == "trajectory")
                want(1), cfg.trajectories.push_back(resolve(base, tok[1]));
            else if (key == "run")
                want(2), cfg.runs.push_back({tok[1], tok[2]});
            else
                config_fail(path, line_no, "unknown key '" + key + "'");
        }
        cfg.rx_seen = rx_fields == 7;

        if (!(cfg.frequency_mhz > 0.0))
            throw ConfigError(path + ": frequency_mhz must be positive");
        return cfg;
    }

    // Scene databases and run CSVs are pipeline products, so their relative
    // paths anchor to the output directory (unlike raw inputs, which anchor
    // to the config file). Called after the output_dir overrides settled.
    void resolve_products(Config &cfg)
    {
        const fs::path base(cfg.output_dir);
        for (LabeledPath &entry : cfg.scene_dbs)
            if (!fs::path(entry.path).is_absolute())
                entry.path = (base / entry.path).string();
        for (LabeledPath &entry : cfg.runs)
            if (!fs::path(entry.path).is_absolute())
                entry.path = (base / entry.path).string();
    }

    // ---- C API plumbing ---------------------------------------------------

    int exit_code_for(uavrt_status status)
    {
        switch (status)
        {
        case UAVRT_OK:
            return 0;
        case UAVRT_ERR_ARGUMENT:
            return exit_config;
        case UAVRT_ERR_PARSE:
            return exit_parse;
        case UAVRT_ERR_IO:
        case UAVRT_ERR_INTERNAL:
        default:
            return exit_runtime;
        }
    }

    // Returns 0 on success, otherwise prints the library message and yields
    // the exit code for the failure class.
    int check(uavrt_status status)
    {
        if (status == UAVRT_OK)
            return 0;
        std::cerr << "error: " << uavrt_last_error() << "\n";
        return exit_code_for(status);
    }

    struct SceneHandle
    {
        uavrt_scene *ptr = nullptr;
        ~SceneHandle() { uavrt_scene_free(ptr); }
        SceneHandle() = default;
        SceneHandle(const SceneHandle &) = delete;
        SceneHandle &operator=(const SceneHandle &) = delete;
        SceneHandle(SceneHandle &&other) noexcept : ptr(other.ptr) { other.ptr = nullptr; }
    };

    struct TrajectoryHandle
    {
        uavrt_trajectory *ptr = nullptr;
        ~TrajectoryHandle() { uavrt_trajectory_free(ptr); }
        TrajectoryHandle() = default;
        TrajectoryHandle(const TrajectoryHandle &) = delete;
        TrajectoryHandle &operator=(const TrajectoryHandle &) = delete;
        TrajectoryHandle(TrajectoryHandle &&other) noexcept : ptr(other.ptr)
        {
            other.ptr = nullptr;
        }
    };

    struct RunHandle
    {
        uavrt_run *ptr = nullptr;
        ~RunHandle() { uavrt_run_free(ptr); }
        RunHandle() = default;
        RunHandle(const RunHandle &) = delete;
        RunHandle &operator=(const RunHandle &) = delete;
        RunHandle(RunHandle &&other) noexcept : ptr(other.ptr) { other.ptr = nullptr; }
    };

    uavrt_sim_params params_from(const Config &cfg)
    {
        uavrt_sim_params p;
        uavrt_sim_params_init(&p);
        p.frequency_mhz = cfg.frequency_mhz;
        p.rx_x_m = cfg.rx_x_m;
        p.rx_y_m = cfg.rx_y_m;
        p.rx_z_m = cfg.rx_z_m;
        p.threshold_db = cfg.threshold_db;
        p.foliage_loss_db = cfg.foliage_loss_db;
        p.tx_power_dbm = cfg.tx_power_dbm;
        p.seed = cfg.seed;
        p.max_paths = cfg.max_paths;
        p.enable_reflections = cfg.enable_reflections ? 1 : 0;
        p.enable_diffractions = cfg.enable_diffractions ? 1 : 0;
        p.workers = cfg.workers;
        return p;
    }

    std::string g17(double v)
    {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }

    void require_config(bool ok, const std::string &message)
    {
        if (!ok)
            throw ConfigError(message);
    }

    void write_text_file(const fs::path &path, const std::string &text)
    {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw ConfigError("cannot open '" + path.string() + "' for writing");
        out << text;
    }

    // ---- Subcommands --------------------------------------------------------

    int cmd_build_scene(const Config &cfg)
    {
        require_config(!cfg.dem.empty(), "build-scene needs a 'dem' entry");
        require_config(!cfg.footprints.empty(), "build-scene needs a 'footprints' entry");
        require_config(!cfg.materials.empty(), "build-scene needs a 'materials' entry");
        require_config(!cfg.lods.empty(), "build-scene needs at least one 'lod' entry");
        require_config(!cfg.output_dir.empty(), "build-scene needs an 'output_dir' entry");

        fs::create_directories(cfg.output_dir);
        std::string manifest = "uavrt-build-manifest 1\n";
        manifest += "dem " + cfg.dem + "\n";
        manifest += "footprints " + cfg.footprints + "\n";
        manifest += "materials " + cfg.materials + "\n";
        manifest += "config_hash " + cfg.hash_hex + "\n";

        for (const LodEntry &lod : cfg.lods)
        {
            SceneHandle scene;
            if (int rc = check(uavrt_scene_build(cfg.dem.c_str(), cfg.footprints.c_str(),
                                                 cfg.materials.c_str(), lod.min_height_m,
                                                 lod.vegetation ? 1 : 0, lod.water ? 1 : 0,
                                                 &scene.ptr)))
                return rc;

            const std::string file = "scene_" + lod.label + ".txt";
            const fs::path out_path = fs::path(cfg.output_dir) / file;
            if (int rc = check(uavrt_scene_save(scene.ptr, out_path.c_str())))
                return rc;

            const std::size_t facets = uavrt_scene_facet_count(scene.ptr);
            const std::size_t wedges = uavrt_scene_wedge_count(scene.ptr);
            manifest += "db " + lod.label + " file " + file + " facets " +
                        std::to_string(facets) + " wedges " + std::to_string(wedges) + "\n";
            std::cout << "wrote " << out_path.string() << " facets " << facets << " wedges "
                      << wedges << "\n";
        }
        manifest += "end\n";
        const fs::path manifest_path = fs::path(cfg.output_dir) / "build_manifest.txt";
        write_text_file(manifest_path, manifest);
        std::cout << "wrote " << manifest_path.string() << "\n";
        return 0;
    }

    int cmd_simulate(const Config &cfg)
    {
        require_config(!cfg.scene_dbs.empty(), "simulate needs at least one 'scene_db' entry");
        require_config(!cfg.trajectories.empty(),
                       "simulate needs at least one 'trajectory' entry");
        require_config(cfg.rx_seen, "simulate needs rx_x_m, rx_y_m and rx_z_m");
        require_config(!cfg.output_dir.empty(), "simulate needs an 'output_dir' entry");

        fs::create_directories(cfg.output_dir);
        const uavrt_sim_params params = params_from(cfg);

        for (const LabeledPath &entry : cfg.scene_dbs)
        {
            SceneHandle scene;
            if (int rc = check(uavrt_scene_load(entry.path.c_str(), &scene.ptr)))
                return rc;

            for (const std::string &traj_path : cfg.trajectories)
            {
                TrajectoryHandle flight;
                if (int rc = check(uavrt_trajectory_load(traj_path.c_str(), &flight.ptr)))
                    return rc;
                if (cfg.dt_s > 0.0)
                    if (int rc = check(uavrt_trajectory_set_dt(flight.ptr, cfg.dt_s)))
                        return rc;

                const std::string stem = fs::path(traj_path).stem().string();
                RunHandle run;
                if (int rc = check(uavrt_simulate(scene.ptr, flight.ptr, &params,
                                                  entry.label.c_str(), stem.c_str(),
                                                  &run.ptr)))
                    return rc;

                const std::string name = "run_" + entry.label + "_" + stem;
                const fs::path csv_path = fs::path(cfg.output_dir) / (name + ".csv");
                if (int rc = check(uavrt_run_write_csv(run.ptr, csv_path.c_str())))
                    return rc;

                std::string manifest = "uavrt-run-manifest 1\n";
                manifest += "scene " + entry.label + " " + entry.path + "\n";
                manifest += "trajectory " + traj_path + "\n";
                manifest += "config_hash " + cfg.hash_hex + "\n";
                manifest += "seed " + std::to_string(cfg.seed) + "\n";
                manifest += "frequency_mhz " + g17(cfg.frequency_mhz) + "\n";
                manifest += "bandwidth_mhz " + g17(cfg.bandwidth_mhz) + "\n";
                manifest += "tx_power_dbm " + g17(cfg.tx_power_dbm) + "\n";
                manifest += "threshold_db " + g17(cfg.threshold_db) + "\n";
                manifest += "foliage_loss_db " + g17(cfg.foliage_loss_db) + "\n";
                manifest += "snapshots " +
                            std::to_string(uavrt_run_snapshot_count(run.ptr)) + "\n";
                manifest += "trace_s " + g17(uavrt_run_trace_seconds(run.ptr)) + "\n";
                manifest += "end\n";
                const fs::path manifest_path =
                    fs::path(cfg.output_dir) / (name + ".manifest.txt");
                write_text_file(manifest_path, manifest);

                std::cout << "wrote " << csv_path.string() << " snapshots "
                          << uavrt_run_snapshot_count(run.ptr) << "\n";
                std::cout << "wrote " << manifest_path.string() << "\n";
            }
        }
        return 0;
    }

    int cmd_stats(const Config &cfg)
    {
        require_config(!cfg.runs.empty(), "stats needs at least one 'run' entry");
        require_config(!cfg.output_dir.empty(), "stats needs an 'output_dir' entry");

        std::vector<RunHandle> handles;
        handles.reserve(cfg.runs.size());
        std::vector<const uavrt_run *> runs;
        std::vector<const char *> labels;
        for (const LabeledPath &entry : cfg.runs)
        {
            RunHandle handle;
            if (int rc = check(uavrt_run_load_csv(entry.path.c_str(), &handle.ptr)))
                return rc;
            handles.push_back(std::move(handle));
            labels.push_back(entry.label.c_str());
        }
        for (const RunHandle &h : handles)
            runs.push_back(h.ptr);

        const fs::path stats_dir = fs::path(cfg.output_dir) / "stats";
        if (int rc = check(uavrt_stats_write(runs.data(), labels.data(), runs.size(),
                                             stats_dir.c_str())))
            return rc;
        std::cout << "wrote " << stats_dir.string() << "\n";
        return 0;
    }

    int cmd_benchmark(const Config &cfg)
    {
        require_config(cfg.scene_dbs.size() >= 2,
                       "benchmark needs at least two 'scene_db' entries");
        require_config(cfg.trajectories.size() == 1,
                       "benchmark needs exactly one 'trajectory' entry");
        require_config(cfg.rx_seen, "benchmark needs rx_x_m, rx_y_m and rx_z_m");
        require_config(!cfg.output_dir.empty(), "benchmark needs an 'output_dir' entry");
        require_config(cfg.repetitions >= 1, "repetitions must be at least 1");

        std::vector<SceneHandle> handles;
        handles.reserve(cfg.scene_dbs.size());
        std::vector<const uavrt_scene *> scenes;
        std::vector<const char *> labels;
        for (const LabeledPath &entry : cfg.scene_dbs)
        {
            SceneHandle handle;
            if (int rc = check(uavrt_scene_load(entry.path.c_str(), &handle.ptr)))
                return rc;
            handles.push_back(std::move(handle));
            labels.push_back(entry.label.c_str());
        }
        for (const SceneHandle &h : handles)
            scenes.push_back(h.ptr);

        TrajectoryHandle flight;
        if (int rc = check(uavrt_trajectory_load(cfg.trajectories[0].c_str(), &flight.ptr)))
            return rc;
        if (cfg.dt_s > 0.0)
            if (int rc = check(uavrt_trajectory_set_dt(flight.ptr, cfg.dt_s)))
                return rc;

        fs::create_directories(cfg.output_dir);
        const fs::path report_path = fs::path(cfg.output_dir) / "benchmark.txt";
        const uavrt_sim_params params = params_from(cfg);
        if (int rc = check(uavrt_benchmark(scenes.data(), labels.data(), scenes.size(),
                                           flight.ptr, &params, cfg.repetitions,
                                           report_path.c_str())))
            return rc;

        std::ifstream report(report_path, std::ios::binary);
        std::cout << report.rdbuf();
        std::cout << "wrote " << report_path.string() << "\n";
        return 0;
    }

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"uavrt: deterministic UAV air-to-ground mmWave channel simulator"};
    app.set_version_flag("--version", uavrt_version());
    app.require_subcommand(1);

    std::string config_path;
    std::string output_dir_flag;
    std::uint64_t seed_flag = 0;
    double frequency_flag = 0.0;
    double threshold_flag = 0.0;
    double dt_flag = 0.0;
    std::size_t workers_flag = 0;
    std::size_t repetitions_flag = 0;

    const auto add_common = [&](CLI::App *sub)
    {
        sub->add_option("--config", config_path, "configuration file")->required();
        sub->add_option("--output-dir", output_dir_flag,
                        "override output_dir from the config");
        sub->add_option("--seed", seed_flag, "override the phase seed");
        sub->add_option("--frequency-mhz", frequency_flag, "override the carrier frequency");
        sub->add_option("--threshold-db", threshold_flag,
                        "override the relative-gain cutoff");
        sub->add_option("--dt-s", dt_flag, "override the trajectory sampling interval");
        sub->add_option("--workers", workers_flag, "override the tracer worker count");
        return sub;
    };

    CLI::App *build = add_common(
        app.add_subcommand("build-scene", "reconstruct scene databases from raw inputs"));
    CLI::App *simulate = add_common(
        app.add_subcommand("simulate", "trace a flight and write snapshot CSVs"));
    CLI::App *stats =
        add_common(app.add_subcommand("stats", "statistics bundle for existing runs"));
    CLI::App *benchmark = add_common(
        app.add_subcommand("benchmark", "time the tracer across scene databases"));
    benchmark->add_option("--repetitions", repetitions_flag, "runs per database");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" ||
            e.get_name() == "CallForVersion")
            return app.exit(e);
        std::cerr << "error: " << e.what() << "\n";
        return exit_config;
    }

    try
    {
        Config cfg = load_config(config_path);

        // Precedence: flag beats environment beats config file.
        if (const char *env = std::getenv("UAVRT_OUTPUT_DIR"); env && *env)
            cfg.output_dir = env;
        CLI::App *active = build->parsed()      ? build
                           : simulate->parsed() ? simulate
                           : stats->parsed()    ? stats
                                                : benchmark;
        if (active->count("--output-dir"))
            cfg.output_dir = output_dir_flag;
        if (active->count("--seed"))
            cfg.seed = seed_flag;
        if (active->count("--frequency-mhz"))
            cfg.frequency_mhz = frequency_flag;
        if (active->count("--threshold-db"))
            cfg.threshold_db = threshold_flag;
        if (active->count("--dt-s"))
            cfg.dt_s = dt_flag;
        if (active->count("--workers"))
            cfg.workers = workers_flag;
        if (benchmark->parsed() && benchmark->count("--repetitions"))
            cfg.repetitions = repetitions_flag;
        resolve_products(cfg);

        if (build->parsed())
            return cmd_build_scene(cfg);
        if (simulate->parsed())
            return cmd_simulate(cfg);
        if (stats->parsed())
            return cmd_stats(cfg);
        return cmd_benchmark(cfg);
    }
    catch (const ConfigError &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return exit_runtime;
    }
}
