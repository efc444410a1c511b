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

#include <catch2/catch_amalgamated.hpp>

#include "uavrt/uavrt.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace
{

    // Shared fixture directory with a miniature scene: flat 300 m square,
    // one 20 m building, one 6 m vegetation patch, one flight across.
    const fs::path &fixture_dir()
    {
        static const fs::path dir = []
        {
            const fs::path d = fs::temp_directory_path() / "uavrt_capi_fixtures";
            fs::create_directories(d);

            std::ofstream(d / "dem.txt") << "4 4 100 0 0\n"
                                            "0 0 0 0\n"
                                            "0 0 0 0\n"
                                            "0 0 0 0\n"
                                            "0 0 0 0\n";
            std::ofstream(d / "materials.txt") << "wet_soil 15 reflective\n"
                                                  "concrete 5.31 reflective\n"
                                                  "foliage 1.1 foliage\n";
            std::ofstream(d / "footprints.txt")
                << "terrain wet_soil\n"
                   "building concrete 20 4 100 100 160 100 160 160 100 160\n"
                   "vegetation foliage 6 4 200 40 260 40 260 90 200 90\n";
            std::ofstream(d / "flight.txt") << "speed 10\n"
                                               "dt 1\n"
                                               "duration 10\n"
                                               "waypoint 20 150 60\n"
                                               "waypoint 280 150 60\n";
            std::ofstream(d / "broken_flight.txt") << "speed 10\n"
                                                      "dt fast\n";
            return d;
        }();
        return dir;
    }

    std::string read_text(const fs::path &path)
    {
        std::ifstream in(path, std::ios::binary);
        REQUIRE(in.good());
        std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        return text;
    }

    struct SceneHandle
    {
        uavrt_scene *ptr = nullptr;
        ~SceneHandle() { uavrt_scene_free(ptr); }
    };

    struct TrajectoryHandle
    {
        uavrt_trajectory *ptr = nullptr;
        ~TrajectoryHandle() { uavrt_trajectory_free(ptr); }
    };

    struct RunHandle
    {
        uavrt_run *ptr = nullptr;
        ~RunHandle() { uavrt_run_free(ptr); }
    };

    uavrt_scene *build_scene(double min_height, int vegetation, int water)
    {
        const auto &d = fixture_dir();
        uavrt_scene *scene = nullptr;
        REQUIRE(uavrt_scene_build((d / "dem.txt").c_str(), (d / "footprints.txt").c_str(),
                                  (d / "materials.txt").c_str(), min_height, vegetation, water,
                                  &scene) == UAVRT_OK);
        REQUIRE(scene != nullptr);
        return scene;
    }

    uavrt_trajectory *load_flight()
    {
        uavrt_trajectory *traj = nullptr;
        REQUIRE(uavrt_trajectory_load((fixture_dir() / "flight.txt").c_str(), &traj) ==
                UAVRT_OK);
        REQUIRE(traj != nullptr);
        return traj;
    }

    uavrt_sim_params test_params()
    {
        uavrt_sim_params p;
        uavrt_sim_params_init(&p);
        p.rx_x_m = 150.0;
        p.rx_y_m = 250.0;
        p.rx_z_m = 2.0;
        p.seed = 11;
        return p;
    }

} // namespace

TEST_CASE("Version, defaults and status codes")
{
    CHECK(std::string(uavrt_version()) == "1.0.0");

    uavrt_sim_params p;
    uavrt_sim_params_init(&p);
    CHECK(p.frequency_mhz == 28000.0);
    CHECK(p.threshold_db == -45.0);
    CHECK(p.foliage_loss_db == 10.0);
    CHECK(p.tx_power_dbm == 20.0);
    CHECK(p.seed == 1);
    CHECK(p.max_paths == 0);
    CHECK(p.enable_reflections == 1);
    CHECK(p.enable_diffractions == 1);
    CHECK(p.workers == 0);
    uavrt_sim_params_init(nullptr); // must not crash

    // The numeric values are ABI: external callers switch on them.
    CHECK(UAVRT_OK == 0);
    CHECK(UAVRT_ERR_ARGUMENT == 1);
    CHECK(UAVRT_ERR_PARSE == 2);
    CHECK(UAVRT_ERR_IO == 3);
    CHECK(UAVRT_ERR_INTERNAL == 4);
}

TEST_CASE("Null handles and missing files are rejected politely")
{
    uavrt_scene *scene = nullptr;
    CHECK(uavrt_scene_build(nullptr, "x", "y", 0, 0, 0, &scene) == UAVRT_ERR_ARGUMENT);
    CHECK(scene == nullptr);
    CHECK(uavrt_scene_build("a", "b", "c", 0, 0, 0, nullptr) == UAVRT_ERR_ARGUMENT);
    CHECK(std::string(uavrt_last_error()).size() > 0);

    CHECK(uavrt_scene_load("/nonexistent/uavrt/db.txt", &scene) == UAVRT_ERR_IO);
    CHECK(std::string(uavrt_last_error()).find("/nonexistent/uavrt/db.txt") !=
          std::string::npos);
    CHECK(scene == nullptr);

    uavrt_run *run = nullptr;
    CHECK(uavrt_run_load_csv("/nonexistent/uavrt/run.csv", &run) == UAVRT_ERR_IO);
    CHECK(run == nullptr);

    CHECK(uavrt_scene_facet_count(nullptr) == 0);
    CHECK(uavrt_scene_wedge_count(nullptr) == 0);
    CHECK(uavrt_trajectory_state_count(nullptr) == 0);
    CHECK(uavrt_run_snapshot_count(nullptr) == 0);
    CHECK(uavrt_run_ray_count(nullptr, 0) == 0);
    CHECK(uavrt_run_trace_seconds(nullptr) == 0.0);

    double sigma = 0.0;
    CHECK(uavrt_run_delay_spread(nullptr, 0, &sigma) == UAVRT_ERR_ARGUMENT);

    // Free functions accept NULL like free() does.
    uavrt_scene_free(nullptr);
    uavrt_trajectory_free(nullptr);
    uavrt_run_free(nullptr);
}

TEST_CASE("Scene build, save and reload")
{
    SceneHandle full{build_scene(0.0, 1, 1)};
    SceneHandle coarse{build_scene(30.0, 0, 0)};

    // 3x3 cells of terrain = 18 triangles; the full build adds two prisms
    // of 8 wall triangles + 2 roof triangles each.
    CHECK(uavrt_scene_facet_count(coarse.ptr) == 18);
    CHECK(uavrt_scene_facet_count(full.ptr) == 38);
    CHECK(uavrt_scene_wedge_count(coarse.ptr) == 0); // flat ground, no edges
    CHECK(uavrt_scene_wedge_count(full.ptr) > 0);    // building roof and corners

    const fs::path db_path = fixture_dir() / "scene_db.txt";
    REQUIRE(uavrt_scene_save(full.ptr, db_path.c_str()) == UAVRT_OK);

    SceneHandle loaded;
    REQUIRE(uavrt_scene_load(db_path.c_str(), &loaded.ptr) == UAVRT_OK);
    CHECK(uavrt_scene_facet_count(loaded.ptr) == uavrt_scene_facet_count(full.ptr));
    CHECK(uavrt_scene_wedge_count(loaded.ptr) == uavrt_scene_wedge_count(full.ptr));

    // Saving the reloaded database reproduces the file byte for byte.
    const fs::path again_path = fixture_dir() / "scene_db_again.txt";
    REQUIRE(uavrt_scene_save(loaded.ptr, again_path.c_str()) == UAVRT_OK);
    CHECK(read_text(again_path) == read_text(db_path));

    uavrt_scene *bad = nullptr;
    CHECK(uavrt_scene_build((fixture_dir() / "dem.txt").c_str(),
                            (fixture_dir() / "footprints.txt").c_str(),
                            (fixture_dir() / "materials.txt").c_str(), -1.0, 0, 0,
                            &bad) == UAVRT_ERR_ARGUMENT);
    CHECK(bad == nullptr);
}

TEST_CASE("Trajectory loading")
{
    TrajectoryHandle flight{load_flight()};
    CHECK(uavrt_trajectory_state_count(flight.ptr) == 11); // duration 10 s at dt 1

    REQUIRE(uavrt_trajectory_set_dt(flight.ptr, 0.5) == UAVRT_OK);
    CHECK(uavrt_trajectory_state_count(flight.ptr) == 21);
    CHECK(uavrt_trajectory_set_dt(flight.ptr, 0.0) == UAVRT_ERR_ARGUMENT);
    CHECK(uavrt_trajectory_set_dt(nullptr, 1.0) == UAVRT_ERR_ARGUMENT);
    REQUIRE(uavrt_trajectory_set_dt(flight.ptr, 1.0) == UAVRT_OK);

    uavrt_trajectory *bad = nullptr;
    CHECK(uavrt_trajectory_load((fixture_dir() / "broken_flight.txt").c_str(), &bad) ==
          UAVRT_ERR_PARSE);
    CHECK(bad == nullptr);
    CHECK(std::string(uavrt_last_error()).find(":2:") != std::string::npos);
}

TEST_CASE("Simulation through the C surface")
{
    SceneHandle scene{build_scene(0.0, 1, 1)};
    TrajectoryHandle flight{load_flight()};
    const uavrt_sim_params params = test_params();

    RunHandle run;
    REQUIRE(uavrt_simulate(scene.ptr, flight.ptr, &params, "full", "crossing", &run.ptr) ==
            UAVRT_OK);
    REQUIRE(uavrt_run_snapshot_count(run.ptr) == 11);
    CHECK(uavrt_run_ray_count(run.ptr, 0) >= 1);
    CHECK(uavrt_run_ray_count(run.ptr, 99) == 0); // out of range reads as empty
    CHECK(uavrt_run_trace_seconds(run.ptr) > 0.0);

    double sigma = -1.0;
    REQUIRE(uavrt_run_delay_spread(run.ptr, 0, &sigma) == UAVRT_OK);
    CHECK(sigma >= 0.0);
    CHECK(uavrt_run_delay_spread(run.ptr, 99, &sigma) == UAVRT_ERR_ARGUMENT);

    // Identical inputs serialize to identical bytes (the determinism
    // contract external callers rely on).
    const fs::path csv_a = fixture_dir() / "run_a.csv";
    const fs::path csv_b = fixture_dir() / "run_b.csv";
    REQUIRE(uavrt_run_write_csv(run.ptr, csv_a.c_str()) == UAVRT_OK);
    RunHandle rerun;
    REQUIRE(uavrt_simulate(scene.ptr, flight.ptr, &params, "full", "crossing",
                           &rerun.ptr) == UAVRT_OK);
    REQUIRE(uavrt_run_write_csv(rerun.ptr, csv_b.c_str()) == UAVRT_OK);
    CHECK(read_text(csv_a) == read_text(csv_b));

    RunHandle loaded;
    REQUIRE(uavrt_run_load_csv(csv_a.c_str(), &loaded.ptr) == UAVRT_OK);
    CHECK(uavrt_run_snapshot_count(loaded.ptr) == 11);
    CHECK(uavrt_run_ray_count(loaded.ptr, 0) == uavrt_run_ray_count(run.ptr, 0));

    // Bad parameters map onto the argument status.
    uavrt_sim_params bad = params;
    bad.frequency_mhz = -4.0;
    uavrt_run *out = nullptr;
    CHECK(uavrt_simulate(scene.ptr, flight.ptr, &bad, nullptr, nullptr, &out) ==
          UAVRT_ERR_ARGUMENT);
    bad = params;
    bad.threshold_db = 5.0;
    CHECK(uavrt_simulate(scene.ptr, flight.ptr, &bad, nullptr, nullptr, &out) ==
          UAVRT_ERR_ARGUMENT);
    CHECK(uavrt_simulate(nullptr, flight.ptr, &params, nullptr, nullptr, &out) ==
          UAVRT_ERR_ARGUMENT);
}

TEST_CASE("Statistics bundle files")
{
    SceneHandle full{build_scene(0.0, 1, 1)};
    SceneHandle coarse{build_scene(30.0, 0, 0)};
    TrajectoryHandle flight{load_flight()};
    const uavrt_sim_params params = test_params();

    RunHandle run1, run3;
    REQUIRE(uavrt_simulate(coarse.ptr, flight.ptr, &params, "coarse", "crossing",
                           &run1.ptr) == UAVRT_OK);
    REQUIRE(uavrt_simulate(full.ptr, flight.ptr, &params, "full", "crossing", &run3.ptr) ==
            UAVRT_OK);

    const fs::path multi_dir = fixture_dir() / "stats_multi";
    fs::remove_all(multi_dir);
    const uavrt_run *runs[] = {run1.ptr, run3.ptr};
    const char *labels[] = {"db1", "db3"};
    REQUIRE(uavrt_stats_write(runs, labels, 2, multi_dir.c_str()) == UAVRT_OK);

    for (const char *name : {"delay_spread_db1.csv", "delay_spread_db3.csv",
                             "power_distribution.csv", "offsets_aod_azimuth.csv",
                             "offsets_aod_elevation.csv", "offsets_aoa_azimuth.csv",
                             "offsets_aoa_elevation.csv", "ray_counts.csv", "comparison.txt",
                             "summary.txt"})
        CHECK(fs::exists(multi_dir / name));

    CHECK(read_text(multi_dir / "summary.txt").rfind("uavrt-stats 1\n", 0) == 0);
    CHECK(read_text(multi_dir / "comparison.txt").rfind("uavrt-comparison 1\n", 0) == 0);
    CHECK(read_text(multi_dir / "delay_spread_db1.csv").rfind("t,sigma_ns\n", 0) == 0);
    CHECK(read_text(multi_dir / "ray_counts.csv").rfind("t,db1,db3,mean\n", 0) == 0);

    const fs::path single_dir = fixture_dir() / "stats_single";
    fs::remove_all(single_dir);
    REQUIRE(uavrt_stats_write(runs, labels, 1, single_dir.c_str()) == UAVRT_OK);
    CHECK(fs::exists(single_dir / "summary.txt"));
    CHECK(!fs::exists(single_dir / "comparison.txt")); // needs two runs

    const char *bad_label[] = {"db 1"};
    CHECK(uavrt_stats_write(runs, bad_label, 1, single_dir.c_str()) == UAVRT_ERR_ARGUMENT);
    const char *dup_labels[] = {"db1", "db1"};
    CHECK(uavrt_stats_write(runs, dup_labels, 2, single_dir.c_str()) == UAVRT_ERR_ARGUMENT);
    CHECK(uavrt_stats_write(runs, labels, 0, single_dir.c_str()) == UAVRT_ERR_ARGUMENT);
}

TEST_CASE("Benchmark report")
{
    SceneHandle full{build_scene(0.0, 1, 1)};
    SceneHandle coarse{build_scene(30.0, 0, 0)};
    TrajectoryHandle flight{load_flight()};
    const uavrt_sim_params params = test_params();

    const fs::path report = fixture_dir() / "benchmark.txt";
    const uavrt_scene *scenes[] = {coarse.ptr, full.ptr};
    const char *labels[] = {"db1", "db3"};
    REQUIRE(uavrt_benchmark(scenes, labels, 2, flight.ptr, &params, 2, report.c_str()) ==
            UAVRT_OK);

    const std::string text = read_text(report);
    CHECK(text.rfind("uavrt-benchmark 1\n", 0) == 0);
    CHECK(text.find("states 11\n") != std::string::npos);
    CHECK(text.find("repetitions 2\n") != std::string::npos);
    CHECK(text.find("db1 mean_trace_s ") != std::string::npos);
    CHECK(text.find("db3 mean_trace_s ") != std::string::npos);
    CHECK(text.find("end\n") != std::string::npos);

    CHECK(uavrt_benchmark(scenes, labels, 1, flight.ptr, &params, 2, report.c_str()) ==
          UAVRT_ERR_ARGUMENT);
    CHECK(uavrt_benchmark(scenes, labels, 2, flight.ptr, &params, 0, report.c_str()) ==
          UAVRT_ERR_ARGUMENT);
}
