/* SPDX-License-Identifier: Apache-2.0
 *
 * uavrt - deterministic ray-tracing simulator for UAV air-to-ground mmWave channels
 * Copyright 2026 the uavrt contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C binding of the simulator. Every object lives behind an opaque handle;
 * every fallible call returns a status code and leaves a human-readable
 * message in uavrt_last_error() (thread local, overwritten per call). All
 * strings are NUL-terminated UTF-8 paths or labels owned by the caller.
 */

#ifndef UAVRT_H
#define UAVRT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C"
{
#endif

    typedef enum uavrt_status
    {
        UAVRT_OK = 0,
        UAVRT_ERR_ARGUMENT = 1, /* invalid parameter or configuration value */
        UAVRT_ERR_PARSE = 2,    /* malformed input file (message carries file:line) */
        UAVRT_ERR_IO = 3,       /* file could not be opened or written */
        UAVRT_ERR_INTERNAL = 4  /* unexpected failure inside the simulator */
    } uavrt_status;

    typedef struct uavrt_scene uavrt_scene;           /* reconstructed scene database */
    typedef struct uavrt_trajectory uavrt_trajectory; /* sampled flight plan */
    typedef struct uavrt_run uavrt_run;               /* channel snapshot series */

    /* Simulation parameters. Call uavrt_sim_params_init first; it fills the
     * documented defaults (28 GHz, -45 dB cutoff, 10 dB foliage loss, seed 1,
     * both interaction kinds on, worker count = available cores). */
    typedef struct uavrt_sim_params
    {
        double frequency_mhz;
        double rx_x_m;
        double rx_y_m;
        double rx_z_m;           /* fixed ground terminal position */
        double threshold_db;     /* relative-gain cutoff; -INFINITY disables */
        double foliage_loss_db;  /* per pierced foliage facet */
        double tx_power_dbm;     /* metadata only; the model stays relative */
        uint64_t seed;           /* governs the initial phase draws */
        size_t max_paths;        /* keep at most this many rays, 0 = all */
        int enable_reflections;  /* nonzero = trace specular reflections */
        int enable_diffractions; /* nonzero = trace edge diffractions */
        size_t workers;          /* tracer threads, 0 = all available cores */
    } uavrt_sim_params;

    /* Library semantic version, e.g. "1.0.0". */
    const char *uavrt_version(void);

    /* Message of the most recent failed call on this thread; empty string
     * after a success. The pointer stays valid until the next call. */
    const char *uavrt_last_error(void);

    void uavrt_sim_params_init(uavrt_sim_params *params);

    /* ---- Scene databases ------------------------------------------------ */

    /* Build a database from raw inputs: a DEM grid, a footprint table and a
     * material table, filtered by the level-of-detail criteria (keep
     * buildings of at least min_height_m; optionally include vegetation and
     * water sheets). */
    uavrt_status uavrt_scene_build(const char *dem_path, const char *footprints_path,
                                   const char *materials_path, double min_height_m,
                                   int include_vegetation, int include_water,
                                   uavrt_scene **out_scene);

    uavrt_status uavrt_scene_load(const char *db_path, uavrt_scene **out_scene);
    uavrt_status uavrt_scene_save(const uavrt_scene *scene, const char *db_path);

    /* Triangle / diffraction-edge counts; 0 for a NULL handle. */
    size_t uavrt_scene_facet_count(const uavrt_scene *scene);
    size_t uavrt_scene_wedge_count(const uavrt_scene *scene);

    void uavrt_scene_free(uavrt_scene *scene);

    /* ---- Trajectories ---------------------------------------------------- */

    uavrt_status uavrt_trajectory_load(const char *path, uavrt_trajectory **out_trajectory);

    /* Number of sampled time instants; 0 for a NULL handle. */
    size_t uavrt_trajectory_state_count(const uavrt_trajectory *trajectory);

    /* Override the sampling interval carried by the trajectory file. */
    uavrt_status uavrt_trajectory_set_dt(uavrt_trajectory *trajectory, double dt_s);

    void uavrt_trajectory_free(uavrt_trajectory *trajectory);

    /* ---- Simulation ------------------------------------------------------ */

    /* Run the full pipeline: trace every instant, synthesize ray records,
     * apply the threshold. The notes are provenance strings stored in the
     * run (NULL allowed). Deterministic for identical inputs and seed. */
    uavrt_status uavrt_simulate(const uavrt_scene *scene, const uavrt_trajectory *trajectory,
                                const uavrt_sim_params *params, const char *scene_note,
                                const char *trajectory_note, uavrt_run **out_run);

    uavrt_status uavrt_run_write_csv(const uavrt_run *run, const char *csv_path);
    uavrt_status uavrt_run_load_csv(const char *csv_path, uavrt_run **out_run);

    size_t uavrt_run_snapshot_count(const uavrt_run *run);
    size_t uavrt_run_ray_count(const uavrt_run *run, size_t snapshot_index);
    double uavrt_run_trace_seconds(const uavrt_run *run);

    /* Power-weighted RMS delay spread of one snapshot, in seconds. Fails
     * with UAVRT_ERR_ARGUMENT for an out-of-range index or a snapshot
     * without rays. */
    uavrt_status uavrt_run_delay_spread(const uavrt_run *run, size_t snapshot_index,
                                        double *out_seconds);

    void uavrt_run_free(uavrt_run *run);

    /* ---- Analysis --------------------------------------------------------- */

    /* Write the statistics bundle for one or more labelled runs into
     * out_dir (created if missing): per-run delay-spread series, pooled
     * relative-power distribution, angle-offset samples, and a structured
     * summary with lognormal fits; with two or more runs also the ray-count
     * table and the cross-database comparison report. Labels must be
     * non-empty tokens of [A-Za-z0-9_.-]; multi-run bundles require a shared
     * snapshot time axis. */
    uavrt_status uavrt_stats_write(const uavrt_run *const *runs, const char *const *labels,
                                   size_t count, const char *out_dir);

    /* Repeat the same flight over every database and write a timing report:
     * one line per database with mean and standard deviation of the tracer
     * wall-clock over `repetitions` runs plus the mean valid-ray count.
     * Needs at least two databases and one repetition. */
    uavrt_status uavrt_benchmark(const uavrt_scene *const *scenes, const char *const *labels,
                                 size_t count, const uavrt_trajectory *trajectory,
                                 const uavrt_sim_params *params, size_t repetitions,
                                 const char *report_path);

#ifdef __cplusplus
}
#endif

#endif /* UAVRT_H */
