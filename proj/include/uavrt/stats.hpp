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

#include "uavrt/channel.hpp"

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace uavrt
{

    struct Histogram
    {
        enum class Mode
        {
            count,
            pdf,
        };

        std::vector<double> edges;  // bins + 1, strictly increasing
        std::vector<double> counts; // per bin
        Mode mode = Mode::count;

        double total() const;
    };

    // Uniform binning over the observed sample range; the top edge is
    // inclusive. A single-valued sample set widens to a unit-wide bin; an
    // empty one yields an empty histogram.
    Histogram make_histogram(const std::vector<double> &samples, std::size_t bins = 50,
                             Histogram::Mode mode = Histogram::Mode::count);

    struct LognormalFit
    {
        double mu = 0.0;    // mean of ln(sample)
        double sigma = 0.0; // population standard deviation of ln(sample)
        std::size_t count = 0;
        std::string domain_note; // records discarded non-positive samples
    };

    // Maximum-likelihood lognormal fit. Non-positive samples are excluded
    // (noted in domain_note); fewer than two usable samples is an error.
    LognormalFit fit_lognormal(const std::vector<double> &samples);

    // Power-weighted RMS spread of the ray delays of one snapshot, in
    // seconds; weights are linear powers from the relative gains. Throws on
    // an empty snapshot.
    double rms_delay_spread(const ChannelSnapshot &snapshot);

    // Pooled NLoS relative gains (dB) over every snapshot of every run.
    std::vector<double> pooled_nlos_gains(const std::vector<const SimulationRun *> &runs);
    Histogram relative_power_distribution(const SimulationRun &run, std::size_t bins = 50,
                                          Histogram::Mode mode = Histogram::Mode::count);

    // Per-ray angle offsets against the same-instant direct ray, azimuths
    // wrapped to (-pi, pi]. Instants without a direct ray are skipped and
    // counted.
    struct AngleOffsets
    {
        std::vector<double> aod_azimuth;
        std::vector<double> aod_elevation;
        std::vector<double> aoa_azimuth;
        std::vector<double> aoa_elevation;
        std::size_t skipped_instants = 0;
    };
    AngleOffsets angle_offsets(const SimulationRun &run);
    AngleOffsets angle_offsets(const std::vector<const SimulationRun *> &runs);

    // Valid-ray-count series of one run, one entry per snapshot.
    std::vector<std::size_t> ray_count_series(const SimulationRun &run);

    // Across-run mean count per instant; all runs must share the snapshot
    // time axis.
    std::vector<double> mean_ray_count_series(const std::vector<const SimulationRun *> &runs);

    // ---- Cross-database comparison ----------------------------------------

    struct LabeledRun
    {
        std::string label; // single whitespace-free token
        const SimulationRun *run = nullptr;
    };

    struct LodReport
    {
        std::string label;
        double trace_seconds = 0.0;
        double mean_ray_count = 0.0;
        double mean_delay_spread_s = 0.0; // over non-empty snapshots
        double mean_count_offset = 0.0;   // reference count minus this run's, averaged
    };

    struct ComparisonReport
    {
        std::vector<LodReport> entries; // in input order
        std::string reference_label;    // the last (richest) run
    };

    // Compare runs over one trajectory across detail levels; the last entry
    // is the reference for count offsets. Throws std::invalid_argument for
    // fewer than two runs and std::runtime_error when time axes differ.
    ComparisonReport compare_runs(const std::vector<LabeledRun> &runs);

    // Structured-text round trip for the comparison report. Numbers are
    // written with full precision, so parse(write(r)) reproduces r exactly.
    void write_comparison(std::ostream &out, const ComparisonReport &report);
    ComparisonReport parse_comparison(std::istream &in,
                                      const std::string &stream_name = "<comparison>");

    // ---- CSV export ---------------------------------------------------------

    // Columns: bin_lo,bin_hi,value.
    void write_histogram_csv(std::ostream &out, const Histogram &histogram);

    // Single named column of samples.
    void write_samples_csv(std::ostream &out, const std::string &column,
                           const std::vector<double> &samples);

    // Columns: t,<label>...,mean — the per-instant counts of each run plus
    // their mean. Requires a shared time axis.
    void write_ray_count_csv(std::ostream &out, const std::vector<LabeledRun> &runs);

} // namespace uavrt
