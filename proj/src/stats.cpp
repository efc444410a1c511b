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

#include "uavrt/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace uavrt
{

    namespace
    {

        void append_g17(std::string &buf, double v)
        {
            char tmp[40];
            std::snprintf(tmp, sizeof tmp, "%.17g", v);
            buf += tmp;
        }

        void append_g9(std::string &buf, double v)
        {
            char tmp[40];
            std::snprintf(tmp, sizeof tmp, "%.9g", v);
            buf += tmp;
        }

        [[noreturn]] void parse_fail(const std::string &name, int line, const std::string &message)
        {
            throw std::runtime_error(name + ":" + std::to_string(line) + ": " + message);
        }

        double parse_number(const std::string &token, const std::string &name, int line)
        {
            std::size_t used = 0;
            double v = 0.0;
            try
            {
                v = std::stod(token, &used);
            }
            catch (const std::exception &)
            {
                parse_fail(name, line, "expected a number, got '" + token + "'");
            }
            if (used != token.size() || !std::isfinite(v))
                parse_fail(name, line, "expected a number, got '" + token + "'");
            return v;
        }

    } // namespace

    double Histogram::total() const
    {
        double sum = 0.0;
        if (mode == Mode::count)
            for (double c : counts)
                sum += c;
        else
            for (std::size_t i = 0; i < counts.size(); i++)
                sum += counts[i] * (edges[i + 1] - edges[i]);
        return sum;
    }

    Histogram make_histogram(const std::vector<double> &samples, std::size_t bins, Histogram::Mode mode)
    {
        Histogram h;
        h.mode = mode;
        if (samples.empty() || bins == 0)
            return h;

        auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
        double lo = *lo_it, hi = *hi_it;
        if (lo == hi)
        {
            lo -= 0.5;
            hi += 0.5;
        }

        h.edges.resize(bins + 1);
        for (std::size_t i = 0; i <= bins; i++)
            h.edges[i] = lo + (hi - lo) * (double(i) / double(bins));
        h.counts.assign(bins, 0.0);

        const double width = (hi - lo) / double(bins);
        for (double s : samples)
        {
            auto bin = std::size_t((s - lo) / width);
            if (bin >= bins)
                bin = bins - 1; // the top edge belongs to the last bin
            h.counts[bin] += 1.0;
        }
        if (mode == Histogram::Mode::pdf)
            for (double &c : h.counts)
                c /= double(samples.size()) * width;
        return h;
    }

    LognormalFit fit_lognormal(const std::vector<double> &samples)
    {
        std::vector<double> logs;
        logs.reserve(samples.size());
        std::size_t dropped = 0;
        for (double s : samples)
        {
            if (s > 0.0)
                logs.push_back(std::log(s));
            else
                dropped++;
        }
        if (logs.size() < 2)
            throw std::invalid_argument("Lognormal fit needs at least two positive samples.");

        const double mu = std::accumulate(logs.begin(), logs.end(), 0.0) / double(logs.size());
        double ss = 0.0;
        for (double l : logs)
            ss += (l - mu) * (l - mu);

        LognormalFit fit;
        fit.mu = mu;
        fit.sigma = std::sqrt(ss / double(logs.size()));
        fit.count = logs.size();
        fit.domain_note = dropped == 0
                              ? "all samples positive"
                              : "excluded " + std::to_string(dropped) + " non-positive samples";
        return fit;
    }

    double rms_delay_spread(const ChannelSnapshot &snapshot)
    {
        if (snapshot.rays.empty())
            throw std::invalid_argument("Delay spread of an empty snapshot is undefined.");

        double wsum = 0.0, m1 = 0.0, m2 = 0.0;
        for (const RayRecord &ray : snapshot.rays)
        {
            const double w = std::pow(10.0, ray.relative_gain_db / 10.0);
            wsum += w;
            m1 += w * ray.relative_delay_s;
            m2 += w * ray.relative_delay_s * ray.relative_delay_s;
        }
        m1 /= wsum;
        m2 /= wsum;
        return std::sqrt(std::max(0.0, m2 - m1 * m1));
    }

    std::vector<double> pooled_nlos_gains(const std::vector<const SimulationRun *> &runs)
    {
        std::vector<double> gains;
        for (const SimulationRun *run : runs)
            for (const ChannelSnapshot &snap : run->snapshots)
                for (const RayRecord &ray : snap.rays)
                    if (ray.kind != PathKind::los)
                        gains.push_back(ray.relative_gain_db);
        return gains;
    }

    Histogram relative_power_distribution(const SimulationRun &run, std::size_t bins,
                                          Histogram::Mode mode)
    {
        return make_histogram(pooled_nlos_gains({&run}), bins, mode);
    }

    AngleOffsets angle_offsets(const SimulationRun &run)
    {
        return angle_offsets(std::vector<const SimulationRun *>{&run});
    }

    AngleOffsets angle_offsets(const std::vector<const SimulationRun *> &runs)
    {
        AngleOffsets out;
        for (const SimulationRun *run : runs)
        {
            for (const ChannelSnapshot &snap : run->snapshots)
            {
                const RayRecord *los = nullptr;
                for (const RayRecord &ray : snap.rays)
                    if (ray.kind == PathKind::los)
                        los = &ray;
                if (los == nullptr)
                {
                    out.skipped_instants++;
                    continue;
                }
                for (const RayRecord &ray : snap.rays)
                {
                    if (ray.kind == PathKind::los)
                        continue;
                    out.aod_azimuth.push_back(wrap_angle(ray.departure.azimuth - los->departure.azimuth));
                    out.aod_elevation.push_back(ray.departure.elevation - los->departure.elevation);
                    out.aoa_azimuth.push_back(wrap_angle(ray.arrival.azimuth - los->arrival.azimuth));
                    out.aoa_elevation.push_back(ray.arrival.elevation - los->arrival.elevation);
                }
            }
        }
        return out;
    }

    std::vector<std::size_t> ray_count_series(const SimulationRun &run)
    {
        std::vector<std::size_t> counts;
        counts.reserve(run.snapshots.size());
        for (const ChannelSnapshot &snap : run.snapshots)
            counts.push_back(snap.rays.size());
        return counts;
    }

    namespace
    {

        void require_shared_time_axis(const std::vector<const SimulationRun *> &runs)
        {
            for (std::size_t i = 1; i < runs.size(); i++)
            {
                if (runs[i]->snapshots.size() != runs[0]->snapshots.size())
                    throw std::runtime_error("Runs cover different numbers of instants.");
                for (std::size_t k = 0; k < runs[0]->snapshots.size(); k++)
                    if (runs[i]->snapshots[k].t != runs[0]->snapshots[k].t)
                        throw std::runtime_error("Runs cover different time axes.");
            }
        }

    } // namespace

    std::vector<double> mean_ray_count_series(const std::vector<const SimulationRun *> &runs)
    {
        if (runs.empty())
            return {};
        require_shared_time_axis(runs);

        std::vector<double> mean(runs[0]->snapshots.size(), 0.0);
        for (const SimulationRun *run : runs)
            for (std::size_t k = 0; k < mean.size(); k++)
                mean[k] += double(run->snapshots[k].rays.size());
        for (double &m : mean)
            m /= double(runs.size());
        return mean;
    }

    ComparisonReport compare_runs(const std::vector<LabeledRun> &runs)
    {
        if (runs.size() < 2)
            throw std::invalid_argument("Comparison needs at least two runs.");
        std::vector<const SimulationRun *> bare;
        bare.reserve(runs.size());
        for (const LabeledRun &lr : runs)
            bare.push_back(lr.run);
        require_shared_time_axis(bare);

        const SimulationRun &ref = *runs.back().run;
        const std::size_t instants = ref.snapshots.size();

        ComparisonReport report;
        report.reference_label = runs.back().label;
        for (const LabeledRun &lr : runs)
        {
            const SimulationRun &run = *lr.run;
            LodReport entry;
            entry.label = lr.label;
            entry.trace_seconds = run.trace_seconds;

            double count_sum = 0.0, offset_sum = 0.0, spread_sum = 0.0;
            std::size_t spread_n = 0;
            for (std::size_t k = 0; k < instants; k++)
            {
                const auto n = double(run.snapshots[k].rays.size());
                count_sum += n;
                offset_sum += double(ref.snapshots[k].rays.size()) - n;
                if (!run.snapshots[k].rays.empty())
                {
                    spread_sum += rms_delay_spread(run.snapshots[k]);
                    spread_n++;
                }
            }
            entry.mean_ray_count = instants ? count_sum / double(instants) : 0.0;
            entry.mean_count_offset = instants ? offset_sum / double(instants) : 0.0;
            entry.mean_delay_spread_s = spread_n ? spread_sum / double(spread_n) : 0.0;
            report.entries.push_back(entry);
        }
        return report;
    }

    void write_comparison(std::ostream &out, const ComparisonReport &report)
    {
        std::string buf;
        buf += "uavrt-comparison 1\n";
        buf += "reference " + report.reference_label + "\n";
        buf += "entries " + std::to_string(report.entries.size()) + "\n";
        for (const LodReport &e : report.entries)
        {
            buf += e.label;
            for (double v : {e.trace_seconds, e.mean_ray_count, e.mean_delay_spread_s,
                             e.mean_count_offset})
            {
                buf += ' ';
                append_g17(buf, v);
            }
            buf += '\n';
        }
        buf += "end\n";
        out << buf;
    }

    ComparisonReport parse_comparison(std::istream &in, const std::string &stream_name)
    {
        int line_no = 0;
        std::string line;
        auto next = [&]() {
            while (std::getline(in, line))
            {
                line_no++;
                if (!line.empty() && line.back() == '\r')
                    line.pop_back();
                if (!line.empty())
                    return true;
            }
            parse_fail(stream_name, line_no + 1, "unexpected end of file");
        };
        auto tokens_of = [&]() {
            std::istringstream iss(line);
            std::vector<std::string> tokens;
            std::string t;
            while (iss >> t)
                tokens.push_back(t);
            return tokens;
        };

        next();
        if (line != "uavrt-comparison 1")
            parse_fail(stream_name, line_no, "bad header '" + line + "'");

        ComparisonReport report;
        next();
        {
            auto tokens = tokens_of();
            if (tokens.size() != 2 || tokens[0] != "reference")
                parse_fail(stream_name, line_no, "expected 'reference <label>'");
            report.reference_label = tokens[1];
        }
        next();
        std::size_t count = 0;
        {
            auto tokens = tokens_of();
            if (tokens.size() != 2 || tokens[0] != "entries")
                parse_fail(stream_name, line_no, "expected 'entries <count>'");
            count = std::size_t(parse_number(tokens[1], stream_name, line_no));
        }
        for (std::size_t i = 0; i < count; i++)
        {
            next();
            auto tokens = tokens_of();
            if (tokens.size() != 5)
                parse_fail(stream_name, line_no, "expected '<label> <time> <count> <spread> <offset>'");
            LodReport e;
            e.label = tokens[0];
            e.trace_seconds = parse_number(tokens[1], stream_name, line_no);
            e.mean_ray_count = parse_number(tokens[2], stream_name, line_no);
            e.mean_delay_spread_s = parse_number(tokens[3], stream_name, line_no);
            e.mean_count_offset = parse_number(tokens[4], stream_name, line_no);
            report.entries.push_back(e);
        }
        next();
        if (line != "end")
            parse_fail(stream_name, line_no, "expected 'end'");
        return report;
    }

    void write_histogram_csv(std::ostream &out, const Histogram &histogram)
    {
        std::string buf = "bin_lo,bin_hi,value\n";
        for (std::size_t i = 0; i < histogram.counts.size(); i++)
        {
            append_g9(buf, histogram.edges[i]);
            buf += ',';
            append_g9(buf, histogram.edges[i + 1]);
            buf += ',';
            append_g9(buf, histogram.counts[i]);
            buf += '\n';
        }
        out << buf;
    }

    void write_samples_csv(std::ostream &out, const std::string &column,
                           const std::vector<double> &samples)
    {
        std::string buf = column + "\n";
        for (double s : samples)
        {
            append_g9(buf, s);
            buf += '\n';
        }
        out << buf;
    }

    void write_ray_count_csv(std::ostream &out, const std::vector<LabeledRun> &runs)
    {
        if (runs.empty())
        {
            out << "t,mean\n";
            return;
        }
        std::vector<const SimulationRun *> bare;
        for (const LabeledRun &lr : runs)
            bare.push_back(lr.run);
        require_shared_time_axis(bare);

        std::string buf = "t";
        for (const LabeledRun &lr : runs)
            buf += "," + lr.label;
        buf += ",mean\n";

        const auto mean = mean_ray_count_series(bare);
        for (std::size_t k = 0; k < mean.size(); k++)
        {
            append_g9(buf, runs[0].run->snapshots[k].t);
            for (const LabeledRun &lr : runs)
                buf += "," + std::to_string(lr.run->snapshots[k].rays.size());
            buf += ',';
            append_g9(buf, mean[k]);
            buf += '\n';
        }
        out << buf;
    }

} // namespace uavrt
