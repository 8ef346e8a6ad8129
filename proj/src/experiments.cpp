// SPDX-License-Identifier: Apache-2.0
//
// bdris-sim: beyond-diagonal RIS phase-response library and NOMA LEO downlink simulator
// Copyright (C) 2026 The bdris-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "bdris/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <system_error>
#include <thread>

namespace bdris
{

RisSpec Scenario::ris_spec(int num_elements) const
{
    return RisSpec(num_elements, architecture, mode, group_count, sector_count);
}

void SweepSpec::validate() const
{
    if (trials < 1)
        throw std::invalid_argument("trials must be at least 1");
    if (power_points_dbm.empty() || element_counts.empty())
        throw std::invalid_argument("sweep needs at least one power point and one element count");
    if (schemes.empty())
        throw std::invalid_argument("sweep needs at least one scheme");
    for (double p : power_points_dbm)
        if (!std::isfinite(p))
            throw std::invalid_argument("power points must be finite");
    if (scenario.num_users < 1 || scenario.num_users > 2)
        throw std::invalid_argument("one or two users supported");
    scenario.geometry.validate();
    scenario.link.validate();
    scenario.bcd.validate();
    if (scenario.min_rate_near < 0.0 || scenario.min_rate_far < 0.0)
        throw std::invalid_argument("minimum rates must be non-negative");
    for (int k : element_counts)
    {
        const RisSpec ris = scenario.ris_spec(k); // throws SpecError
        if (ris.mode() != Mode::Reflective && ris.mode() != Mode::Transmissive)
            throw std::invalid_argument("rate experiments support reflective/transmissive surfaces only");
    }
}

double AggregateRow::standard_error() const
{
    const int n = effective_trials();
    return n > 0 ? std_sum_rate / std::sqrt(static_cast<double>(n)) : std::numeric_limits<double>::quiet_NaN();
}

const AggregateRow &SweepResult::aggregate(double power_dbm, int num_elements, Scheme scheme) const
{
    for (const auto &a : aggregates)
        if (a.power_dbm == power_dbm && a.num_elements == num_elements && a.scheme == scheme)
            return a;
    throw std::out_of_range("no aggregate row for the requested point");
}

ChannelRealization draw_trial(const Scenario &scenario, int num_elements, std::uint64_t base_seed, int trial)
{
    std::map<std::uint64_t, Rng> engines;
    const LinkStreams streams = [&](std::uint64_t link) -> Rng & {
        auto it = engines.find(link);
        if (it == engines.end())
            it = engines.emplace(link, make_stream(base_seed, {static_cast<std::uint64_t>(trial), link})).first;
        return it->second;
    };
    return draw_realization(scenario.geometry, scenario.link, num_elements, scenario.num_users,
                            scenario.include_direct, streams);
}

namespace
{

DetailRow make_row(double power_dbm, int k, Scheme scheme, int trial)
{
    DetailRow r;
    r.power_dbm = power_dbm;
    r.num_elements = k;
    r.scheme = scheme;
    r.trial = trial;
    return r;
}

void fill(DetailRow &row, const Solution &sol)
{
    row.rate_near = sol.rates.rate_near;
    row.rate_far = sol.rates.rate_far;
    row.sum_rate = sol.rates.sum_rate;
    row.outage = false;
}

void mark_outage(DetailRow &row)
{
    row.rate_near = row.rate_far = row.sum_rate = 0.0;
    row.outage = true;
}

bool contains(const std::vector<Scheme> &schemes, Scheme s)
{
    return std::find(schemes.begin(), schemes.end(), s) != schemes.end();
}

template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn &&fn)
{
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
    if (threads <= 1)
    {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++)
            {
                try
                {
                    fn(i);
                }
                catch (...)
                {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                }
            }
        });
    for (auto &th : pool)
        th.join();
    if (failure)
        std::rethrow_exception(failure);
}

struct Point
{
    double power_dbm;
    int num_elements;
};

SweepResult run_points(const SweepSpec &spec, const std::vector<Point> &points, SweepAxis axis)
{
    const std::size_t trials = static_cast<std::size_t>(spec.trials);
    std::vector<PairedOutcome> outcomes(points.size() * trials);
    parallel_for(outcomes.size(), spec.threads, [&](std::size_t i) {
        const Point &pt = points[i / trials];
        outcomes[i] = solve_trial(spec.scenario, pt.power_dbm, pt.num_elements, static_cast<int>(i % trials),
                                  spec.base_seed, spec.schemes);
    });

    SweepResult result;
    result.axis = axis;
    for (std::size_t p = 0; p < points.size(); ++p)
    {
        for (Scheme s : {Scheme::BdRis, Scheme::CdRis})
        {
            if (!contains(spec.schemes, s))
                continue;
            AggregateRow agg;
            agg.power_dbm = points[p].power_dbm;
            agg.num_elements = points[p].num_elements;
            agg.scheme = s;
            agg.num_trials = spec.trials;

            std::vector<double> ok;
            for (std::size_t t = 0; t < trials; ++t)
            {
                const PairedOutcome &o = outcomes[p * trials + t];
                const DetailRow &row = s == Scheme::BdRis ? o.bd : o.cd;
                result.rows.push_back(row);
                if (row.outage)
                    ++agg.outage_count;
                else
                    ok.push_back(row.sum_rate);
            }
            if (ok.empty())
            {
                agg.mean_sum_rate = agg.std_sum_rate = std::numeric_limits<double>::quiet_NaN();
            }
            else
            {
                double mean = 0.0;
                for (double x : ok)
                    mean += x;
                mean /= static_cast<double>(ok.size());
                double ss = 0.0;
                for (double x : ok)
                    ss += (x - mean) * (x - mean);
                agg.mean_sum_rate = mean;
                agg.std_sum_rate = ok.size() > 1 ? std::sqrt(ss / static_cast<double>(ok.size() - 1)) : 0.0;
            }
            result.aggregates.push_back(agg);
        }
    }

    auto scheme_key = [](Scheme s) { return to_string(s); };
    std::stable_sort(result.rows.begin(), result.rows.end(), [&](const DetailRow &a, const DetailRow &b) {
        if (a.power_dbm != b.power_dbm)
            return a.power_dbm < b.power_dbm;
        if (a.num_elements != b.num_elements)
            return a.num_elements < b.num_elements;
        if (a.scheme != b.scheme)
            return scheme_key(a.scheme) < scheme_key(b.scheme);
        return a.trial < b.trial;
    });
    std::stable_sort(result.aggregates.begin(), result.aggregates.end(),
                     [&](const AggregateRow &a, const AggregateRow &b) {
                         if (a.power_dbm != b.power_dbm)
                             return a.power_dbm < b.power_dbm;
                         if (a.num_elements != b.num_elements)
                             return a.num_elements < b.num_elements;
                         return scheme_key(a.scheme) < scheme_key(b.scheme);
                     });
    return result;
}

} // namespace

PairedOutcome solve_trial(const Scenario &scenario, double power_dbm, int num_elements, int trial,
                          std::uint64_t base_seed, const std::vector<Scheme> &schemes)
{
    const ChannelRealization ch = draw_trial(scenario, num_elements, base_seed, trial);

    const ProblemSpec bd{scenario.ris_spec(num_elements), power_dbm, scenario.min_rate_near, scenario.min_rate_far,
                         Scheme::BdRis};
    ProblemSpec cd = bd;
    cd.scheme = Scheme::CdRis;

    PairedOutcome out{make_row(power_dbm, num_elements, Scheme::BdRis, trial),
                      make_row(power_dbm, num_elements, Scheme::CdRis, trial)};

    BcdSettings cd_settings = scenario.bcd;
    cd_settings.warm_start = WarmStart::identity();

    const bool want_cd = contains(schemes, Scheme::CdRis);
    const bool want_bd = contains(schemes, Scheme::BdRis);
    const bool shared_start = want_bd && scenario.bcd.warm_start.kind == WarmStart::Kind::CdSolution;

    PhaseResponse bd_start = PhaseResponse::identity(num_elements);
    if (want_cd || shared_start)
    {
        try
        {
            const Solution sol = bcd_solve(ch, cd, cd_settings);
            fill(out.cd, sol);
            bd_start = sol.phase;
        }
        catch (const InfeasibleError &)
        {
            mark_outage(out.cd);
        }
    }
    if (!want_cd)
        mark_outage(out.cd);

    if (want_bd)
    {
        try
        {
            const Solution sol = shared_start ? bcd_solve(ch, bd, scenario.bcd, bd_start)
                                              : bcd_solve(ch, bd, scenario.bcd);
            fill(out.bd, sol);
        }
        catch (const InfeasibleError &)
        {
            mark_outage(out.bd);
        }
    }
    return out;
}

SweepResult run_power_sweep(const SweepSpec &spec)
{
    spec.validate();
    if (spec.element_counts.size() != 1)
        throw std::invalid_argument("power sweep runs at a single element count");
    std::vector<Point> points;
    for (double p : spec.power_points_dbm)
        points.push_back({p, spec.element_counts.front()});
    return run_points(spec, points, SweepAxis::Power);
}

SweepResult run_element_sweep(const SweepSpec &spec)
{
    spec.validate();
    if (spec.power_points_dbm.size() != 1)
        throw std::invalid_argument("element sweep runs at a single transmit power");
    std::vector<Point> points;
    for (int k : spec.element_counts)
        points.push_back({spec.power_points_dbm.front(), k});
    return run_points(spec, points, SweepAxis::Elements);
}

// ---- emission ----

namespace
{

std::string fixed6(double x)
{
    if (std::isnan(x))
        return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    std::string s(buf);
    if (s == "-0.000000")
        s = "0.000000";
    return s;
}

std::ofstream open_for_write(const std::filesystem::path &path)
{
    if (path.has_parent_path())
    {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec)
            throw std::runtime_error("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    return out;
}

void finish(std::ofstream &out, const std::filesystem::path &path)
{
    out.flush();
    if (!out)
        throw std::runtime_error("write to " + path.string() + " failed");
}

} // namespace

void emit_detail_csv(const SweepResult &result, const std::filesystem::path &path)
{
    auto out = open_for_write(path);
    out << kDetailHeader << '\n';
    for (const auto &r : result.rows)
        out << fixed6(r.power_dbm) << ',' << r.num_elements << ',' << to_string(r.scheme) << ',' << r.trial << ','
            << fixed6(r.rate_near) << ',' << fixed6(r.rate_far) << ',' << fixed6(r.sum_rate) << ','
            << (r.outage ? 1 : 0) << '\n';
    finish(out, path);
}

void emit_aggregate_csv(const SweepResult &result, const std::filesystem::path &path)
{
    auto out = open_for_write(path);
    out << kAggregateHeader << '\n';
    for (const auto &a : result.aggregates)
        out << fixed6(a.power_dbm) << ',' << a.num_elements << ',' << to_string(a.scheme) << ','
            << fixed6(a.mean_sum_rate) << ',' << fixed6(a.std_sum_rate) << ',' << a.num_trials << ','
            << a.outage_count << '\n';
    finish(out, path);
}

void emit_csv(const SweepResult &result, const std::filesystem::path &detail_path,
              const std::filesystem::path &aggregate_path)
{
    emit_detail_csv(result, detail_path);
    emit_aggregate_csv(result, aggregate_path);
}

void emit_plot_script(const SweepResult &result, const std::filesystem::path &aggregate_csv,
                      const std::filesystem::path &script_path)
{
    if (result.aggregates.empty())
        throw std::invalid_argument("plot script needs aggregate rows");

    std::set<std::string> schemes;
    for (const auto &a : result.aggregates)
        schemes.insert(to_string(a.scheme));

    const bool power_axis = result.axis == SweepAxis::Power;
    const std::string csv = aggregate_csv.string();
    std::filesystem::path png = aggregate_csv;
    png.replace_extension(".png");

    auto out = open_for_write(script_path);
    out << "# gnuplot script: spectral efficiency per scheme\n"
        << "set datafile separator ','\n"
        << "set terminal png size 800,600\n"
        << "set output '" << png.string() << "'\n"
        << "set xlabel '" << (power_axis ? "Transmit power (dBm)" : "Number of PREs") << "'\n"
        << "set ylabel 'Spectral efficiency (bps/Hz)'\n"
        << "set key top left\n"
        << "set grid\n"
        << "plot";
    const int xcol = power_axis ? 1 : 2;
    bool first = true;
    for (const auto &s : schemes)
    {
        out << (first ? " " : ", \\\n     ") << "'" << csv << "' every ::1 using " << xcol << ":(strcol(3) eq '" << s
            << "' ? $4 : 1/0) with linespoints title '" << s << "'";
        first = false;
    }
    out << '\n';
    finish(out, script_path);
}

// ---- oracle agreement ----

OracleCheckReport run_oracle_check(int instances, std::uint64_t seed, const BcdSettings &settings)
{
    if (instances < 1)
        throw std::invalid_argument("oracle check needs at least one instance");
    OracleCheckReport rep;
    constexpr double kPowerDbm = 10.0; // 10 mW against 1 mW noise
    constexpr double kRicianK = 1.0;

    for (int i = 0; i < instances; ++i)
    {
        Rng rng = make_stream(seed, {1, static_cast<std::uint64_t>(i)});
        const ChannelRealization ch = draw_unit_realization(2, {1.0, 0.5}, kRicianK, true, rng);
        const ProblemSpec problem{RisSpec::single_connected(2), kPowerDbm, 0.0, 0.0, Scheme::BdRis};
        const double reference = brute_force_oracle(ch, problem, 64).rates.sum_rate;
        const double got = bcd_solve(ch, problem, settings).rates.sum_rate;
        const double shortfall = std::max(0.0, (reference - got) / reference);
        rep.worst_pair_shortfall = std::max(rep.worst_pair_shortfall, shortfall);
        ++rep.pair_instances;
        if (shortfall <= kPairOracleTolerance)
            ++rep.pair_passed;
    }

    static constexpr int kSizes[] = {2, 4, 8, 16};
    for (int i = 0; i < instances; ++i)
    {
        const int k = kSizes[i % 4];
        Rng rng = make_stream(seed, {2, static_cast<std::uint64_t>(i)});
        const ChannelRealization ch = draw_unit_realization(k, {1.0}, kRicianK, true, rng);
        const ProblemSpec problem{RisSpec::fully_connected(k), kPowerDbm, 0.0, 0.0, Scheme::BdRis};
        const Solution sol = bcd_solve(ch, problem, settings);
        const double bound = std::abs(ch.h_direct[0]) + ch.g_ris_user[0].norm() * ch.h_sat_ris.norm();
        const double gain = std::abs(effective_channel(ch, sol.phase.matrix(), 0));
        const double shortfall = std::max(0.0, (bound - gain) / bound);
        rep.worst_single_shortfall = std::max(rep.worst_single_shortfall, shortfall);
        ++rep.single_instances;
        if (shortfall <= kSingleBoundTolerance)
            ++rep.single_passed;
    }
    return rep;
}

} // namespace bdris
