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

#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bdris/experiments.hpp"

using namespace bdris;
namespace fs = std::filesystem;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace
{

std::string slurp(const fs::path &p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::vector<std::string> split(const std::string &line, char sep)
{
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, sep))
        out.push_back(cell);
    return out;
}

std::vector<std::string> lines_of(const std::string &text)
{
    std::vector<std::string> out;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line))
        out.push_back(line);
    return out;
}

fs::path scratch(const std::string &name)
{
    const fs::path dir = fs::temp_directory_path() / "bdris_test_experiments";
    fs::create_directories(dir);
    return dir / name;
}

// Unit-scale link budget so that the small sweeps below have visible rates.
Scenario strong_scenario()
{
    Scenario sc;
    sc.link.noise_power_dbm = -160.0;
    sc.bcd.warm_start = WarmStart::cd_solution();
    return sc;
}

SweepSpec small_power_sweep()
{
    SweepSpec spec;
    spec.power_points_dbm = {0.0, 10.0};
    spec.element_counts = {6};
    spec.trials = 4;
    spec.base_seed = 3;
    spec.scenario = strong_scenario();
    return spec;
}

} // namespace

TEST_CASE("trial channels are shared across element counts", "[experiments][rng]")
{
    const Scenario sc;
    const auto small = draw_trial(sc, 10, 5, 7);
    const auto large = draw_trial(sc, 20, 5, 7);
    CHECK(small.h_direct == large.h_direct);
    CHECK(large.h_sat_ris.head(10) == small.h_sat_ris);
    for (int u = 0; u < 2; ++u)
        CHECK(large.g_ris_user[u].head(10) == small.g_ris_user[u]);

    const auto other = draw_trial(sc, 10, 5, 8);
    CHECK_FALSE(other.h_sat_ris == small.h_sat_ris);
    const auto reseeded = draw_trial(sc, 10, 6, 7);
    CHECK_FALSE(reseeded.h_sat_ris == small.h_sat_ris);
}

TEST_CASE("paired trial", "[experiments]")
{
    const Scenario sc = strong_scenario();
    const auto out = solve_trial(sc, 10.0, 8, 0, 1, {Scheme::BdRis, Scheme::CdRis});
    CHECK(out.bd.scheme == Scheme::BdRis);
    CHECK(out.cd.scheme == Scheme::CdRis);
    CHECK_FALSE(out.bd.outage);
    CHECK(out.bd.sum_rate >= out.cd.sum_rate - 1e-12);
    CHECK(out.bd.sum_rate > 0.0);
    CHECK_THAT(out.bd.sum_rate, WithinAbs(out.bd.rate_near + out.bd.rate_far, 1e-15));
}

TEST_CASE("sweep shape and ordering", "[experiments][sweep]")
{
    const auto result = run_power_sweep(small_power_sweep());
    REQUIRE(result.rows.size() == 2 * 2 * 4);
    REQUIRE(result.aggregates.size() == 4);
    CHECK(result.axis == SweepAxis::Power);

    for (std::size_t i = 1; i < result.rows.size(); ++i)
    {
        const auto &a = result.rows[i - 1];
        const auto &b = result.rows[i];
        const auto key = [](const DetailRow &r) {
            return std::make_tuple(r.power_dbm, r.num_elements, to_string(r.scheme), r.trial);
        };
        CHECK(key(a) < key(b));
    }

    const auto &agg = result.aggregate(10.0, 6, Scheme::BdRis);
    CHECK(agg.num_trials == 4);
    CHECK(agg.outage_count == 0);
    double mean = 0.0;
    for (const auto &r : result.rows)
        if (r.power_dbm == 10.0 && r.scheme == Scheme::BdRis)
            mean += r.sum_rate / 4.0;
    CHECK_THAT(agg.mean_sum_rate, WithinAbs(mean, 1e-12));
    CHECK_THAT(agg.standard_error(), WithinAbs(agg.std_sum_rate / 2.0, 1e-15));
    CHECK_THROWS_AS(result.aggregate(5.0, 6, Scheme::BdRis), std::out_of_range);
}

TEST_CASE("sweep argument checks", "[experiments][sweep]")
{
    SweepSpec spec = small_power_sweep();
    spec.element_counts = {4, 8};
    CHECK_THROWS(run_power_sweep(spec));
    CHECK_NOTHROW(spec.validate());
    CHECK_THROWS(run_element_sweep(spec));

    spec = small_power_sweep();
    spec.trials = 0;
    CHECK_THROWS(run_power_sweep(spec));

    spec = small_power_sweep();
    spec.scenario.mode = Mode::Hybrid;
    CHECK_THROWS(run_power_sweep(spec));

    spec = small_power_sweep();
    spec.scenario.architecture = Architecture::GroupConnected;
    spec.scenario.group_count = 4;
    CHECK_THROWS_AS(run_power_sweep(spec), SpecError);
}

TEST_CASE("results do not depend on the thread count", "[experiments][determinism]")
{
    SweepSpec spec = small_power_sweep();
    spec.threads = 1;
    const auto one = run_power_sweep(spec);
    spec.threads = 3;
    const auto three = run_power_sweep(spec);
    REQUIRE(one.rows.size() == three.rows.size());
    for (std::size_t i = 0; i < one.rows.size(); ++i)
        CHECK(one.rows[i].sum_rate == three.rows[i].sum_rate);

    emit_csv(one, scratch("t1_detail.csv"), scratch("t1_agg.csv"));
    emit_csv(three, scratch("t3_detail.csv"), scratch("t3_agg.csv"));
    CHECK(slurp(scratch("t1_detail.csv")) == slurp(scratch("t3_detail.csv")));
    CHECK(slurp(scratch("t1_agg.csv")) == slurp(scratch("t3_agg.csv")));
}

TEST_CASE("CSV files round-trip", "[experiments][csv]")
{
    const auto result = run_power_sweep(small_power_sweep());
    emit_csv(result, scratch("detail.csv"), scratch("agg.csv"));

    const auto detail = lines_of(slurp(scratch("detail.csv")));
    REQUIRE(detail.size() == result.rows.size() + 1);
    CHECK(detail[0] == kDetailHeader);
    for (std::size_t i = 0; i < result.rows.size(); ++i)
    {
        const auto cells = split(detail[i + 1], ',');
        REQUIRE(cells.size() == 8);
        const auto &r = result.rows[i];
        CHECK(std::stod(cells[0]) == r.power_dbm);
        CHECK(std::stoi(cells[1]) == r.num_elements);
        CHECK(cells[2] == to_string(r.scheme));
        CHECK(std::stoi(cells[3]) == r.trial);
        CHECK_THAT(std::stod(cells[6]), WithinAbs(r.sum_rate, 5e-7));
        CHECK(cells[6].size() - cells[6].find('.') - 1 == 6);
        CHECK(cells[7] == "0");
    }

    const auto agg = lines_of(slurp(scratch("agg.csv")));
    REQUIRE(agg.size() == result.aggregates.size() + 1);
    CHECK(agg[0] == kAggregateHeader);
    const auto cells = split(agg[1], ',');
    REQUIRE(cells.size() == 7);
    CHECK(cells[0] == "0.000000");
    CHECK(cells[1] == "6");
    CHECK(cells[2] == "BD_RIS");
    CHECK(cells[5] == "4");
    CHECK(cells[6] == "0");
}

TEST_CASE("outage trials are counted and excluded", "[experiments][csv]")
{
    SweepSpec spec = small_power_sweep();
    spec.scenario.min_rate_far = 1e3;
    const auto result = run_power_sweep(spec);
    for (const auto &r : result.rows)
        CHECK(r.outage);
    const auto &a = result.aggregate(0.0, 6, Scheme::CdRis);
    CHECK(a.num_trials == 4);
    CHECK(a.outage_count == 4);
    CHECK(std::isnan(a.mean_sum_rate));

    emit_csv(result, scratch("outage_detail.csv"), scratch("outage_agg.csv"));
    const auto agg = lines_of(slurp(scratch("outage_agg.csv")));
    CHECK(agg[1] == "0.000000,6,BD_RIS,nan,nan,4,4");
    const auto detail = lines_of(slurp(scratch("outage_detail.csv")));
    CHECK(split(detail[1], ',').back() == "1");
}

TEST_CASE("plot script", "[experiments][plot]")
{
    const auto power = run_power_sweep(small_power_sweep());
    const fs::path csv = scratch("power_agg.csv");
    emit_aggregate_csv(power, csv);
    emit_plot_script(power, csv, scratch("a.gp"));
    emit_plot_script(power, csv, scratch("b.gp"));
    const std::string script = slurp(scratch("a.gp"));
    CHECK(script == slurp(scratch("b.gp")));
    CHECK_THAT(script, ContainsSubstring("'" + csv.string() + "'"));
    CHECK_THAT(script, ContainsSubstring("Transmit power (dBm)"));
    CHECK_THAT(script, ContainsSubstring("Spectral efficiency (bps/Hz)"));
    std::size_t clauses = 0;
    for (std::size_t pos = script.find(" with linespoints"); pos != std::string::npos;
         pos = script.find(" with linespoints", pos + 1))
        ++clauses;
    CHECK(clauses == 2);

    SweepSpec spec = small_power_sweep();
    spec.power_points_dbm = {10.0};
    spec.element_counts = {2, 4};
    spec.schemes = {Scheme::BdRis};
    const auto elements = run_element_sweep(spec);
    emit_plot_script(elements, csv, scratch("c.gp"));
    const std::string el = slurp(scratch("c.gp"));
    CHECK_THAT(el, ContainsSubstring("Number of PREs"));
    CHECK_THAT(el, ContainsSubstring("title 'BD_RIS'"));
    CHECK_THAT(el, !ContainsSubstring("CD_RIS"));
}

TEST_CASE("oracle check on a few instances", "[experiments][oracle]")
{
    const auto rep = run_oracle_check(4, 11);
    CHECK(rep.pair_instances == 4);
    CHECK(rep.single_instances == 4);
    CHECK(rep.passed());
}
