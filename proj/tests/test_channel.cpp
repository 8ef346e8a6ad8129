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

#include "bdris/channel.hpp"
#include "bdris/ris.hpp"

using namespace bdris;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("slant range", "[channel][geometry]")
{
    GeometryParams g;
    g.ris_satellite_distance_km.reset();
    CHECK_THAT(slant_range_km(g), WithinAbs(814.799055141736, 1e-9));
    CHECK(satellite_ris_distance_km(g) == slant_range_km(g));

    g.elevation_deg = 90.0;
    CHECK(slant_range_km(g) == 600.0);
    g.altitude_km = 1234.5;
    CHECK(slant_range_km(g) == 1234.5);
}

TEST_CASE("satellite-RIS override", "[channel][geometry]")
{
    GeometryParams g;
    CHECK(satellite_ris_distance_km(g) == 500.0);
    g.elevation_deg = 30.0;
    CHECK(satellite_ris_distance_km(g) == 500.0);
    CHECK(satellite_user_distance_km(g, 0) == 502.0);
    CHECK(satellite_user_distance_km(g, 1) == 503.0);
    CHECK_THROWS_AS(g.ris_user_distance_km(2), std::out_of_range);
}

TEST_CASE("geometry validation", "[channel][geometry]")
{
    GeometryParams g;
    CHECK_NOTHROW(g.validate());
    g.elevation_deg = 0.0;
    CHECK_THROWS(g.validate());
    g = {};
    g.elevation_deg = 90.5;
    CHECK_THROWS(g.validate());
    g = {};
    g.ris_satellite_distance_km = -1.0;
    CHECK_THROWS(g.validate());

    LinkBudgetParams lb;
    CHECK_NOTHROW(lb.validate());
    lb.path_loss_exponent = 1.9;
    CHECK_THROWS(lb.validate());
    lb = {};
    lb.reflection_magnitude = 1.01;
    CHECK_THROWS(lb.validate());
}

TEST_CASE("unit conversions", "[channel]")
{
    CHECK_THAT(dbm_to_mw(-90.0), WithinRel(1e-9, 1e-15));
    CHECK_THAT(dbm_to_mw(20.0), WithinRel(100.0, 1e-15));
    CHECK_THAT(db_to_linear(20.0), WithinRel(100.0, 1e-15));
}

TEST_CASE("path gain", "[channel][pathloss]")
{
    LinkBudgetParams lb;
    lb.path_loss_exponent = 2.0;
    lb.tx_antenna_gain_dbi = 0.0;
    lb.rx_antenna_gain_dbi = 0.0;
    CHECK_THAT(path_gain(1e-3, lb), WithinRel(4.64606829154567e-5, 1e-12));

    lb.path_loss_exponent = 2.5;
    CHECK_THAT(path_gain(2.0, lb) / path_gain(1.0, lb), WithinRel(0.176776695296637, 1e-12));

    LinkBudgetParams gained = lb;
    gained.tx_antenna_gain_dbi = 10.0;
    gained.rx_antenna_gain_dbi = 10.0;
    CHECK_THAT(path_gain(7.0, gained) / path_gain(7.0, lb), WithinRel(100.0, 1e-12));

    // Defaults at the satellite-user distance of the near user.
    CHECK_THAT(path_gain(502.0, LinkBudgetParams{}), WithinRel(2.60211386179609e-17, 1e-12));

    CHECK(path_gain(10.0, lb) < path_gain(5.0, lb));
    LinkBudgetParams steeper = lb;
    steeper.path_loss_exponent = 3.0;
    CHECK(path_gain(10.0, steeper) < path_gain(10.0, lb));
    CHECK_THROWS(path_gain(0.0, lb));
}

TEST_CASE("Rician samples", "[channel][fading]")
{
    Rng rng = make_stream(3);
    const CVector los = rician_sample(std::numeric_limits<double>::infinity(), 16, rng);
    for (int i = 0; i < 16; ++i)
        CHECK_THAT(std::abs(los(i)), WithinAbs(1.0, 1e-15));

    for (double k : {0.0, 1.0, 10.0})
    {
        constexpr int n = 100000;
        // Many short calls so that the per-call LoS phase is averaged too.
        double sum = 0.0;
        double sum_sq = 0.0;
        for (int i = 0; i < n / 10; ++i)
        {
            const CVector x = rician_sample(k, 10, rng);
            for (int j = 0; j < 10; ++j)
            {
                const double p = std::norm(x(j));
                sum += p;
                sum_sq += p * p;
            }
        }
        const double mean = sum / n;
        const double se = std::sqrt((sum_sq / n - mean * mean) / n);
        INFO("K = " << k << " mean " << mean << " se " << se);
        CHECK(std::abs(mean - 1.0) < 3.0 * se);
        CHECK(std::abs(mean - 1.0) < 0.02);
    }
    CHECK_THROWS(rician_sample(-1.0, 4, rng));
}

TEST_CASE("realization structure", "[channel][draw]")
{
    const GeometryParams g;
    const LinkBudgetParams lb;

    Rng a = make_stream(9);
    Rng b = make_stream(9);
    const auto x = draw_realization(g, lb, 6, 2, true, a);
    const auto y = draw_realization(g, lb, 6, 2, true, b);
    CHECK(x.num_elements() == 6);
    CHECK(x.num_users() == 2);
    CHECK(x.h_sat_ris == y.h_sat_ris);
    CHECK(x.g_ris_user[1] == y.g_ris_user[1]);
    CHECK(x.h_direct == y.h_direct);
    CHECK_THAT(x.noise_power_mw, WithinRel(1e-9, 1e-15));

    Rng c = make_stream(9);
    const auto blocked = draw_realization(g, lb, 6, 2, false, c);
    CHECK(blocked.h_direct[0] == cplx{});
    CHECK(blocked.h_direct[1] == cplx{});
    CHECK(blocked.g_ris_user[0] == x.g_ris_user[0]);

    LinkBudgetParams lossless = lb;
    lossless.reflection_magnitude = 1.0;
    Rng d = make_stream(9);
    const auto full = draw_realization(g, lossless, 6, 2, true, d);
    CHECK(max_abs(full.g_ris_user[0] * 0.9 - x.g_ris_user[0]) <= 1e-15 * max_abs(full.g_ris_user[0]));
    CHECK(full.h_sat_ris == x.h_sat_ris);

    CHECK_THROWS(draw_realization(g, lb, 0, 2, true, a));
    CHECK_THROWS(draw_realization(g, lb, 4, 3, true, a));
}

TEST_CASE("effective channel", "[channel][effective]")
{
    Rng rng = make_stream(21);
    const auto ch = draw_unit_realization(4, {1.0, 0.5}, 1.0, true, rng);

    CHECK(effective_channel(ch, CMatrix::Zero(4, 4), 1) == ch.h_direct[1]);

    const CMatrix u = haar_unitary(4, rng);
    for (int user = 0; user < 2; ++user)
    {
        cplx expected = ch.h_direct[user];
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                expected += std::conj(ch.g_ris_user[user](i)) * u(i, j) * ch.h_sat_ris(j);
        CHECK(std::abs(effective_channel(ch, u, user) - expected) < 1e-14);
    }
    CHECK_THROWS_AS(effective_channel(ch, CMatrix::Identity(3, 3), 0), DimensionError);
}

TEST_CASE("single-element phase alignment reaches the coherent bound", "[channel][effective]")
{
    ChannelRealization ch;
    ch.h_direct = {cplx(1.0, 1.0)};
    ch.h_sat_ris = CVector::Constant(1, cplx(2.0, 0.0));
    ch.g_ris_user = {CVector::Constant(1, cplx(0.0, 0.5))};

    // |g^H phi h| is maximized in phase with h_d when phi = e^{j(arg h_d - arg(conj(g) h))}.
    const double theta = std::arg(ch.h_direct[0]) - std::arg(std::conj(ch.g_ris_user[0](0)) * ch.h_sat_ris(0));
    CMatrix phi(1, 1);
    phi(0, 0) = std::polar(1.0, theta);
    CHECK_THAT(std::abs(effective_channel(ch, phi, 0)), WithinAbs(2.41421356237310, 1e-14));
}
