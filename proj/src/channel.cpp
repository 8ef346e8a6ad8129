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

#include "bdris/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "bdris/ris.hpp"

namespace bdris
{

void GeometryParams::validate() const
{
    if (!(altitude_km > 0.0))
        throw std::invalid_argument("altitude must be positive");
    if (!(elevation_deg > 0.0 && elevation_deg <= 90.0))
        throw std::invalid_argument("elevation angle must lie in (0, 90] degrees");
    if (!(earth_radius_km > 0.0))
        throw std::invalid_argument("earth radius must be positive");
    if (ris_satellite_distance_km && !(*ris_satellite_distance_km > 0.0))
        throw std::invalid_argument("RIS-satellite distance must be positive");
    if (!(ris_user_near_km > 0.0) || !(ris_user_far_km > 0.0))
        throw std::invalid_argument("RIS-user distances must be positive");
}

double GeometryParams::ris_user_distance_km(int user) const
{
    switch (user)
    {
    case 0:
        return ris_user_near_km;
    case 1:
        return ris_user_far_km;
    default:
        throw std::out_of_range("only two users are modeled, got user index " + std::to_string(user));
    }
}

void LinkBudgetParams::validate() const
{
    if (!(carrier_frequency_ghz > 0.0))
        throw std::invalid_argument("carrier frequency must be positive");
    if (!(path_loss_exponent >= 2.0))
        throw std::invalid_argument("path-loss exponent must be at least 2");
    if (!(reflection_magnitude > 0.0 && reflection_magnitude <= 1.0))
        throw std::invalid_argument("reflection magnitude must lie in (0, 1]");
    if (!(rician_k >= 0.0))
        throw std::invalid_argument("Rician factor must be non-negative");
    if (!std::isfinite(noise_power_dbm) || !std::isfinite(tx_antenna_gain_dbi) || !std::isfinite(rx_antenna_gain_dbi))
        throw std::invalid_argument("noise power and antenna gains must be finite");
}

double db_to_linear(double db)
{
    return std::pow(10.0, db / 10.0);
}

double dbm_to_mw(double dbm)
{
    return db_to_linear(dbm);
}

double slant_range_km(const GeometryParams &geom)
{
    const double re = geom.earth_radius_km;
    const double h = geom.altitude_km;
    if (geom.elevation_deg == 90.0)
        return h;
    const double s = std::sin(geom.elevation_deg * std::numbers::pi / 180.0);
    return std::sqrt(re * re * s * s + h * h + 2.0 * re * h) - re * s;
}

double satellite_ris_distance_km(const GeometryParams &geom)
{
    return geom.ris_satellite_distance_km ? *geom.ris_satellite_distance_km : slant_range_km(geom);
}

double satellite_user_distance_km(const GeometryParams &geom, int user)
{
    return satellite_ris_distance_km(geom) + geom.ris_user_distance_km(user);
}

double path_gain(double distance_km, const LinkBudgetParams &lb)
{
    if (!(distance_km > 0.0))
        throw std::invalid_argument("path_gain: distance must be positive");
    constexpr double d0 = 1.0; // m
    const double d = distance_km * 1e3;
    const double lambda = kSpeedOfLight / (lb.carrier_frequency_ghz * 1e9);
    const double fs = lambda / (4.0 * std::numbers::pi * d0);
    const double gains = db_to_linear(lb.tx_antenna_gain_dbi + lb.rx_antenna_gain_dbi);
    return gains * fs * fs * std::pow(d0 / d, lb.path_loss_exponent);
}

CVector rician_sample(double k_factor, Eigen::Index n, Rng &rng)
{
    if (!(k_factor >= 0.0))
        throw std::invalid_argument("Rician factor must be non-negative");
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);

    CVector out(n);
    if (std::isinf(k_factor))
    {
        out.setConstant(std::polar(1.0, phase(rng)));
        return out;
    }
    const cplx los = std::sqrt(k_factor / (k_factor + 1.0)) * std::polar(1.0, phase(rng));
    const double nlos = std::sqrt(1.0 / (k_factor + 1.0));
    for (Eigen::Index i = 0; i < n; ++i)
        out(i) = los + nlos * complex_normal(rng);
    return out;
}

ChannelRealization draw_realization(const GeometryParams &geom, const LinkBudgetParams &lb, int num_elements,
                                    int num_users, bool include_direct, const LinkStreams &streams)
{
    if (num_elements < 1)
        throw std::invalid_argument("draw_realization: need at least one element");
    if (num_users < 1 || num_users > 2)
        throw std::invalid_argument("draw_realization: one or two users supported");

    const auto id = [](Link base, int u) { return static_cast<std::uint64_t>(base) + static_cast<std::uint64_t>(u); };

    ChannelRealization ch;
    ch.noise_power_mw = dbm_to_mw(lb.noise_power_dbm);
    ch.h_sat_ris = std::sqrt(path_gain(satellite_ris_distance_km(geom), lb)) *
                   rician_sample(lb.rician_k, num_elements, streams(id(Link::SatelliteRis, 0)));

    for (int u = 0; u < num_users; ++u)
    {
        const double amp = lb.reflection_magnitude * std::sqrt(path_gain(geom.ris_user_distance_km(u), lb));
        ch.g_ris_user.push_back(amp * rician_sample(lb.rician_k, num_elements, streams(id(Link::RisUser, u))));
    }
    // Direct links are drawn after the cascaded links so that toggling them
    // leaves the RIS channels of a shared stream unchanged.
    for (int u = 0; u < num_users; ++u)
    {
        if (include_direct)
        {
            const double amp = std::sqrt(path_gain(satellite_user_distance_km(geom, u), lb));
            ch.h_direct.push_back(amp * rician_sample(lb.rician_k, 1, streams(id(Link::Direct, u)))(0));
        }
        else
        {
            ch.h_direct.emplace_back(0.0, 0.0);
        }
    }
    return ch;
}

ChannelRealization draw_realization(const GeometryParams &geom, const LinkBudgetParams &lb, int num_elements,
                                    int num_users, bool include_direct, Rng &rng)
{
    return draw_realization(geom, lb, num_elements, num_users, include_direct,
                            [&rng](std::uint64_t) -> Rng & { return rng; });
}

ChannelRealization draw_unit_realization(int num_elements, const std::vector<double> &user_scale, double rician_k,
                                         bool include_direct, Rng &rng)
{
    if (num_elements < 1 || user_scale.empty())
        throw std::invalid_argument("draw_unit_realization: need elements and users");
    ChannelRealization ch;
    ch.noise_power_mw = 1.0;
    ch.h_sat_ris = rician_sample(rician_k, num_elements, rng);
    for (double s : user_scale)
        ch.g_ris_user.push_back(s * rician_sample(rician_k, num_elements, rng));
    for (double s : user_scale)
        ch.h_direct.push_back(include_direct ? s * complex_normal(rng) : cplx{});
    return ch;
}

cplx effective_channel(const ChannelRealization &ch, const CMatrix &phi, int user)
{
    const auto k = ch.h_sat_ris.size();
    if (phi.rows() != k || phi.cols() != k)
        throw DimensionError("effective_channel: phase matrix is " + std::to_string(phi.rows()) + "x" +
                             std::to_string(phi.cols()) + ", channel has " + std::to_string(k) + " elements");
    const CVector &g = ch.g_ris_user.at(static_cast<std::size_t>(user));
    return ch.h_direct.at(static_cast<std::size_t>(user)) + g.dot(phi * ch.h_sat_ris);
}

} // namespace bdris
