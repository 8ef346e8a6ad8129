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

#ifndef BDRIS_CHANNEL_HPP
#define BDRIS_CHANNEL_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "bdris/linalg.hpp"

namespace bdris
{

inline constexpr double kSpeedOfLight = 299792458.0; // m/s

struct GeometryParams
{
    double altitude_km = 600.0;
    double elevation_deg = 45.0;
    double earth_radius_km = 6371.0;
    /// When set, replaces the slant range as the satellite-RIS distance.
    std::optional<double> ris_satellite_distance_km = 500.0;
    /// RIS-user distances; user 0 is the near user, user 1 the far user.
    double ris_user_near_km = 2.0;
    double ris_user_far_km = 3.0;

    void validate() const;
    double ris_user_distance_km(int user) const;
};

struct LinkBudgetParams
{
    double carrier_frequency_ghz = 3.5;
    double path_loss_exponent = 2.5;
    double tx_antenna_gain_dbi = 10.0;
    double rx_antenna_gain_dbi = 10.0;
    double reflection_magnitude = 0.9;
    double noise_power_dbm = -90.0;
    double rician_k = 10.0;
    /// Element edge length. Carried for completeness; the path-loss model has no element gain.
    double element_size_m = 0.5;

    void validate() const;
};

/// One Monte Carlo draw of every link.
struct ChannelRealization
{
    std::vector<cplx> h_direct;        ///< satellite -> user u
    CVector h_sat_ris;                 ///< satellite -> RIS elements
    std::vector<CVector> g_ris_user;   ///< RIS elements -> user u
    double noise_power_mw = 1.0;

    int num_users() const { return static_cast<int>(g_ris_user.size()); }
    int num_elements() const { return static_cast<int>(h_sat_ris.size()); }
};

double dbm_to_mw(double dbm);
double db_to_linear(double db);

/// Spherical-Earth slant range from altitude and elevation angle, in km.
/// Ignores the RIS distance override.
double slant_range_km(const GeometryParams &geom);

/// Satellite-RIS distance: the override when present, else the slant range.
double satellite_ris_distance_km(const GeometryParams &geom);

/// Satellite-user distance: satellite-RIS distance plus the RIS-user distance.
double satellite_user_distance_km(const GeometryParams &geom, int user);

/// Linear power gain G_t G_r (lambda / 4 pi d0)^2 (d0 / d)^eta with d0 = 1 m.
double path_gain(double distance_km, const LinkBudgetParams &lb);

/// n Rician entries with unit mean power. The LoS phase is drawn once per call.
CVector rician_sample(double k_factor, Eigen::Index n, Rng &rng);

ChannelRealization draw_realization(const GeometryParams &geom, const LinkBudgetParams &lb, int num_elements,
                                    int num_users, bool include_direct, Rng &rng);

/// Link identifiers passed to a LinkStreams callback.
enum class Link : std::uint64_t
{
    SatelliteRis = 0,
    RisUser = 1,  ///< + user index
    Direct = 16   ///< + user index
};

/// Returns the engine to draw link `id` from. Each link's entries are drawn
/// in element order, so with independent per-link engines the realization
/// for K elements is a prefix of the one for any larger K.
using LinkStreams = std::function<Rng &(std::uint64_t id)>;

ChannelRealization draw_realization(const GeometryParams &geom, const LinkBudgetParams &lb, int num_elements,
                                    int num_users, bool include_direct, const LinkStreams &streams);

/// Unit-scale realization (path gains 1, user u scaled by `user_scale[u]`, noise 1 mW).
/// Used by the optimizer oracle checks where the link budget would hide the RIS path.
ChannelRealization draw_unit_realization(int num_elements, const std::vector<double> &user_scale, double rician_k,
                                         bool include_direct, Rng &rng);

/// h_direct[u] + g_u^H Phi h.
cplx effective_channel(const ChannelRealization &ch, const CMatrix &phi, int user);

} // namespace bdris

#endif
