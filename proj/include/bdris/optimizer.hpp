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

#ifndef BDRIS_OPTIMIZER_HPP
#define BDRIS_OPTIMIZER_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bdris/channel.hpp"
#include "bdris/noma.hpp"
#include "bdris/ris.hpp"

namespace bdris
{

enum class Scheme
{
    BdRis, ///< the configured architecture
    CdRis  ///< conventional diagonal unit-modulus surface
};

std::string to_string(Scheme s);

/// No power split satisfies the minimum-rate constraints for this realization.
class InfeasibleError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

struct ProblemSpec
{
    RisSpec ris;
    double power_budget_dbm = 20.0;
    double min_rate_near = 0.0;
    double min_rate_far = 0.0;
    Scheme scheme = Scheme::BdRis;

    /// Constraint set the phase response is optimized over: the configured
    /// architecture for BD-RIS, single-connected reflective for CD-RIS.
    RisSpec feasible_set() const;
};

struct WarmStart
{
    enum class Kind
    {
        Identity,
        CdSolution,
        Random
    };
    Kind kind = Kind::Identity;
    std::uint64_t seed = 0;

    static WarmStart identity() { return {Kind::Identity, 0}; }
    static WarmStart cd_solution() { return {Kind::CdSolution, 0}; }
    static WarmStart random(std::uint64_t seed) { return {Kind::Random, seed}; }
};

struct BcdSettings
{
    int max_outer_iters = 50;
    double rate_tolerance = 1e-4; // bps/Hz
    double phase_step_size = 1.0;
    int phase_inner_iters = 100;
    int max_step_halvings = 30;
    WarmStart warm_start = WarmStart::identity();
    /// Also run from user_aligned_phase for every user and keep the best
    /// outcome. The landscape has one basin per user, and plain ascent stays
    /// in the basin of whichever user is strong at the start.
    bool user_aligned_restarts = true;

    void validate() const;
};

struct Solution
{
    NomaAllocation allocation;
    PhaseResponse phase;
    RateResult rates;
    std::vector<double> trace; ///< sum rate after each outer iteration
    bool converged = false;
};

/// Rates of a fixed (phase, allocation) pair. Users are re-ordered by their
/// effective gains, so the allocation is tied to roles rather than indices.
/// With a single user, that user takes the far role.
RateResult evaluate_rates(const ChannelRealization &ch, const PhaseResponse &pr, const NomaAllocation &alloc);

/// Closed-form power split for a given phase response: the far user gets the
/// smallest share meeting its minimum rate, but never less than half.
/// Throws InfeasibleError when no split meets both minimum rates.
NomaAllocation solve_power_subproblem(const ChannelRealization &ch, const PhaseResponse &pr,
                                      const ProblemSpec &problem);

/// Projected gradient ascent on the phase response for a fixed allocation,
/// starting from `start` (which must be feasible for problem.feasible_set()).
/// Only iterates that raise the true sum rate and keep the minimum rates are
/// accepted, so the result is never worse than `start`.
PhaseResponse solve_phase_subproblem(const ChannelRealization &ch, const NomaAllocation &alloc,
                                     const ProblemSpec &problem, const BcdSettings &settings,
                                     const PhaseResponse &start);

/// Per block b, the polar factor of e^{j arg h_d,u} g_u,b h_bᴴ: co-phases the
/// cascaded path of `user` with its direct link, which maximizes that user's
/// gain for reflective and transmissive surfaces.
PhaseResponse user_aligned_phase(const ChannelRealization &ch, const RisSpec &set, int user);

/// Alternates the power and phase subproblems from settings.warm_start.
Solution bcd_solve(const ChannelRealization &ch, const ProblemSpec &problem, const BcdSettings &settings);

/// Same, from an explicit feasible starting phase response (plus the
/// user-aligned restarts when enabled).
Solution bcd_solve(const ChannelRealization &ch, const ProblemSpec &problem, const BcdSettings &settings,
                   const PhaseResponse &start);

/// Exhaustive reference solver for tiny instances. Diagonal feasible sets
/// (K <= 3) are gridded with `resolution` phases per element; the 2x2 unitary
/// group is sampled through U = e^{ja} [[e^{jp} cos t, e^{jc} sin t], [-e^{-jc} sin t, e^{-jp} cos t]]
/// with `resolution` points for a, p, c and resolution + 1 for t in [0, pi/2].
/// The far-user share is gridded over [0.5, 1] in steps of 1e-3.
Solution brute_force_oracle(const ChannelRealization &ch, const ProblemSpec &problem, int resolution);

} // namespace bdris

#endif
