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

#ifndef BDRIS_NOMA_HPP
#define BDRIS_NOMA_HPP

#include <span>
#include <vector>

#include "bdris/linalg.hpp"

namespace bdris
{

/// Superposition-coding power split. The near (strong) user decodes and cancels
/// the far user's signal; the far user treats the near signal as noise.
struct NomaAllocation
{
    double total_power_mw = 0.0;
    double alpha_near = 0.5;
    double alpha_far = 0.5;

    /// Throws std::invalid_argument if the split is not a valid NOMA ordering.
    void validate() const;
};

struct RateResult
{
    double rate_near = 0.0; // bps/Hz
    double rate_far = 0.0;  // bps/Hz
    double sum_rate = 0.0;  // bps/Hz
    std::vector<int> sic_order; ///< user indices, strong first
};

struct UserOrder
{
    int strong = 0;
    int weak = 1;
};

/// Strong user is the argmax of |h|^2; ties go to the lower index.
UserOrder order_users(std::span<const cplx> h_effs);

/// Rates for channel gains |h_strong|^2, |h_weak|^2. Bandwidth is normalized to 1 Hz.
RateResult achievable_rates_from_gains(const NomaAllocation &alloc, double gain_strong, double gain_weak,
                                       double noise_mw);

RateResult achievable_rates(const NomaAllocation &alloc, cplx h_strong, cplx h_weak, double noise_mw);

/// Smallest far-user share meeting `min_rate_far`:
/// (2^r - 1)(p g + n) / (p g 2^r). May exceed 1; the caller decides feasibility.
double min_power_split_for_far_rate(double min_rate_far, double total_power_mw, double gain_weak, double noise_mw);

/// d rate / d gain for each role, evaluated at the given gains.
struct RateSensitivity
{
    double strong = 0.0;
    double weak = 0.0;
};

RateSensitivity rate_sensitivities(const NomaAllocation &alloc, double gain_strong, double gain_weak,
                                   double noise_mw);

} // namespace bdris

#endif
