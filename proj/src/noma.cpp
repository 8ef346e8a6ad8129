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

#include "bdris/noma.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bdris
{

void NomaAllocation::validate() const
{
    if (!(total_power_mw >= 0.0) || !std::isfinite(total_power_mw))
        throw std::invalid_argument("total power must be finite and non-negative");
    if (!(alpha_near >= 0.0 && alpha_near <= 1.0 && alpha_far >= 0.0 && alpha_far <= 1.0))
        throw std::invalid_argument("power fractions must lie in [0, 1]");
    if (alpha_near + alpha_far > 1.0 + 1e-12)
        throw std::invalid_argument("power fractions exceed the budget");
    if (alpha_far < alpha_near)
        throw std::invalid_argument("far user must receive at least the near user's share");
}

UserOrder order_users(std::span<const cplx> h_effs)
{
    if (h_effs.size() != 2)
        throw std::invalid_argument("order_users: exactly two users expected");
    const double g0 = std::norm(h_effs[0]);
    const double g1 = std::norm(h_effs[1]);
    return g1 > g0 ? UserOrder{1, 0} : UserOrder{0, 1};
}

RateResult achievable_rates_from_gains(const NomaAllocation &alloc, double gain_strong, double gain_weak,
                                       double noise_mw)
{
    if (!(noise_mw > 0.0))
        throw std::invalid_argument("noise power must be positive");
    const double p = alloc.total_power_mw;
    RateResult r;
    r.rate_far = std::log1p(p * alloc.alpha_far * gain_weak / (p * alloc.alpha_near * gain_weak + noise_mw)) /
                 std::numbers::ln2;
    r.rate_near = std::log1p(p * alloc.alpha_near * gain_strong / noise_mw) / std::numbers::ln2;
    r.sum_rate = r.rate_near + r.rate_far;
    return r;
}

RateResult achievable_rates(const NomaAllocation &alloc, cplx h_strong, cplx h_weak, double noise_mw)
{
    return achievable_rates_from_gains(alloc, std::norm(h_strong), std::norm(h_weak), noise_mw);
}

double min_power_split_for_far_rate(double min_rate_far, double total_power_mw, double gain_weak, double noise_mw)
{
    if (!(total_power_mw > 0.0))
        throw std::invalid_argument("min_power_split_for_far_rate: power must be positive");
    if (min_rate_far <= 0.0)
        return 0.0;
    const double t = std::exp2(min_rate_far);
    const double pg = total_power_mw * gain_weak;
    return (t - 1.0) * (pg + noise_mw) / (pg * t);
}

RateSensitivity rate_sensitivities(const NomaAllocation &alloc, double gain_strong, double gain_weak,
                                   double noise_mw)
{
    const double p = alloc.total_power_mw;
    RateSensitivity s;
    s.strong = p * alloc.alpha_near / (noise_mw + p * alloc.alpha_near * gain_strong) / std::numbers::ln2;
    // rate_far = log2(p g + n) - log2(p a_near g + n) when a_near + a_far = 1.
    const double total = alloc.alpha_near + alloc.alpha_far;
    s.weak = (p * total / (p * total * gain_weak + noise_mw) -
              p * alloc.alpha_near / (p * alloc.alpha_near * gain_weak + noise_mw)) /
             std::numbers::ln2;
    return s;
}

} // namespace bdris
