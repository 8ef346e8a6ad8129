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

#include "bdris/optimizer.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

namespace bdris
{

std::string to_string(Scheme s)
{
    return s == Scheme::BdRis ? "BD_RIS" : "CD_RIS";
}

RisSpec ProblemSpec::feasible_set() const
{
    if (scheme == Scheme::CdRis)
        return RisSpec::single_connected(ris.num_elements(), Mode::Reflective);
    return ris;
}

void BcdSettings::validate() const
{
    if (max_outer_iters < 1 || phase_inner_iters < 1 || max_step_halvings < 0)
        throw std::invalid_argument("BCD iteration counts must be positive");
    if (!(rate_tolerance > 0.0) || !(phase_step_size > 0.0))
        throw std::invalid_argument("BCD tolerance and step size must be positive");
}

namespace
{

constexpr double kRateSlack = 1e-9;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_problem(const ChannelRealization &ch, const ProblemSpec &problem)
{
    const Mode mode = problem.ris.mode();
    if (mode != Mode::Reflective && mode != Mode::Transmissive)
        throw std::invalid_argument("optimizer supports single-matrix (reflective/transmissive) surfaces, got " +
                                    problem.ris.describe());
    const int k = problem.ris.num_elements();
    if (ch.num_elements() != k)
        throw DimensionError("channel has " + std::to_string(ch.num_elements()) + " elements, problem expects " +
                             std::to_string(k));
    const int users = ch.num_users();
    if (users < 1 || users > 2 || static_cast<int>(ch.h_direct.size()) != users)
        throw std::invalid_argument("optimizer handles one or two users with matching direct links");
    for (const auto &g : ch.g_ris_user)
        if (g.size() != k)
            throw DimensionError("RIS-user channel length does not match K");
    if (!std::isfinite(problem.power_budget_dbm))
        throw std::invalid_argument("power budget must be finite");
    if (!(problem.min_rate_near >= 0.0) || !(problem.min_rate_far >= 0.0))
        throw std::invalid_argument("minimum rates must be non-negative");
}

void check_start(const PhaseResponse &start, const ProblemSpec &problem)
{
    const auto report = validate(start, problem.feasible_set());
    if (!report.is_feasible)
        throw std::invalid_argument("starting phase response violates '" + report.violated_constraint + "' by " +
                                    std::to_string(report.max_violation));
}

CVector apply_blocks(const CMatrix &phi, const CVector &x, int bs)
{
    CVector y(x.size());
    for (Eigen::Index off = 0; off < x.size(); off += bs)
        y.segment(off, bs).noalias() = phi.block(off, off, bs, bs) * x.segment(off, bs);
    return y;
}

CVector apply_adjoint_blocks(const CMatrix &phi, const CVector &x, int bs)
{
    CVector y(x.size());
    for (Eigen::Index off = 0; off < x.size(); off += bs)
        y.segment(off, bs).noalias() = phi.block(off, off, bs, bs).adjoint() * x.segment(off, bs);
    return y;
}

std::vector<cplx> effective_channels(const ChannelRealization &ch, const CVector &reflected)
{
    std::vector<cplx> z(ch.h_direct);
    for (std::size_t u = 0; u < z.size(); ++u)
        z[u] += ch.g_ris_user[u].dot(reflected);
    return z;
}

RateResult rates_for(const std::vector<cplx> &z, const NomaAllocation &alloc, double noise)
{
    if (z.size() == 1)
    {
        RateResult r = achievable_rates(alloc, cplx{}, z[0], noise);
        r.sic_order = {0};
        return r;
    }
    const UserOrder ord = order_users(z);
    RateResult r = achievable_rates(alloc, z[ord.strong], z[ord.weak], noise);
    r.sic_order = {ord.strong, ord.weak};
    return r;
}

bool meets_min_rates(const RateResult &r, const ProblemSpec &problem, int users)
{
    if (r.rate_far < problem.min_rate_far - kRateSlack)
        return false;
    return users == 1 || r.rate_near >= problem.min_rate_near - kRateSlack;
}

// Polar factor of a small square matrix.
Eigen::Matrix2cd polar2(const Eigen::Matrix2cd &c)
{
    Eigen::JacobiSVD<Eigen::Matrix2cd> svd(c, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

cplx unit_phase(cplx c)
{
    const double m = std::abs(c);
    return m > 0.0 ? c / m : cplx{1.0, 0.0};
}

// Restriction of one gradient step to a diagonal block.
//
// The ascent direction on block g is q_g h_g^H, so with a = Phi_g^H q_g the step
// is Phi_g (I + mu a h_g^H). That matrix is the identity outside span{h_g, a};
// its polar factor is Phi_g (I + Q (polar(C) - I) Q^H) with Q an orthonormal
// basis of the span and C = I + mu (Q^H a)(Q^H h_g)^H, at most 2x2.
struct BlockStep
{
    bool active = false;
    int rank = 1;
    double h_norm = 0.0;
    CVector e1, e2;   // Q
    CVector pe1, pe2; // Phi_g Q
    cplx ca1, ca2;    // Q^H a

    // Polar factor of C for step length mu, padded to 2x2.
    Eigen::Matrix2cd polar_factor(double mu) const
    {
        Eigen::Matrix2cd p = Eigen::Matrix2cd::Identity();
        if (rank == 1)
        {
            p(0, 0) = unit_phase(1.0 + mu * ca1 * h_norm);
            return p;
        }
        Eigen::Matrix2cd c = Eigen::Matrix2cd::Identity();
        c(0, 0) += mu * ca1 * h_norm;
        c(1, 0) = mu * ca2 * h_norm;
        return polar2(c);
    }

    // Phi_g h_g after the step; Q^H h_g = (|h_g|, 0).
    CVector stepped_reflection(const Eigen::Matrix2cd &p) const
    {
        CVector out = h_norm * (p(0, 0) - 1.0) * pe1;
        if (rank == 2)
            out += h_norm * p(1, 0) * pe2;
        return out;
    }

    void apply(Eigen::Ref<CMatrix> block, const Eigen::Matrix2cd &p) const
    {
        const Eigen::Matrix2cd d = p - Eigen::Matrix2cd::Identity();
        if (rank == 1)
        {
            block.noalias() += d(0, 0) * pe1 * e1.adjoint();
            return;
        }
        CMatrix left(pe1.size(), 2);
        left << pe1, pe2;
        CMatrix right(e1.size(), 2);
        right << e1, e2;
        block.noalias() += left * d * right.adjoint();
    }
};

} // namespace

RateResult evaluate_rates(const ChannelRealization &ch, const PhaseResponse &pr, const NomaAllocation &alloc)
{
    if (pr.size() != 1)
        throw DimensionError("rate evaluation needs a single phase-response matrix");
    std::vector<cplx> z(ch.h_direct.size());
    for (std::size_t u = 0; u < z.size(); ++u)
        z[u] = effective_channel(ch, pr.matrix(), static_cast<int>(u));
    return rates_for(z, alloc, ch.noise_power_mw);
}

NomaAllocation solve_power_subproblem(const ChannelRealization &ch, const PhaseResponse &pr,
                                      const ProblemSpec &problem)
{
    check_problem(ch, problem);
    const double p = dbm_to_mw(problem.power_budget_dbm);
    const double noise = ch.noise_power_mw;

    if (ch.num_users() == 1)
    {
        const NomaAllocation alloc{p, 0.0, 1.0};
        const RateResult r = evaluate_rates(ch, pr, alloc);
        if (!meets_min_rates(r, problem, 1))
            throw InfeasibleError("single user cannot reach its minimum rate");
        return alloc;
    }

    std::vector<cplx> z(2);
    for (int u = 0; u < 2; ++u)
        z[u] = effective_channel(ch, pr.matrix(), u);
    const UserOrder ord = order_users(z);
    const double gain_strong = std::norm(z[ord.strong]);
    const double gain_weak = std::norm(z[ord.weak]);

    double needed = problem.min_rate_far > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    if (gain_weak > 0.0)
        needed = min_power_split_for_far_rate(problem.min_rate_far, p, gain_weak, noise);
    if (!(needed <= 1.0 + 1e-12))
        throw InfeasibleError("far user needs a power share of " + std::to_string(needed));

    const double alpha_far = std::min(1.0, std::max(needed, 0.5));
    const NomaAllocation alloc{p, 1.0 - alpha_far, alpha_far};
    const RateResult r = achievable_rates_from_gains(alloc, gain_strong, gain_weak, noise);
    if (!meets_min_rates(r, problem, 2))
        throw InfeasibleError("near user rate " + std::to_string(r.rate_near) + " below minimum " +
                              std::to_string(problem.min_rate_near));
    return alloc;
}

PhaseResponse solve_phase_subproblem(const ChannelRealization &ch, const NomaAllocation &alloc,
                                     const ProblemSpec &problem, const BcdSettings &settings,
                                     const PhaseResponse &start)
{
    check_problem(ch, problem);
    settings.validate();
    check_start(start, problem);

    const RisSpec set = problem.feasible_set();
    const int k = set.num_elements();
    const int bs = set.block_size();
    const int blocks = set.group_count();
    const int users = ch.num_users();
    const double noise = ch.noise_power_mw;
    const CVector &h = ch.h_sat_ris;

    auto objective = [&](const std::vector<cplx> &z) {
        const RateResult r = rates_for(z, alloc, noise);
        return meets_min_rates(r, problem, users) ? r.sum_rate : kNegInf;
    };

    CMatrix phi = start.matrix();
    CVector v = apply_blocks(phi, h, bs);
    std::vector<cplx> z = effective_channels(ch, v);
    double best = objective(z);

    std::vector<BlockStep> steps(blocks);
    std::vector<Eigen::Matrix2cd> polars(blocks);

    for (int it = 0; it < settings.phase_inner_iters; ++it)
    {
        // Rate sensitivities at the current point; on an exact gain tie the far
        // user is served first.
        std::vector<double> w(users, 0.0);
        if (users == 1)
        {
            w[0] = rate_sensitivities(alloc, 0.0, std::norm(z[0]), noise).weak;
        }
        else
        {
            const UserOrder ord = order_users(z);
            const double gs = std::norm(z[ord.strong]);
            const double gw = std::norm(z[ord.weak]);
            const RateSensitivity s = rate_sensitivities(alloc, gs, gw, noise);
            w[ord.weak] = s.weak;
            w[ord.strong] = gs == gw ? 0.0 : s.strong;
        }

        CVector q = CVector::Zero(k);
        for (int u = 0; u < users; ++u)
            q += (w[u] * z[u]) * ch.g_ris_user[u];
        const CVector a = apply_adjoint_blocks(phi, q, bs);

        double dir_norm2 = 0.0;
        for (int g = 0; g < blocks; ++g)
            dir_norm2 += q.segment(g * bs, bs).squaredNorm() * h.segment(g * bs, bs).squaredNorm();
        if (!(dir_norm2 > 0.0) || !std::isfinite(dir_norm2))
            break;
        // Unit step moves by ||Phi||_F = sqrt(K).
        const double scale = std::sqrt(static_cast<double>(k) / dir_norm2);

        for (int g = 0; g < blocks; ++g)
        {
            BlockStep &st = steps[g];
            const auto hg = h.segment(g * bs, bs);
            st.h_norm = hg.norm();
            st.active = st.h_norm > 0.0;
            if (!st.active)
                continue;
            const auto ag = a.segment(g * bs, bs);
            st.e1 = hg / st.h_norm;
            st.pe1 = v.segment(g * bs, bs) / st.h_norm;
            st.ca1 = st.e1.dot(ag);
            const CVector perp = ag - st.ca1 * st.e1;
            const double perp_norm = perp.norm();
            st.rank = perp_norm > 1e-13 * ag.norm() && perp_norm > 0.0 ? 2 : 1;
            if (st.rank == 2)
            {
                st.e2 = perp / perp_norm;
                st.pe2 = (q.segment(g * bs, bs) - st.ca1 * st.pe1) / perp_norm;
                st.ca2 = perp_norm;
            }
        }

        bool accepted = false;
        const double previous = best;
        double mu = settings.phase_step_size;
        for (int halving = 0; halving <= settings.max_step_halvings && !accepted; ++halving, mu *= 0.5)
        {
            const double step = mu * scale;
            CVector vc = v;
            for (int g = 0; g < blocks; ++g)
            {
                if (!steps[g].active)
                    continue;
                polars[g] = steps[g].polar_factor(step);
                vc.segment(g * bs, bs) += steps[g].stepped_reflection(polars[g]);
            }
            if (!(objective(effective_channels(ch, vc)) > best))
                continue;

            // Confirm on the materialized matrix so the reported value is exact.
            CMatrix trial = phi;
            for (int g = 0; g < blocks; ++g)
                if (steps[g].active)
                    steps[g].apply(trial.block(g * bs, g * bs, bs, bs), polars[g]);
            CVector vt = apply_blocks(trial, h, bs);
            std::vector<cplx> zt = effective_channels(ch, vt);
            const double value = objective(zt);
            if (value > best)
            {
                phi = std::move(trial);
                v = std::move(vt);
                z = std::move(zt);
                best = value;
                accepted = true;
            }
        }
        if (!accepted || best - previous <= 1e-13 * std::abs(best))
            break;
    }
    return PhaseResponse(std::move(phi));
}

PhaseResponse user_aligned_phase(const ChannelRealization &ch, const RisSpec &set, int user)
{
    if (set.mode() != Mode::Reflective && set.mode() != Mode::Transmissive)
        throw std::invalid_argument("user_aligned_phase: single-matrix surfaces only");
    const int k = set.num_elements();
    if (ch.num_elements() != k)
        throw DimensionError("user_aligned_phase: channel and surface sizes differ");
    const CVector &g = ch.g_ris_user.at(static_cast<std::size_t>(user));
    const cplx hd = ch.h_direct.at(static_cast<std::size_t>(user));
    const cplx rot = hd == cplx{} ? cplx{1.0, 0.0} : hd / std::abs(hd);

    const int bs = set.block_size();
    CMatrix phi = CMatrix::Zero(k, k);
    for (int b = 0; b < k; b += bs)
    {
        const CMatrix target = rot * g.segment(b, bs) * ch.h_sat_ris.segment(b, bs).adjoint();
        phi.block(b, b, bs, bs) = nearest_isometry(target);
    }
    return PhaseResponse(std::move(phi));
}

namespace
{

Solution bcd_run(const ChannelRealization &ch, const ProblemSpec &problem, const BcdSettings &settings,
                 PhaseResponse phi)
{
    Solution sol;
    double previous = 0.0;
    for (int it = 0; it < settings.max_outer_iters; ++it)
    {
        const NomaAllocation alloc = solve_power_subproblem(ch, phi, problem);
        phi = solve_phase_subproblem(ch, alloc, problem, settings, phi);
        const RateResult rates = evaluate_rates(ch, phi, alloc);
        sol.allocation = alloc;
        sol.rates = rates;
        sol.trace.push_back(rates.sum_rate);
        if (it > 0 && rates.sum_rate - previous < settings.rate_tolerance)
        {
            sol.converged = true;
            break;
        }
        previous = rates.sum_rate;
    }
    sol.phase = std::move(phi);
    return sol;
}

} // namespace

Solution bcd_solve(const ChannelRealization &ch, const ProblemSpec &problem, const BcdSettings &settings,
                   const PhaseResponse &start)
{
    check_problem(ch, problem);
    settings.validate();
    check_start(start, problem);

    std::vector<PhaseResponse> starts{start};
    if (settings.user_aligned_restarts)
        for (int u = 0; u < ch.num_users(); ++u)
            starts.push_back(user_aligned_phase(ch, problem.feasible_set(), u));

    // The first start wins ties, so an explicit warm start is never displaced
    // by an equally good restart.
    std::optional<Solution> best;
    std::optional<InfeasibleError> first_failure;
    for (const auto &s : starts)
    {
        try
        {
            Solution sol = bcd_run(ch, problem, settings, s);
            if (!best || sol.rates.sum_rate > best->rates.sum_rate)
                best = std::move(sol);
        }
        catch (const InfeasibleError &e)
        {
            if (!first_failure)
                first_failure = e;
        }
    }
    if (!best)
        throw *first_failure;
    return std::move(*best);
}

Solution bcd_solve(const ChannelRealization &ch, const ProblemSpec &problem, const BcdSettings &settings)
{
    check_problem(ch, problem);
    const int k = problem.ris.num_elements();
    switch (settings.warm_start.kind)
    {
    case WarmStart::Kind::Identity:
        return bcd_solve(ch, problem, settings, PhaseResponse::identity(k));
    case WarmStart::Kind::Random:
        return bcd_solve(ch, problem, settings, random_feasible(problem.feasible_set(), settings.warm_start.seed));
    case WarmStart::Kind::CdSolution:
        break;
    }

    PhaseResponse start = PhaseResponse::identity(k);
    if (problem.scheme == Scheme::BdRis)
    {
        ProblemSpec cd = problem;
        cd.scheme = Scheme::CdRis;
        BcdSettings cd_settings = settings;
        cd_settings.warm_start = WarmStart::identity();
        try
        {
            start = bcd_solve(ch, cd, cd_settings, start).phase;
        }
        catch (const InfeasibleError &)
        {
            // Fall back to the identity; the BD solve reports its own infeasibility.
        }
    }
    return bcd_solve(ch, problem, settings, start);
}

Solution brute_force_oracle(const ChannelRealization &ch, const ProblemSpec &problem, int resolution)
{
    check_problem(ch, problem);
    if (resolution < 1)
        throw std::invalid_argument("oracle resolution must be positive");

    const RisSpec set = problem.feasible_set();
    const int k = set.num_elements();
    const bool diagonal = set.block_size() == 1;
    if (diagonal && k > 3)
        throw std::invalid_argument("brute-force oracle refuses diagonal grids above K = 3");
    if (!diagonal && k != 2)
        throw std::invalid_argument("brute-force oracle samples unitary sets only at K = 2");

    const int users = ch.num_users();
    const double p = dbm_to_mw(problem.power_budget_dbm);
    const double noise = ch.noise_power_mw;

    std::vector<double> far_shares;
    if (users == 1)
        far_shares.push_back(1.0);
    else
        for (int i = 0; i <= 500; ++i)
            far_shares.push_back(0.5 + 1e-3 * i);

    double best = kNegInf;
    CMatrix best_phi;
    NomaAllocation best_alloc;

    auto consider = [&](const CMatrix &phi) {
        std::vector<cplx> z(users);
        for (int u = 0; u < users; ++u)
            z[u] = effective_channel(ch, phi, u);
        double gs = 0.0;
        double gw = std::norm(z[0]);
        if (users == 2)
        {
            const UserOrder ord = order_users(z);
            gs = std::norm(z[ord.strong]);
            gw = std::norm(z[ord.weak]);
        }
        for (double af : far_shares)
        {
            const NomaAllocation alloc{p, 1.0 - af, af};
            const RateResult r = achievable_rates_from_gains(alloc, gs, gw, noise);
            if (meets_min_rates(r, problem, users) && r.sum_rate > best)
            {
                best = r.sum_rate;
                best_phi = phi;
                best_alloc = alloc;
            }
        }
    };

    const double two_pi = 2.0 * std::numbers::pi;
    if (diagonal)
    {
        std::vector<int> idx(k, 0);
        CMatrix phi = CMatrix::Zero(k, k);
        while (true)
        {
            for (int e = 0; e < k; ++e)
                phi(e, e) = std::polar(1.0, two_pi * idx[e] / resolution);
            consider(phi);
            int e = 0;
            while (e < k && ++idx[e] == resolution)
                idx[e++] = 0;
            if (e == k)
                break;
        }
    }
    else
    {
        const cplx j(0.0, 1.0);
        CMatrix u(2, 2);
        for (int ia = 0; ia < resolution; ++ia)
            for (int ip = 0; ip < resolution; ++ip)
                for (int ic = 0; ic < resolution; ++ic)
                    for (int it = 0; it <= resolution; ++it)
                    {
                        const double al = two_pi * ia / resolution;
                        const double ps = two_pi * ip / resolution;
                        const double ch_ = two_pi * ic / resolution;
                        const double th = 0.5 * std::numbers::pi * it / resolution;
                        const cplx glob = std::exp(j * al);
                        u(0, 0) = glob * std::exp(j * ps) * std::cos(th);
                        u(0, 1) = glob * std::exp(j * ch_) * std::sin(th);
                        u(1, 0) = -glob * std::exp(-j * ch_) * std::sin(th);
                        u(1, 1) = glob * std::exp(-j * ps) * std::cos(th);
                        consider(u);
                    }
    }

    if (best == kNegInf)
        throw InfeasibleError("no gridded point satisfies the minimum rates");

    Solution sol;
    sol.phase = PhaseResponse(best_phi);
    sol.allocation = best_alloc;
    sol.rates = evaluate_rates(ch, sol.phase, best_alloc);
    sol.trace = {sol.rates.sum_rate};
    sol.converged = true;
    return sol;
}

} // namespace bdris
