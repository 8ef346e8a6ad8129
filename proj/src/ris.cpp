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

#include "bdris/ris.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace bdris
{

std::string to_string(Architecture a)
{
    switch (a)
    {
    case Architecture::SingleConnected:
        return "single";
    case Architecture::FullyConnected:
        return "full";
    case Architecture::GroupConnected:
        return "group";
    }
    return "unknown";
}

std::string to_string(Mode m)
{
    switch (m)
    {
    case Mode::Reflective:
        return "reflective";
    case Mode::Transmissive:
        return "transmissive";
    case Mode::Hybrid:
        return "hybrid";
    case Mode::MultiSector:
        return "multi_sector";
    }
    return "unknown";
}

// ---- RisSpec ----

RisSpec::RisSpec(int num_elements, Architecture architecture, Mode mode, int group_count, int sector_count)
    : num_elements_(num_elements), architecture_(architecture), mode_(mode), group_count_(group_count),
      sector_count_(sector_count)
{
    if (num_elements_ < 1)
        throw SpecError("num_elements must be positive, got " + std::to_string(num_elements_));

    if (mode_ == Mode::MultiSector)
    {
        if (sector_count_ < 2)
            throw SpecError("multi-sector mode needs at least 2 sectors, got " + std::to_string(sector_count_));
        if (num_elements_ % sector_count_ != 0)
            throw SpecError("sector count " + std::to_string(sector_count_) + " does not divide K = " +
                            std::to_string(num_elements_));
    }

    if (architecture_ == Architecture::GroupConnected)
    {
        const int dim = matrix_dim();
        if (group_count_ < 1 || dim % group_count_ != 0)
            throw SpecError("group count " + std::to_string(group_count_) + " does not divide matrix dimension " +
                            std::to_string(dim));
    }
}

RisSpec RisSpec::single_connected(int num_elements, Mode mode, int sector_count)
{
    return RisSpec(num_elements, Architecture::SingleConnected, mode, 1, sector_count);
}

RisSpec RisSpec::fully_connected(int num_elements, Mode mode, int sector_count)
{
    return RisSpec(num_elements, Architecture::FullyConnected, mode, 1, sector_count);
}

RisSpec RisSpec::group_connected(int num_elements, int group_count, Mode mode, int sector_count)
{
    return RisSpec(num_elements, Architecture::GroupConnected, mode, group_count, sector_count);
}

int RisSpec::group_count() const
{
    switch (architecture_)
    {
    case Architecture::SingleConnected:
        return matrix_dim();
    case Architecture::FullyConnected:
        return 1;
    case Architecture::GroupConnected:
        return group_count_;
    }
    return 1;
}

int RisSpec::matrix_count() const
{
    switch (mode_)
    {
    case Mode::Reflective:
    case Mode::Transmissive:
        return 1;
    case Mode::Hybrid:
        return 2;
    case Mode::MultiSector:
        return sector_count_;
    }
    return 1;
}

int RisSpec::matrix_dim() const
{
    return mode_ == Mode::MultiSector ? num_elements_ / sector_count_ : num_elements_;
}

std::string RisSpec::describe() const
{
    std::ostringstream os;
    os << to_string(architecture_) << "-connected " << to_string(mode_) << ", K=" << num_elements_;
    if (architecture_ == Architecture::GroupConnected)
        os << ", G=" << group_count_;
    if (mode_ == Mode::MultiSector)
        os << ", S=" << sector_count_;
    return os.str();
}

// ---- PhaseResponse ----

PhaseResponse::PhaseResponse(CMatrix phi)
{
    matrices_.push_back(std::move(phi));
}

PhaseResponse::PhaseResponse(std::vector<CMatrix> matrices) : matrices_(std::move(matrices)) {}

PhaseResponse PhaseResponse::identity(int num_elements)
{
    return PhaseResponse(CMatrix::Identity(num_elements, num_elements));
}

namespace
{

void check_dimensions(const PhaseResponse &pr, const RisSpec &spec)
{
    const auto expected = static_cast<std::size_t>(spec.matrix_count());
    if (pr.size() != expected)
        throw DimensionError("expected " + std::to_string(expected) + " matrices for " + spec.describe() +
                             ", got " + std::to_string(pr.size()));
    const int dim = spec.matrix_dim();
    for (const auto &m : pr.matrices())
        if (m.rows() != dim || m.cols() != dim)
            throw DimensionError("expected " + std::to_string(dim) + "x" + std::to_string(dim) + " matrices for " +
                                 spec.describe() + ", got " + std::to_string(m.rows()) + "x" +
                                 std::to_string(m.cols()));
}

std::string constraint_label(const RisSpec &spec)
{
    const bool diagonal = spec.block_size() == 1;
    switch (spec.mode())
    {
    case Mode::Reflective:
    case Mode::Transmissive:
        return diagonal ? "unit modulus" : "unitary";
    case Mode::Hybrid:
        return diagonal ? "reflect/transmit power split" : "hybrid energy conservation";
    case Mode::MultiSector:
        return diagonal ? "per-cell sector power split" : "multi-sector energy conservation";
    }
    return "unknown";
}

} // namespace

FeasibilityReport validate(const PhaseResponse &pr, const RisSpec &spec, double tol)
{
    if (!(tol > 0.0))
        throw std::invalid_argument("feasibility tolerance must be positive");
    check_dimensions(pr, spec);

    FeasibilityReport report;
    const int dim = spec.matrix_dim();
    const int bs = spec.block_size();

    auto record = [&](double v, const std::string &label) {
        if (v > report.max_violation)
        {
            report.max_violation = v;
            report.violated_constraint = label;
        }
    };

    if (bs < dim)
    {
        double off = 0.0;
        for (const auto &m : pr.matrices())
            for (int j = 0; j < dim; ++j)
                for (int i = 0; i < dim; ++i)
                    if (i / bs != j / bs)
                        off = std::max(off, std::abs(m(i, j)));
        record(off, "block-diagonal structure");
    }

    const std::string label = constraint_label(spec);
    for (int g = 0; g < spec.group_count(); ++g)
    {
        CMatrix gram = -CMatrix::Identity(bs, bs);
        for (const auto &m : pr.matrices())
        {
            const auto blk = m.block(g * bs, g * bs, bs, bs);
            gram.noalias() += blk.adjoint() * blk;
        }
        record(max_abs(gram), label);
    }

    report.is_feasible = report.max_violation <= tol;
    if (report.is_feasible)
        report.violated_constraint.clear();
    return report;
}

PhaseResponse random_feasible(const RisSpec &spec, std::uint64_t seed)
{
    Rng rng = make_stream(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const int dim = spec.matrix_dim();
    const int bs = spec.block_size();
    const int count = spec.matrix_count();

    std::vector<CMatrix> mats(count, CMatrix::Zero(dim, dim));
    for (int g = 0; g < spec.group_count(); ++g)
    {
        // Per-column power shares across the mode matrices; each column of the
        // stacked block then has unit norm and columns stay orthogonal.
        Eigen::MatrixXd share = Eigen::MatrixXd::Ones(count, bs);
        if (spec.mode() == Mode::Hybrid)
        {
            for (int j = 0; j < bs; ++j)
            {
                const double beta = 0.5 * std::numbers::pi * unit(rng);
                share(0, j) = std::cos(beta) * std::cos(beta);
                share(1, j) = std::sin(beta) * std::sin(beta);
            }
        }
        else if (spec.mode() == Mode::MultiSector)
        {
            std::exponential_distribution<double> expo(1.0);
            for (int j = 0; j < bs; ++j)
            {
                double total = 0.0;
                for (int s = 0; s < count; ++s)
                    total += share(s, j) = expo(rng);
                share.col(j) /= total;
            }
        }

        for (int s = 0; s < count; ++s)
        {
            CMatrix u = haar_unitary(bs, rng);
            for (int j = 0; j < bs; ++j)
                u.col(j) *= std::sqrt(share(s, j));
            mats[s].block(g * bs, g * bs, bs, bs) = u;
        }
    }
    return PhaseResponse(std::move(mats));
}

PhaseResponse project_feasible(const PhaseResponse &m, const RisSpec &spec)
{
    check_dimensions(m, spec);

    const int dim = spec.matrix_dim();
    const int bs = spec.block_size();
    const int count = spec.matrix_count();

    std::vector<CMatrix> out(count, CMatrix::Zero(dim, dim));
    CMatrix stacked(count * bs, bs);
    for (int g = 0; g < spec.group_count(); ++g)
    {
        for (int s = 0; s < count; ++s)
            stacked.middleRows(s * bs, bs) = m.matrix(s).block(g * bs, g * bs, bs, bs);
        const CMatrix w = nearest_isometry(stacked);
        for (int s = 0; s < count; ++s)
            out[s].block(g * bs, g * bs, bs, bs) = w.middleRows(s * bs, bs);
    }
    return PhaseResponse(std::move(out));
}

// ---- hardware complexity ----

std::uint64_t HardwareComplexity::count() const
{
    if (!is_integral())
        throw std::domain_error("hardware complexity is fractional: " + to_string());
    return numerator;
}

std::string HardwareComplexity::to_string() const
{
    if (is_integral())
        return std::to_string(numerator);
    return std::to_string(numerator) + "/" + std::to_string(denominator);
}

HardwareComplexity hardware_complexity(const RisSpec &spec)
{
    const std::uint64_t k = static_cast<std::uint64_t>(spec.num_elements());
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    switch (spec.architecture())
    {
    case Architecture::SingleConnected:
        switch (spec.mode())
        {
        case Mode::Reflective:
        case Mode::Transmissive:
            num = k;
            break;
        case Mode::Hybrid: // (3/2) K
            num = 3 * k;
            den = 2;
            break;
        case Mode::MultiSector: // (S+1) K / 2
            num = (static_cast<std::uint64_t>(spec.sector_count()) + 1) * k;
            den = 2;
            break;
        }
        break;
    case Architecture::FullyConnected: // (K+1) K / 2
        num = (k + 1) * k;
        den = 2;
        break;
    case Architecture::GroupConnected: // (K/G + 1) K / 2
    {
        const std::uint64_t g = static_cast<std::uint64_t>(spec.group_count());
        num = (k / g + 1) * k;
        den = 2;
        break;
    }
    }

    const std::uint64_t d = std::gcd(num, den);
    return {num / d, den / d};
}

} // namespace bdris
