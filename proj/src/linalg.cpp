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

#include "bdris/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace bdris
{

Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> keys)
{
    std::vector<std::uint32_t> words;
    words.reserve(2 * (keys.size() + 1));
    auto push = [&](std::uint64_t v) {
        words.push_back(static_cast<std::uint32_t>(v & 0xffffffffULL));
        words.push_back(static_cast<std::uint32_t>(v >> 32));
    };
    push(seed);
    for (auto k : keys)
        push(k);
    std::seed_seq seq(words.begin(), words.end());
    return Rng(seq);
}

cplx complex_normal(Rng &rng)
{
    std::normal_distribution<double> n(0.0, std::sqrt(0.5));
    const double re = n(rng);
    const double im = n(rng);
    return {re, im};
}

CMatrix haar_unitary(Eigen::Index n, Rng &rng)
{
    CMatrix z(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
            z(i, j) = complex_normal(rng);

    Eigen::HouseholderQR<CMatrix> qr(z);
    CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
    const CMatrix &r = qr.matrixQR();
    for (Eigen::Index j = 0; j < n; ++j)
    {
        const double mag = std::abs(r(j, j));
        if (mag > 0.0)
            q.col(j) *= r(j, j) / mag;
    }
    return q;
}

CMatrix nearest_isometry(const CMatrix &m)
{
    const Eigen::Index rows = m.rows();
    const Eigen::Index cols = m.cols();
    if (rows < cols)
        throw std::invalid_argument("nearest_isometry: matrix must have at least as many rows as columns");
    if (cols == 0)
        return m;

    Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto &sv = svd.singularValues();
    const double tol = static_cast<double>(rows) * std::numeric_limits<double>::epsilon() * sv(0);

    Eigen::Index rank = 0;
    while (rank < cols && sv(rank) > tol)
        ++rank;

    const CMatrix &u = svd.matrixU();
    const CMatrix &v = svd.matrixV();
    if (rank == cols)
        return u * v.adjoint();

    const CMatrix ur = u.leftCols(rank);
    const CMatrix vn = v.rightCols(cols - rank);

    // Candidate targets for the null directions: the leading identity block,
    // stripped of the part already used by range(m).
    CMatrix basis = CMatrix::Zero(rows, cols);
    basis.topRows(cols).setIdentity();
    CMatrix target = basis * vn;

    std::vector<CVector> accepted;
    for (Eigen::Index j = 0; j < ur.cols(); ++j)
        accepted.emplace_back(ur.col(j));

    auto orthogonalize = [&](CVector x) {
        for (int pass = 0; pass < 2; ++pass)
            for (const auto &a : accepted)
                x -= a * a.dot(x);
        return x;
    };

    CMatrix completed(rows, cols - rank);
    Eigen::Index fallback = 0;
    for (Eigen::Index j = 0; j < completed.cols(); ++j)
    {
        CVector x = orthogonalize(target.col(j));
        // Degenerate candidate: walk the standard basis until a new direction appears.
        while (x.norm() < 1e-8 && fallback < rows)
            x = orthogonalize(CVector::Unit(rows, fallback++));
        x.normalize();
        accepted.push_back(x);
        completed.col(j) = x;
    }
    return ur * v.leftCols(rank).adjoint() + completed * vn.adjoint();
}

double max_abs(const CMatrix &m)
{
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

} // namespace bdris
