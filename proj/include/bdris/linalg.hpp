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

#ifndef BDRIS_LINALG_HPP
#define BDRIS_LINALG_HPP

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace bdris
{

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Random engine used throughout. Streams are derived with make_stream so that
/// every (seed, key...) tuple maps to the same sequence on every run.
using Rng = std::mt19937_64;

/// Builds an engine from a base seed and an ordered list of stream keys.
Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> keys = {});

/// Standard circularly-symmetric complex Gaussian, E|w|^2 = 1.
cplx complex_normal(Rng &rng);

/// Haar-distributed n x n unitary: QR of a complex Gaussian matrix with the
/// phases of R's diagonal folded back into Q.
CMatrix haar_unitary(Eigen::Index n, Rng &rng);

/// Nearest matrix with orthonormal columns to `m` (rows >= cols) in Frobenius norm,
/// i.e. the polar factor U V^H of the thin SVD.
///
/// When `m` is rank deficient the polar factor is not unique. The missing
/// directions are filled deterministically: the null-space directions of `m` are
/// mapped onto the leading identity block, projected away from the range of `m`
/// and re-orthonormalized. A zero matrix therefore maps to [I; 0].
CMatrix nearest_isometry(const CMatrix &m);

/// Largest entrywise modulus.
double max_abs(const CMatrix &m);

} // namespace bdris

#endif
