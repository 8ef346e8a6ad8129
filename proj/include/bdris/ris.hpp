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

#ifndef BDRIS_RIS_HPP
#define BDRIS_RIS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bdris/linalg.hpp"

namespace bdris
{

enum class Architecture
{
    SingleConnected,
    FullyConnected,
    GroupConnected
};

enum class Mode
{
    Reflective,
    Transmissive,
    Hybrid,
    MultiSector
};

std::string to_string(Architecture a);
std::string to_string(Mode m);

/// Raised for malformed RisSpec parameters.
class SpecError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when matrix shapes disagree with a RisSpec.
class DimensionError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

/// Surface description: element count, circuit topology and operating mode.
///
/// Every configuration reduces to the same structure: `matrix_count()` matrices
/// of size `matrix_dim()`, each block diagonal with `block_count()` blocks of
/// size `block_size()`, and per block the stacked matrices satisfy
/// sum_m Phi_m^H Phi_m = I.
///
/// For multi-sector mode `num_elements` counts every PRE (cells x sectors), so
/// each sector matrix is (K/S) x (K/S); a group-connected multi-sector surface
/// groups cells, which requires G | K/S.
class RisSpec
{
  public:
    RisSpec(int num_elements, Architecture architecture, Mode mode, int group_count = 1, int sector_count = 1);

    static RisSpec single_connected(int num_elements, Mode mode = Mode::Reflective, int sector_count = 1);
    static RisSpec fully_connected(int num_elements, Mode mode = Mode::Reflective, int sector_count = 1);
    static RisSpec group_connected(int num_elements, int group_count, Mode mode = Mode::Reflective,
                                   int sector_count = 1);

    int num_elements() const { return num_elements_; }
    Architecture architecture() const { return architecture_; }
    Mode mode() const { return mode_; }
    /// Number of independent blocks per matrix (K for single-connected, 1 for fully-connected).
    int group_count() const;
    int sector_count() const { return mode_ == Mode::MultiSector ? sector_count_ : 1; }

    int matrix_count() const;
    int matrix_dim() const;
    int block_size() const { return matrix_dim() / group_count(); }

    std::string describe() const;

  private:
    int num_elements_;
    Architecture architecture_;
    Mode mode_;
    int group_count_;
    int sector_count_;
};

/// Set of phase-response matrices: one for reflective/transmissive, (Phi_r, Phi_t)
/// for hybrid, and S sector matrices for multi-sector.
class PhaseResponse
{
  public:
    PhaseResponse() = default;
    explicit PhaseResponse(CMatrix phi);
    explicit PhaseResponse(std::vector<CMatrix> matrices);

    const std::vector<CMatrix> &matrices() const { return matrices_; }
    const CMatrix &matrix(std::size_t i = 0) const { return matrices_.at(i); }
    std::size_t size() const { return matrices_.size(); }

    static PhaseResponse identity(int num_elements);

  private:
    std::vector<CMatrix> matrices_;
};

struct FeasibilityReport
{
    bool is_feasible = true;
    double max_violation = 0.0;
    std::string violated_constraint;
};

inline constexpr double kDefaultFeasibilityTol = 1e-9;

/// Checks `pr` against the constraint set of `spec`. max_violation is the largest
/// entrywise residual over every constraint equality, including off-block entries.
FeasibilityReport validate(const PhaseResponse &pr, const RisSpec &spec, double tol = kDefaultFeasibilityTol);

/// Random feasible point; a pure function of (spec, seed).
PhaseResponse random_feasible(const RisSpec &spec, std::uint64_t seed);

/// Frobenius-nearest feasible point. Per block the mode matrices are stacked and
/// replaced by the polar factor of the stack, which for hybrid/multi-sector is
/// S (S^H S)^{-1/2}. Off-block entries are dropped.
PhaseResponse project_feasible(const PhaseResponse &m, const RisSpec &spec);

/// Impedance-component count, kept as an exact fraction because the
/// single-connected hybrid and multi-sector counts can be half-integers.
struct HardwareComplexity
{
    std::uint64_t numerator = 0;
    std::uint64_t denominator = 1;

    bool is_integral() const { return denominator == 1; }
    /// Integral count; throws std::domain_error when the count is fractional.
    std::uint64_t count() const;
    double value() const { return static_cast<double>(numerator) / static_cast<double>(denominator); }
    std::string to_string() const;
};

HardwareComplexity hardware_complexity(const RisSpec &spec);

} // namespace bdris

#endif
