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

#ifndef BDRIS_EXPERIMENTS_HPP
#define BDRIS_EXPERIMENTS_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "bdris/channel.hpp"
#include "bdris/optimizer.hpp"

namespace bdris
{

/// Everything a trial needs except the sweep coordinates.
struct Scenario
{
    GeometryParams geometry;
    LinkBudgetParams link;
    bool include_direct = true;
    int num_users = 2;
    Architecture architecture = Architecture::FullyConnected;
    Mode mode = Mode::Reflective;
    int group_count = 1;
    int sector_count = 1;
    double min_rate_near = 0.0;
    double min_rate_far = 0.0;
    BcdSettings bcd;

    RisSpec ris_spec(int num_elements) const;
};

struct SweepSpec
{
    std::vector<double> power_points_dbm;
    std::vector<int> element_counts;
    int trials = 200;
    std::uint64_t base_seed = 1;
    std::vector<Scheme> schemes{Scheme::BdRis, Scheme::CdRis};
    Scenario scenario;
    /// Worker threads; 0 picks the hardware concurrency. Results do not depend on it.
    unsigned threads = 1;

    void validate() const;
};

struct DetailRow
{
    double power_dbm = 0.0;
    int num_elements = 0;
    Scheme scheme = Scheme::BdRis;
    int trial = 0;
    double rate_near = 0.0;
    double rate_far = 0.0;
    double sum_rate = 0.0;
    bool outage = false;
};

struct AggregateRow
{
    double power_dbm = 0.0;
    int num_elements = 0;
    Scheme scheme = Scheme::BdRis;
    double mean_sum_rate = 0.0; ///< over non-outage trials; NaN if every trial is in outage
    double std_sum_rate = 0.0;  ///< sample standard deviation over non-outage trials
    int num_trials = 0;         ///< all trials, including outages
    int outage_count = 0;

    int effective_trials() const { return num_trials - outage_count; }
    double standard_error() const;
};

enum class SweepAxis
{
    Power,
    Elements
};

struct SweepResult
{
    SweepAxis axis = SweepAxis::Power;
    std::vector<DetailRow> rows;          ///< sorted by (power, K, scheme, trial)
    std::vector<AggregateRow> aggregates; ///< sorted by (power, K, scheme)

    const AggregateRow &aggregate(double power_dbm, int num_elements, Scheme scheme) const;
};

/// Channel of one trial. Every link has its own stream keyed by (base_seed,
/// trial, link), so all power points and both schemes see the same draw, the
/// direct links do not depend on K, and the element gains for K elements are
/// a prefix of those for any larger K.
ChannelRealization draw_trial(const Scenario &scenario, int num_elements, std::uint64_t base_seed, int trial);

/// Solves both schemes on one realization. The BD-RIS solve starts from the
/// CD-RIS solution, so its sum rate is never below the CD-RIS one.
struct PairedOutcome
{
    DetailRow bd;
    DetailRow cd;
};
PairedOutcome solve_trial(const Scenario &scenario, double power_dbm, int num_elements, int trial,
                          std::uint64_t base_seed, const std::vector<Scheme> &schemes);

/// Sum rate vs transmit power at one element count.
SweepResult run_power_sweep(const SweepSpec &spec);

/// Sum rate vs element count at one transmit power.
SweepResult run_element_sweep(const SweepSpec &spec);

inline constexpr const char *kDetailHeader = "power_dbm,num_elements,scheme,trial,rate_near,rate_far,sum_rate,outage";
inline constexpr const char *kAggregateHeader =
    "power_dbm,num_elements,scheme,mean_sum_rate,std_sum_rate,num_trials,outage_count";

void emit_detail_csv(const SweepResult &result, const std::filesystem::path &path);
void emit_aggregate_csv(const SweepResult &result, const std::filesystem::path &path);
void emit_csv(const SweepResult &result, const std::filesystem::path &detail_path,
              const std::filesystem::path &aggregate_path);

/// gnuplot script drawing one curve per scheme from the aggregate CSV.
void emit_plot_script(const SweepResult &result, const std::filesystem::path &aggregate_csv,
                      const std::filesystem::path &script_path);

/// Agreement between the BCD solver and its references on tiny instances.
struct OracleCheckReport
{
    int pair_instances = 0;
    int pair_passed = 0;
    double worst_pair_shortfall = 0.0; ///< max relative gap of BCD below the grid oracle
    int single_instances = 0;
    int single_passed = 0;
    double worst_single_shortfall = 0.0; ///< max relative gap of |h_eff| below |h_d| + |g||h|

    bool passed() const { return pair_passed == pair_instances && single_passed == single_instances; }
};

inline constexpr double kPairOracleTolerance = 0.02;
inline constexpr double kSingleBoundTolerance = 0.01;

/// Two-user K = 2 single-connected instances vs brute_force_oracle(64), and
/// single-user fully-connected instances vs the Cauchy-Schwarz gain bound.
OracleCheckReport run_oracle_check(int instances, std::uint64_t seed, const BcdSettings &settings = {});

} // namespace bdris

#endif
