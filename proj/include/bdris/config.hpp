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

#ifndef BDRIS_CONFIG_HPP
#define BDRIS_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bdris/experiments.hpp"

namespace bdris
{

/// Parse or validation failure. `line` is 0 when not tied to a file line.
class ConfigError : public std::runtime_error
{
  public:
    ConfigError(const std::string &what, std::string key, int line = 0)
        : std::runtime_error(what), key_(std::move(key)), line_(line)
    {
    }
    const std::string &key() const { return key_; }
    int line() const { return line_; }

  private:
    std::string key_;
    int line_;
};

/// Flat run configuration. Defaults reproduce the reference LEO scenario:
/// 3.5 GHz, exponent 2.5, 10 dBi antennas, reflection 0.9, noise -90 dBm,
/// Rician factor 10, 600 km altitude at 45 degrees, 500 km RIS-satellite
/// distance, 20 dBm, 80 fully-connected reflective elements.
struct Config
{
    GeometryParams geometry;
    LinkBudgetParams link;
    bool include_direct = true;
    int num_elements = 80;
    Architecture architecture = Architecture::FullyConnected;
    int group_count = 1;
    int sector_count = 2;
    Mode mode = Mode::Reflective;
    double power_dbm = 20.0;
    double min_rate_near = 0.0;
    double min_rate_far = 0.0;
    int trials = 200;
    std::uint64_t base_seed = 1;
    int bcd_max_iters = 50;
    double bcd_rate_tol = 1e-4;
    std::string out_dir = "out";

    /// Range checks; throws ConfigError naming the offending key.
    void validate() const;

    RisSpec ris_spec() const;
    Scenario scenario() const;
    ProblemSpec problem(Scheme scheme) const;
};

/// Keys accepted by load_config / apply_setting, in echo order.
const std::vector<std::string> &config_keys();

/// Sets one key from its textual value; throws ConfigError on unknown keys or bad values.
void apply_setting(Config &cfg, const std::string &key, const std::string &value, int line = 0);

/// Parses `key = value` lines; `#` starts a comment. Does not validate ranges.
Config parse_config(std::istream &in, Config base = {});

/// Reads and validates a configuration file.
Config load_config(const std::filesystem::path &path);

/// `key = value` lines for every key; parse_config of the output reproduces `cfg` exactly.
std::string echo_config(const Config &cfg);

} // namespace bdris

#endif
