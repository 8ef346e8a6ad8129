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

#include "bdris/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace bdris
{

namespace
{

std::string trim(const std::string &s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string &key, const std::string &value, const std::string &expected, int line)
{
    std::string where = line > 0 ? "line " + std::to_string(line) + ": " : "";
    throw ConfigError(where + "invalid value '" + value + "' for key '" + key + "' (expected " + expected + ")", key,
                      line);
}

double parse_double(const std::string &key, const std::string &v, int line)
{
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(x))
        bad_value(key, v, "a finite number", line);
    return x;
}

template <typename Int>
Int parse_int(const std::string &key, const std::string &v, int line)
{
    Int x = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || ptr != v.data() + v.size())
        bad_value(key, v, "an integer", line);
    return x;
}

bool parse_bool(const std::string &key, const std::string &v, int line)
{
    if (v == "true" || v == "1" || v == "yes")
        return true;
    if (v == "false" || v == "0" || v == "no")
        return false;
    bad_value(key, v, "true or false", line);
}

Architecture parse_architecture(const std::string &key, const std::string &v, int line)
{
    if (v == "single" || v == "single_connected")
        return Architecture::SingleConnected;
    if (v == "full" || v == "fully_connected")
        return Architecture::FullyConnected;
    if (v == "group" || v == "group_connected")
        return Architecture::GroupConnected;
    bad_value(key, v, "single, full or group", line);
}

Mode parse_mode(const std::string &key, const std::string &v, int line)
{
    if (v == "reflective")
        return Mode::Reflective;
    if (v == "transmissive")
        return Mode::Transmissive;
    if (v == "hybrid")
        return Mode::Hybrid;
    if (v == "multi_sector")
        return Mode::MultiSector;
    bad_value(key, v, "reflective, transmissive, hybrid or multi_sector", line);
}

std::string fmt_double(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

struct KeyHandler
{
    std::function<void(Config &, const std::string &, int)> set;
    std::function<std::string(const Config &)> get;
};

template <typename Ref>
std::pair<const std::string, KeyHandler> double_key(const char *name, Ref ref)
{
    return {name, {[name, ref](Config &c, const std::string &v, int l) { ref(c) = parse_double(name, v, l); },
                   [ref](const Config &c) { return fmt_double(ref(c)); }}};
}

template <typename Ref>
std::pair<const std::string, KeyHandler> int_key(const char *name, Ref ref)
{
    return {name, {[name, ref](Config &c, const std::string &v, int l) { ref(c) = parse_int<int>(name, v, l); },
                   [ref](const Config &c) { return std::to_string(ref(c)); }}};
}

const std::map<std::string, KeyHandler> &handlers()
{
    static const std::map<std::string, KeyHandler> table = {
        double_key("altitude_km", [](auto &c) -> auto & { return c.geometry.altitude_km; }),
        double_key("elevation_deg", [](auto &c) -> auto & { return c.geometry.elevation_deg; }),
        double_key("earth_radius_km", [](auto &c) -> auto & { return c.geometry.earth_radius_km; }),
        {"ris_sat_distance_km",
         {[](Config &c, const std::string &v, int l) {
              if (v == "none")
                  c.geometry.ris_satellite_distance_km.reset();
              else
                  c.geometry.ris_satellite_distance_km = parse_double("ris_sat_distance_km", v, l);
          },
          [](const Config &c) {
              return c.geometry.ris_satellite_distance_km ? fmt_double(*c.geometry.ris_satellite_distance_km)
                                                          : std::string("none");
          }}},
        double_key("ris_user_near_km", [](auto &c) -> auto & { return c.geometry.ris_user_near_km; }),
        double_key("ris_user_far_km", [](auto &c) -> auto & { return c.geometry.ris_user_far_km; }),
        {"include_direct",
         {[](Config &c, const std::string &v, int l) { c.include_direct = parse_bool("include_direct", v, l); },
          [](const Config &c) { return std::string(c.include_direct ? "true" : "false"); }}},
        double_key("freq_ghz", [](auto &c) -> auto & { return c.link.carrier_frequency_ghz; }),
        double_key("path_loss_exponent", [](auto &c) -> auto & { return c.link.path_loss_exponent; }),
        double_key("tx_gain_dbi", [](auto &c) -> auto & { return c.link.tx_antenna_gain_dbi; }),
        double_key("rx_gain_dbi", [](auto &c) -> auto & { return c.link.rx_antenna_gain_dbi; }),
        double_key("reflection_magnitude", [](auto &c) -> auto & { return c.link.reflection_magnitude; }),
        double_key("noise_dbm", [](auto &c) -> auto & { return c.link.noise_power_dbm; }),
        double_key("rician_k", [](auto &c) -> auto & { return c.link.rician_k; }),
        int_key("num_elements", [](auto &c) -> auto & { return c.num_elements; }),
        {"architecture",
         {[](Config &c, const std::string &v, int l) { c.architecture = parse_architecture("architecture", v, l); },
          [](const Config &c) { return to_string(c.architecture); }}},
        int_key("group_count", [](auto &c) -> auto & { return c.group_count; }),
        int_key("sector_count", [](auto &c) -> auto & { return c.sector_count; }),
        {"mode",
         {[](Config &c, const std::string &v, int l) { c.mode = parse_mode("mode", v, l); },
          [](const Config &c) { return to_string(c.mode); }}},
        double_key("power_dbm", [](auto &c) -> auto & { return c.power_dbm; }),
        double_key("min_rate_near", [](auto &c) -> auto & { return c.min_rate_near; }),
        double_key("min_rate_far", [](auto &c) -> auto & { return c.min_rate_far; }),
        int_key("trials", [](auto &c) -> auto & { return c.trials; }),
        {"base_seed",
         {[](Config &c, const std::string &v, int l) { c.base_seed = parse_int<std::uint64_t>("base_seed", v, l); },
          [](const Config &c) { return std::to_string(c.base_seed); }}},
        int_key("bcd_max_iters", [](auto &c) -> auto & { return c.bcd_max_iters; }),
        double_key("bcd_rate_tol", [](auto &c) -> auto & { return c.bcd_rate_tol; }),
        {"out_dir",
         {[](Config &c, const std::string &v, int) { c.out_dir = v; }, [](const Config &c) { return c.out_dir; }}},
    };
    return table;
}

void require(bool ok, const char *key, const std::string &msg)
{
    if (!ok)
        throw ConfigError(std::string("invalid '") + key + "': " + msg, key);
}

} // namespace

const std::vector<std::string> &config_keys()
{
    static const std::vector<std::string> keys = {
        "altitude_km",    "elevation_deg",      "earth_radius_km", "ris_sat_distance_km", "ris_user_near_km",
        "ris_user_far_km", "include_direct",    "freq_ghz",        "path_loss_exponent",  "tx_gain_dbi",
        "rx_gain_dbi",    "reflection_magnitude", "noise_dbm",     "rician_k",            "num_elements",
        "architecture",   "group_count",        "sector_count",    "mode",                "power_dbm",
        "min_rate_near",  "min_rate_far",       "trials",          "base_seed",           "bcd_max_iters",
        "bcd_rate_tol",   "out_dir"};
    return keys;
}

void apply_setting(Config &cfg, const std::string &key, const std::string &value, int line)
{
    const auto &table = handlers();
    const auto it = table.find(key);
    if (it == table.end())
    {
        std::string where = line > 0 ? "line " + std::to_string(line) + ": " : "";
        throw ConfigError(where + "unknown key '" + key + "'", key, line);
    }
    it->second.set(cfg, value, line);
}

Config parse_config(std::istream &in, Config base)
{
    std::string raw;
    int line = 0;
    while (std::getline(in, raw))
    {
        ++line;
        const auto hash = raw.find('#');
        const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (text.empty())
            continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line) + ": expected 'key = value'", "", line);
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(line) + ": expected 'key = value'", key, line);
        apply_setting(base, key, value, line);
    }
    return base;
}

Config load_config(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read config file " + path.string(), "");
    Config cfg = parse_config(in);
    cfg.validate();
    return cfg;
}

std::string echo_config(const Config &cfg)
{
    std::ostringstream os;
    const auto &table = handlers();
    for (const auto &key : config_keys())
        os << key << " = " << table.at(key).get(cfg) << '\n';
    return os.str();
}

void Config::validate() const
{
    require(geometry.altitude_km > 0.0, "altitude_km", "must be positive");
    require(geometry.elevation_deg > 0.0 && geometry.elevation_deg <= 90.0, "elevation_deg", "must lie in (0, 90]");
    require(geometry.earth_radius_km > 0.0, "earth_radius_km", "must be positive");
    require(!geometry.ris_satellite_distance_km || *geometry.ris_satellite_distance_km > 0.0, "ris_sat_distance_km",
            "must be positive or 'none'");
    require(geometry.ris_user_near_km > 0.0, "ris_user_near_km", "must be positive");
    require(geometry.ris_user_far_km > 0.0, "ris_user_far_km", "must be positive");
    require(link.carrier_frequency_ghz > 0.0, "freq_ghz", "must be positive");
    require(link.path_loss_exponent >= 2.0, "path_loss_exponent", "must be at least 2");
    require(link.reflection_magnitude > 0.0 && link.reflection_magnitude <= 1.0, "reflection_magnitude",
            "must lie in (0, 1]");
    require(link.rician_k >= 0.0, "rician_k", "must be non-negative");
    require(num_elements >= 1, "num_elements", "must be positive");
    require(group_count >= 1, "group_count", "must be positive");
    require(sector_count >= 1, "sector_count", "must be positive");
    require(min_rate_near >= 0.0, "min_rate_near", "must be non-negative");
    require(min_rate_far >= 0.0, "min_rate_far", "must be non-negative");
    require(trials >= 1, "trials", "must be positive");
    require(bcd_max_iters >= 1, "bcd_max_iters", "must be positive");
    require(bcd_rate_tol > 0.0, "bcd_rate_tol", "must be positive");
    require(!out_dir.empty(), "out_dir", "must not be empty");
    try
    {
        (void)ris_spec();
    }
    catch (const SpecError &e)
    {
        const char *key = "num_elements";
        if (mode == Mode::MultiSector && (sector_count < 2 || num_elements % sector_count != 0))
            key = "sector_count";
        else if (architecture == Architecture::GroupConnected)
            key = "group_count";
        throw ConfigError(std::string("invalid '") + key + "': " + e.what(), key);
    }
}

RisSpec Config::ris_spec() const
{
    return RisSpec(num_elements, architecture, mode, group_count, sector_count);
}

Scenario Config::scenario() const
{
    Scenario s;
    s.geometry = geometry;
    s.link = link;
    s.include_direct = include_direct;
    s.architecture = architecture;
    s.mode = mode;
    s.group_count = group_count;
    s.sector_count = sector_count;
    s.min_rate_near = min_rate_near;
    s.min_rate_far = min_rate_far;
    s.bcd.max_outer_iters = bcd_max_iters;
    s.bcd.rate_tolerance = bcd_rate_tol;
    s.bcd.warm_start = WarmStart::cd_solution();
    return s;
}

ProblemSpec Config::problem(Scheme scheme) const
{
    return ProblemSpec{ris_spec(), power_dbm, min_rate_near, min_rate_far, scheme};
}

} // namespace bdris
