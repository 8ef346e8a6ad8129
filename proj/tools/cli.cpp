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

#include "cli.hpp"

#include <cstdio>
#include <fstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bdris/config.hpp"
#include "bdris/experiments.hpp"
#include "bdris/optimizer.hpp"

namespace bdris::cli
{

using json = nlohmann::json;

PhaseResponse read_phase_response(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw PhaseFileError("cannot read phase-response file " + path.string());

    try
    {
        const json doc = json::parse(in);
        std::vector<CMatrix> mats;
        for (const auto &entry : doc.at("matrices"))
        {
            const auto &re = entry.at("re");
            const auto &im = entry.at("im");
            const auto rows = static_cast<Eigen::Index>(re.size());
            if (im.size() != re.size())
                throw PhaseFileError("real and imaginary parts differ in row count");
            const auto cols = rows > 0 ? static_cast<Eigen::Index>(re.at(0).size()) : 0;
            CMatrix m(rows, cols);
            for (Eigen::Index i = 0; i < rows; ++i)
            {
                const auto &rr = re.at(i);
                const auto &ri = im.at(i);
                if (static_cast<Eigen::Index>(rr.size()) != cols || static_cast<Eigen::Index>(ri.size()) != cols)
                    throw PhaseFileError("ragged matrix row " + std::to_string(i));
                for (Eigen::Index j = 0; j < cols; ++j)
                    m(i, j) = cplx(rr.at(j).get<double>(), ri.at(j).get<double>());
            }
            mats.push_back(std::move(m));
        }
        return PhaseResponse(std::move(mats));
    }
    catch (const json::exception &e)
    {
        throw PhaseFileError(path.string() + ": " + e.what());
    }
}

void write_phase_response(const PhaseResponse &pr, const std::filesystem::path &path)
{
    json doc;
    doc["matrices"] = json::array();
    for (const auto &m : pr.matrices())
    {
        json re = json::array();
        json im = json::array();
        for (Eigen::Index i = 0; i < m.rows(); ++i)
        {
            json rr = json::array();
            json ri = json::array();
            for (Eigen::Index j = 0; j < m.cols(); ++j)
            {
                rr.push_back(m(i, j).real());
                ri.push_back(m(i, j).imag());
            }
            re.push_back(std::move(rr));
            im.push_back(std::move(ri));
        }
        doc["matrices"].push_back({{"re", std::move(re)}, {"im", std::move(im)}});
    }
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << doc.dump() << '\n';
    if (!out)
        throw std::runtime_error("write to " + path.string() + " failed");
}

namespace
{

std::string num(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

void require_rate_mode(const Config &cfg)
{
    if (cfg.mode != Mode::Reflective && cfg.mode != Mode::Transmissive)
        throw ConfigError("invalid 'mode': rate simulations need a reflective or transmissive surface", "mode");
}

void print_aggregates(const SweepResult &result, std::ostream &out)
{
    out << "power_dbm  num_elements  scheme  mean_sum_rate  std_sum_rate  outages\n";
    for (const auto &a : result.aggregates)
        out << num(a.power_dbm) << "  " << a.num_elements << "  " << to_string(a.scheme) << "  "
            << num(a.mean_sum_rate) << "  " << num(a.std_sum_rate) << "  " << a.outage_count << "/" << a.num_trials
            << '\n';
}

SweepSpec sweep_spec(const Config &cfg, unsigned threads)
{
    SweepSpec spec;
    spec.trials = cfg.trials;
    spec.base_seed = cfg.base_seed;
    spec.scenario = cfg.scenario();
    spec.threads = threads;
    return spec;
}

void write_sweep(const SweepResult &result, const Config &cfg, const std::string &stem, std::ostream &out)
{
    const std::filesystem::path dir(cfg.out_dir);
    const auto detail = dir / (stem + "_detail.csv");
    const auto aggregate = dir / (stem + "_aggregate.csv");
    const auto script = dir / (stem + ".gp");
    emit_csv(result, detail, aggregate);
    emit_plot_script(result, aggregate, script);
    print_aggregates(result, out);
    out << "wrote " << detail.string() << ", " << aggregate.string() << ", " << script.string() << '\n';
}

int cmd_validate_pr(const Config &cfg, const std::string &pr_path, double tol, std::ostream &out)
{
    const RisSpec spec = cfg.ris_spec();
    const PhaseResponse pr = read_phase_response(pr_path);
    const FeasibilityReport rep = validate(pr, spec, tol);
    out << "spec: " << spec.describe() << '\n'
        << "feasible: " << (rep.is_feasible ? "yes" : "no") << '\n'
        << "max_violation: " << num(rep.max_violation) << '\n'
        << "violated_constraint: " << (rep.violated_constraint.empty() ? "none" : rep.violated_constraint) << '\n';
    return rep.is_feasible ? kSuccess : kRuntimeFailure;
}

int cmd_complexity(const Config &cfg, std::ostream &out)
{
    const HardwareComplexity hc = hardware_complexity(cfg.ris_spec());
    out << hc.to_string();
    if (!hc.is_integral())
        out << " (non-integral)";
    out << '\n';
    return kSuccess;
}

int cmd_solve_one(const Config &cfg, int trial, const std::string &pr_out, std::ostream &out)
{
    require_rate_mode(cfg);
    const Scenario sc = cfg.scenario();
    const ChannelRealization ch = draw_trial(sc, cfg.num_elements, cfg.base_seed, trial);

    out << "realization: K=" << cfg.num_elements << " users=" << ch.num_users() << " trial=" << trial
        << " seed=" << cfg.base_seed << '\n';
    out << "scheme  sum_rate  rate_near  rate_far  alpha_near  alpha_far  iterations  converged\n";

    auto report = [&](Scheme s, const Solution &sol) {
        out << to_string(s) << "  " << num(sol.rates.sum_rate) << "  " << num(sol.rates.rate_near) << "  "
            << num(sol.rates.rate_far) << "  " << num(sol.allocation.alpha_near) << "  "
            << num(sol.allocation.alpha_far) << "  " << sol.trace.size() << "  " << (sol.converged ? "yes" : "no")
            << '\n';
    };

    BcdSettings cd_settings = sc.bcd;
    cd_settings.warm_start = WarmStart::identity();
    PhaseResponse start = PhaseResponse::identity(cfg.num_elements);
    bool outage = false;
    try
    {
        const Solution cd = bcd_solve(ch, cfg.problem(Scheme::CdRis), cd_settings);
        report(Scheme::CdRis, cd);
        start = cd.phase;
    }
    catch (const InfeasibleError &e)
    {
        out << "CD_RIS  outage (" << e.what() << ")\n";
        outage = true;
    }
    try
    {
        const Solution bd = bcd_solve(ch, cfg.problem(Scheme::BdRis), sc.bcd, start);
        report(Scheme::BdRis, bd);
        if (!pr_out.empty())
        {
            write_phase_response(bd.phase, pr_out);
            out << "wrote " << pr_out << '\n';
        }
    }
    catch (const InfeasibleError &e)
    {
        out << "BD_RIS  outage (" << e.what() << ")\n";
        outage = true;
    }
    return outage ? kRuntimeFailure : kSuccess;
}

int cmd_oracle_check(const Config &cfg, int instances, std::ostream &out)
{
    BcdSettings settings;
    settings.max_outer_iters = cfg.bcd_max_iters;
    settings.rate_tolerance = cfg.bcd_rate_tol;
    const OracleCheckReport rep = run_oracle_check(instances, cfg.base_seed, settings);
    const bool pair_ok = rep.pair_passed == rep.pair_instances;
    const bool single_ok = rep.single_passed == rep.single_instances;
    out << (pair_ok ? "PASS" : "FAIL") << "  two-user K=2 single-connected vs grid oracle: " << rep.pair_passed << "/"
        << rep.pair_instances << " within " << num(100 * kPairOracleTolerance)
        << "%, worst shortfall " << num(100 * rep.worst_pair_shortfall) << "%\n";
    out << (single_ok ? "PASS" : "FAIL") << "  single-user fully-connected vs |h_d| + |g||h|: " << rep.single_passed
        << "/" << rep.single_instances << " within " << num(100 * kSingleBoundTolerance)
        << "%, worst shortfall " << num(100 * rep.worst_single_shortfall) << "%\n";
    return rep.passed() ? kSuccess : kRuntimeFailure;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"BD-RIS aided NOMA LEO downlink simulator", "bdris-sim"};
    app.require_subcommand(0, 1);
    app.fallthrough();

    std::string config_path;
    std::vector<std::string> overrides;
    bool echo = false;
    unsigned threads = 1;
    app.add_option("--config", config_path, "Configuration file of 'key = value' lines");
    app.add_option("--set", overrides, "Override one key, 'key=value' (repeatable)")
        ->allow_extra_args(false)
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    app.add_flag("--echo-config", echo, "Print the effective configuration");
    app.add_option("--threads", threads, "Worker threads for sweeps (0 = all cores)");

    std::string pr_path;
    double tol = kDefaultFeasibilityTol;
    auto *validate_pr =
        app.add_subcommand("validate-pr", "Check a phase-response JSON file against the configured surface");
    validate_pr->add_option("--pr", pr_path, "Phase-response JSON file")->required();
    validate_pr->add_option("--tol", tol, "Feasibility tolerance");

    auto *complexity =
        app.add_subcommand("complexity", "Print the impedance-component count of the configured surface");

    int trial = 0;
    std::string pr_out;
    auto *solve_one = app.add_subcommand("solve-one", "Solve one channel realization with both schemes");
    solve_one->add_option("--trial", trial, "Trial index of the realization");
    solve_one->add_option("--pr-out", pr_out, "Write the BD-RIS phase response to this JSON file");

    std::vector<double> powers{0.0, 5.0, 10.0, 15.0, 20.0};
    auto *sweep_power = app.add_subcommand("sweep-power", "Spectral efficiency vs transmit power");
    sweep_power->add_option("--powers", powers, "Transmit powers in dBm")->delimiter(',');

    std::vector<int> elements{10, 20, 40, 80};
    auto *sweep_elements = app.add_subcommand("sweep-elements", "Spectral efficiency vs number of PREs");
    sweep_elements->add_option("--elements", elements, "Element counts")->delimiter(',');

    int instances = 20;
    auto *oracle = app.add_subcommand("oracle-check", "Compare the BCD solver with brute-force references");
    oracle->add_option("--instances", instances, "Instances per check");

    std::vector<std::string> argv_store{"bdris-sim"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char *> argv;
    for (auto &a : argv_store)
        argv.push_back(a.data());

    try
    {
        app.parse(static_cast<int>(argv.size()), argv.data());
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kConfigError;
    }

    Config cfg;
    try
    {
        if (!config_path.empty())
        {
            std::ifstream in(config_path);
            if (!in)
                throw ConfigError("cannot read config file " + config_path, "");
            cfg = parse_config(in);
        }
        for (const auto &kv : overrides)
        {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw ConfigError("--set expects key=value, got '" + kv + "'", "");
            apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
        }
        cfg.validate();
    }
    catch (const ConfigError &e)
    {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    }

    if (echo)
        out << echo_config(cfg);

    try
    {
        if (*validate_pr)
            return cmd_validate_pr(cfg, pr_path, tol, out);
        if (*complexity)
            return cmd_complexity(cfg, out);
        if (*solve_one)
            return cmd_solve_one(cfg, trial, pr_out, out);
        if (*sweep_power)
        {
            require_rate_mode(cfg);
            SweepSpec spec = sweep_spec(cfg, threads);
            spec.power_points_dbm = powers;
            spec.element_counts = {cfg.num_elements};
            write_sweep(run_power_sweep(spec), cfg, "power_sweep", out);
            return kSuccess;
        }
        if (*sweep_elements)
        {
            require_rate_mode(cfg);
            SweepSpec spec = sweep_spec(cfg, threads);
            spec.power_points_dbm = {cfg.power_dbm};
            spec.element_counts = elements;
            write_sweep(run_element_sweep(spec), cfg, "element_sweep", out);
            return kSuccess;
        }
        if (*oracle)
            return cmd_oracle_check(cfg, instances, out);
    }
    catch (const ConfigError &e)
    {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    }
    catch (const PhaseFileError &e)
    {
        err << "parse error: " << e.what() << '\n';
        return kConfigError;
    }
    catch (const SpecError &e)
    {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    }
    catch (const std::exception &e)
    {
        err << "error: " << e.what() << '\n';
        return kRuntimeFailure;
    }

    if (!echo)
    {
        err << app.help();
        return kConfigError;
    }
    return kSuccess;
}

} // namespace bdris::cli
