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

#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using namespace bdris;
namespace fs = std::filesystem;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::StartsWith;

namespace
{

struct Outcome
{
    int code;
    std::string out;
    std::string err;
};

Outcome run(const std::vector<std::string> &args)
{
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch()
{
    const fs::path dir = fs::temp_directory_path() / "bdris_test_cli";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path &p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// Small, strong link so the solver has something to do.
const std::vector<std::string> kSmall{"--set", "num_elements=8", "--set", "noise_dbm=-160", "--set", "trials=3"};

std::vector<std::string> with_small(std::vector<std::string> args)
{
    args.insert(args.end(), kSmall.begin(), kSmall.end());
    return args;
}

} // namespace

TEST_CASE("complexity", "[cli]")
{
    auto r = run({"complexity"});
    CHECK(r.code == 0);
    CHECK(r.out == "3240\n");

    r = run({"complexity", "--set", "architecture=single", "--set", "mode=hybrid"});
    CHECK(r.out == "120\n");

    r = run({"--set", "architecture=single", "complexity", "--set", "mode=hybrid", "--set", "num_elements=3"});
    CHECK(r.code == 0);
    CHECK(r.out == "9/2 (non-integral)\n");
}

TEST_CASE("usage and config errors exit with 2", "[cli]")
{
    auto r = run({"complexity", "--set", "bogus=1"});
    CHECK(r.code == 2);
    CHECK_THAT(r.err, ContainsSubstring("bogus"));
    CHECK(r.out.empty());

    CHECK(run({"complexity", "--set", "trials"}).code == 2);
    CHECK(run({"complexity", "--set", "architecture=group", "--set", "group_count=3"}).code == 2);
    CHECK(run({"teleport"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"complexity", "--config", (scratch() / "missing.cfg").string()}).code == 2);
    CHECK(run({"solve-one", "--set", "mode=hybrid"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("config file, overrides and echo", "[cli]")
{
    const fs::path cfg = scratch() / "run.cfg";
    std::ofstream(cfg) << "num_elements = 12\ntrials = 9\n";

    auto r = run({"--config", cfg.string(), "--set", "trials=4", "--echo-config"});
    CHECK(r.code == 0);
    CHECK_THAT(r.out, ContainsSubstring("num_elements = 12\n"));
    CHECK_THAT(r.out, ContainsSubstring("trials = 4\n"));

    const fs::path echoed = scratch() / "echoed.cfg";
    std::ofstream(echoed) << r.out;
    CHECK(run({"--config", echoed.string(), "--echo-config"}).out == r.out);

    r = run({"complexity", "--config", cfg.string(), "--echo-config"});
    CHECK_THAT(r.out, ContainsSubstring("num_elements = 12\n"));
    CHECK_THAT(r.out, ContainsSubstring("\n78\n"));
}

TEST_CASE("solve-one is deterministic and writes a feasible phase response", "[cli]")
{
    const fs::path pr = scratch() / "pr.json";
    const auto a = run(with_small({"solve-one", "--trial", "2", "--pr-out", pr.string()}));
    const auto b = run(with_small({"solve-one", "--trial", "2", "--pr-out", pr.string()}));
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK_THAT(a.out, ContainsSubstring("BD_RIS"));
    CHECK_THAT(a.out, ContainsSubstring("CD_RIS"));
    CHECK(run(with_small({"solve-one", "--trial", "3"})).out != a.out);

    const PhaseResponse loaded = cli::read_phase_response(pr);
    REQUIRE(loaded.size() == 1);
    CHECK(loaded.matrix().rows() == 8);

    auto v = run({"validate-pr", "--pr", pr.string(), "--set", "num_elements=8"});
    CHECK(v.code == 0);
    CHECK_THAT(v.out, ContainsSubstring("feasible: yes"));

    v = run({"validate-pr", "--pr", pr.string(), "--set", "num_elements=8", "--set", "architecture=single"});
    CHECK(v.code == 1);
    CHECK_THAT(v.out, ContainsSubstring("feasible: no"));

    v = run({"validate-pr", "--pr", pr.string()});
    CHECK(v.code == 1);
}

TEST_CASE("solve-one reports outage", "[cli]")
{
    const auto r = run(with_small({"solve-one", "--set", "min_rate_far=1000"}));
    CHECK(r.code == 1);
    CHECK_THAT(r.out, ContainsSubstring("outage"));
}

TEST_CASE("phase-response files", "[cli]")
{
    const fs::path p = scratch() / "hybrid.json";
    const CMatrix half = CMatrix::Identity(2, 2) / std::sqrt(2.0);
    CMatrix rotated = half;
    rotated(0, 0) = half(0, 0) * cplx(0.0, 1.0);
    cli::write_phase_response(PhaseResponse(std::vector<CMatrix>{half, rotated}), p);
    const PhaseResponse back = cli::read_phase_response(p);
    REQUIRE(back.size() == 2);
    CHECK(back.matrix(1) == rotated);

    const auto r = run({"validate-pr", "--pr", p.string(), "--set", "num_elements=2", "--set", "mode=hybrid",
                        "--set", "architecture=single"});
    CHECK(r.code == 0);

    const fs::path broken = scratch() / "broken.json";
    std::ofstream(broken) << "{\"matrices\": [{\"re\": [[1, 0], [0]], \"im\": [[0, 0], [0, 0]]}]}";
    CHECK_THROWS_AS(cli::read_phase_response(broken), cli::PhaseFileError);
    CHECK(run({"validate-pr", "--pr", broken.string()}).code == 2);

    const fs::path garbage = scratch() / "garbage.json";
    std::ofstream(garbage) << "not json";
    CHECK(run({"validate-pr", "--pr", garbage.string()}).code == 2);
    CHECK(run({"validate-pr", "--pr", (scratch() / "nope.json").string()}).code == 2);
    CHECK(run({"validate-pr"}).code == 2);
}

TEST_CASE("sweeps write CSVs and a plot script", "[cli]")
{
    const fs::path dir = scratch() / "sweeps";
    fs::remove_all(dir);
    auto r = run(with_small({"sweep-power", "--powers", "0,10", "--set", "out_dir=" + dir.string()}));
    REQUIRE(r.code == 0);
    CHECK(fs::exists(dir / "power_sweep_detail.csv"));
    CHECK(fs::exists(dir / "power_sweep_aggregate.csv"));
    CHECK(fs::exists(dir / "power_sweep.gp"));
    CHECK_THAT(slurp(dir / "power_sweep_detail.csv"),
               StartsWith("power_dbm,num_elements,scheme,trial,rate_near,rate_far,sum_rate,outage\n"));
    const std::string single_thread = slurp(dir / "power_sweep_detail.csv");

    r = run(with_small({"sweep-power", "--powers", "0,10", "--threads", "2", "--set", "out_dir=" + dir.string()}));
    REQUIRE(r.code == 0);
    CHECK(slurp(dir / "power_sweep_detail.csv") == single_thread);

    r = run(with_small({"sweep-elements", "--elements", "2,4", "--set", "out_dir=" + dir.string()}));
    REQUIRE(r.code == 0);
    CHECK_THAT(slurp(dir / "element_sweep.gp"), ContainsSubstring("Number of PREs"));
    CHECK_THAT(slurp(dir / "element_sweep_aggregate.csv"), ContainsSubstring("20.000000,4,CD_RIS,"));
}

TEST_CASE("oracle-check", "[cli]")
{
    const auto r = run({"oracle-check", "--instances", "2"});
    CHECK(r.code == 0);
    CHECK_THAT(r.out, StartsWith("PASS"));
}
