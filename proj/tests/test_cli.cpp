// Copyright 2026 The irrcorr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "irrcorr/cli/app.hpp"

namespace {

namespace fs = std::filesystem;
using irrcorr::cli::json;

const double ln2 = std::numbers::ln2;

std::string mask_path(const std::string &name) {
    return std::string(IRRCORR_SOURCE_DIR) + "/configs/masks/" + name + ".json";
}

fs::path scratch(const std::string &name) {
    const auto dir = fs::temp_directory_path() / ("irrcorr_cli_test_" + name);
    fs::remove_all(dir);
    return dir;
}

struct Run {
    int code;
    json report;
    std::string err;
};

Run run(json cfg, const std::string &tag) {
    const auto dir = scratch(tag);
    cfg["output"]["dir"] = dir.string();
    std::ostringstream echo, err;
    const int code = irrcorr::cli::run(cfg, echo, err);
    json report = echo.str().empty() ? json() : json::parse(echo.str());
    return {code, report, err.str()};
}

TEST(Cli, TeeOnDiskMask) {
    const auto r = run({{"command", "tee"}, {"model", "toric"}, {"mask", mask_path("kp-disk")}}, "tee");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.report["result"]["stabilizer"]["gamma_bits"], 1);
    EXPECT_NEAR(r.report["result"]["stabilizer"]["gamma"].get<double>(), ln2, 1e-12);
    EXPECT_EQ(r.report["exit_code"], 0);
}

TEST(Cli, TeeOnAnnulusMergesExactly) {
    const auto r = run({{"command", "tee"}, {"mask", mask_path("lw-annulus")}}, "tee_annulus");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.report["result"]["stabilizer"]["gamma_bits"], 2);
    EXPECT_NEAR(r.report["result"]["dense"]["C3"].get<double>(), 2 * ln2, 1e-6);
}

TEST(Cli, IrrcorrGhz) {
    const auto r = run({{"command", "irrcorr"}, {"model", "ghz3"}}, "ghz");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NEAR(r.report["result"]["dense"]["C3"].get<double>(), ln2, 1e-4);
}

TEST(Cli, MergeRandomMarkovState) {
    const auto r = run({{"command", "merge"}, {"model", "random-qms"}, {"seed", 7}}, "merge");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_LE(r.report["result"]["marginal_residual"].get<double>(), 1e-8);
}

TEST(Cli, MarkovExitCodes) {
    const auto ok = run({{"command", "markov"}, {"model", "random-qms"}, {"seed", 7}}, "markov_ok");
    EXPECT_EQ(ok.code, 0) << ok.err;
    EXPECT_TRUE(ok.report["result"]["is_markov"].get<bool>());
    const auto ghz = run({{"command", "markov"}, {"model", "ghz3"}}, "markov_ghz");
    EXPECT_EQ(ghz.code, irrcorr::cli::kAssumption);
    EXPECT_FALSE(ghz.report["result"]["is_markov"].get<bool>());
}

TEST(Cli, NonConvergenceReportsBestIterate) {
    const auto r = run({{"command", "irrcorr"}, {"model", "w"}, {"tolerances", {{"max_iter", 100}}}}, "w");
    EXPECT_EQ(r.code, irrcorr::cli::kConvergence);
    EXPECT_EQ(r.report["error"]["kind"], "ConvergenceFailure");
    EXPECT_EQ(r.report["result"]["best_iterate"]["iterations"], 100);
    EXPECT_FALSE(r.err.empty());
}

TEST(Cli, ConfigErrors) {
    EXPECT_EQ(run({{"colour", 1}}, "bad1").code, irrcorr::cli::kConfig);
    EXPECT_EQ(run({{"tolerances", {{"speed", 1}}}}, "bad2").code, irrcorr::cli::kConfig);
    EXPECT_EQ(run({{"command", "fly"}}, "bad3").code, irrcorr::cli::kConfig);
    EXPECT_EQ(run({{"command", "tee"}}, "bad4").code, irrcorr::cli::kConfig);  // toric without a mask
    EXPECT_EQ(run({{"command", "merge"}, {"model", "random-qms"}}, "bad5").code, irrcorr::cli::kConfig);
    // Lattice must agree with the mask.
    EXPECT_EQ(run({{"mask", mask_path("kp-disk")}, {"lattice", {{"Lx", 5}, {"Ly", 5}}}}, "bad6").code,
              irrcorr::cli::kConfig);
}

TEST(Cli, SameConfigSameReport) {
    const json cfg = {{"command", "secret-rate"}, {"model", "toy"}, {"seed", 11}, {"monte_carlo_samples", 64}};
    const auto a = run(cfg, "det_a");
    const auto b = run(cfg, "det_b");
    ASSERT_EQ(a.code, 0) << a.err;
    json ra = a.report, rb = b.report;
    ra["config"].erase("output");
    rb["config"].erase("output");
    EXPECT_EQ(ra["result"], rb["result"]);
    EXPECT_EQ(ra["config"], rb["config"]);
}

TEST(Cli, WritesReportFiles) {
    const auto dir = scratch("files");
    json cfg = {{"command", "approx-sweep"},
                {"mask", mask_path("lw-annulus")},
                {"output", {{"dir", dir.string()}, {"format", "csv"}, {"plot", true}}}};
    std::ostringstream echo, err;
    ASSERT_EQ(irrcorr::cli::run(cfg, echo, err), 0) << err.str();
    for (const char *f : {"approx-sweep.json", "approx-sweep.csv", "approx-sweep.svg"}) {
        EXPECT_TRUE(fs::exists(dir / f)) << f;
    }
    std::ifstream in(dir / "approx-sweep.json");
    EXPECT_EQ(json::parse(in), json::parse(echo.str()));
}

// The binary, driven through a shell.
int shell(const std::string &cmd, std::string *out = nullptr) {
    FILE *p = popen(cmd.c_str(), "r");
    if (!p) return -1;
    std::string text;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) text.append(buf, n);
    const int status = pclose(p);
    if (out) *out = text;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const std::string kCli = IRRCORR_CLI_PATH;

TEST(CliBinary, FlagsAndExitCodes) {
    const auto dir = scratch("bin");
    std::string out;
    EXPECT_EQ(shell(kCli + " tee --mask " + mask_path("kp-disk") + " --out " + dir.string() + " 2>/dev/null", &out), 0);
    EXPECT_NEAR(json::parse(out)["result"]["stabilizer"]["gamma"].get<double>(), ln2, 1e-12);
    EXPECT_EQ(shell(kCli + " --help >/dev/null"), 0);
    EXPECT_EQ(shell(kCli + " tee --no-such-flag 2>/dev/null"), 4);
    EXPECT_EQ(shell(kCli + " markov --model ghz3 --out " + dir.string() + " >/dev/null 2>&1"), 2);
}

TEST(CliBinary, ConfigFromStdin) {
    const auto dir = scratch("stdin");
    std::string out;
    const std::string cfg = R"({"command": "irrcorr", "model": "bell"})";
    EXPECT_EQ(shell("echo '" + cfg + "' | " + kCli + " --config - --out " + dir.string() + " 2>/dev/null", &out), 0);
    EXPECT_NEAR(json::parse(out)["result"]["dense"]["C2"].get<double>(), 2 * ln2, 1e-9);
    EXPECT_EQ(shell("echo '{not json' | " + kCli + " --config - 2>/dev/null"), 4);
}

}  // namespace
