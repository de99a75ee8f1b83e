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


// Command-line front-end: flags and an optional JSON config (file or "-" for
// stdin) are folded into one config and handed to irrcorr::cli::run.

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "irrcorr/cli/app.hpp"

namespace {

using irrcorr::cli::json;

struct Flags {
    std::string config;
    std::optional<std::string> model, mask, state, out, format;
    std::optional<std::size_t> lx, ly, max_iter, mc_samples;
    std::optional<std::uint64_t> seed;
    std::optional<double> assumption_tol, markov_tol, maxent_tol, eps, degeneracy_tol;
    std::vector<double> sweep;
    bool plot = false;
};

void add_flags(CLI::App *sub, Flags &f) {
    sub->add_option("--config", f.config, "JSON config file, or - for stdin");
    sub->add_option("--model", f.model, "toric, file, ghz3, w, bell, product, random-qms, toy");
    sub->add_option("--mask", f.mask, "region mask JSON (toric model)");
    sub->add_option("--state", f.state, "density matrix JSON (file model)");
    sub->add_option("--Lx", f.lx, "lattice width; must match the mask");
    sub->add_option("--Ly", f.ly, "lattice height; must match the mask");
    sub->add_option("--seed", f.seed, "seed for randomized paths");
    sub->add_option("--out", f.out, "output directory (default $IRRCORR_OUTPUT_DIR or .)");
    sub->add_option("--format", f.format, "json or csv");
    sub->add_flag("--plot", f.plot, "write an SVG chart for sweeps");
    sub->add_option("--assumption-tol", f.assumption_tol, "merge assumption tolerance");
    sub->add_option("--markov-tol", f.markov_tol, "Markov decomposition tolerance");
    sub->add_option("--maxent-tol", f.maxent_tol, "iterative solver marginal tolerance");
    sub->add_option("--max-iter", f.max_iter, "iterative solver iteration cap");
    sub->add_option("--eps", f.eps, "regularizer for zero eigenvalues");
    sub->add_option("--degeneracy-tol", f.degeneracy_tol, "relative eigenvalue grouping tolerance");
    sub->add_option("--mc-samples", f.mc_samples, "Monte Carlo draws for the twirl check");
    sub->add_option("--p", f.sweep, "depolarizing strengths for approx-sweep");
}

json read_config(const std::string &path) {
    if (path.empty()) return json::object();
    try {
        if (path == "-") {
            // Slurp first; parsing straight from the synced cin buffer spins at EOF.
            std::ostringstream text;
            text << std::cin.rdbuf();
            return json::parse(text.str());
        }
        return irrcorr::cli::read_json_file(path);
    } catch (const json::exception &e) {
        irrcorr::fail(irrcorr::ErrorKind::ConfigError, std::string("config: ") + e.what());
    }
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"irrcorr: topological entanglement entropy, irreducible correlation and secret-sharing rates"};
    app.require_subcommand(0, 1);
    Flags flags;
    add_flags(&app, flags);
    std::vector<std::pair<std::string, CLI::App *>> subs;
    for (const char *name : irrcorr::cli::kCommands) {
        auto *sub = app.add_subcommand(name, std::string("run ") + name);
        add_flags(sub, flags);
        subs.emplace_back(name, sub);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : irrcorr::cli::kConfig;
    }

    json cfg;
    try {
        cfg = read_config(flags.config);
        if (!cfg.is_object()) irrcorr::fail(irrcorr::ErrorKind::ConfigError, "config must be a JSON object");
    } catch (const irrcorr::Error &e) {
        std::cerr << e.what() << "\n";
        return irrcorr::cli::kConfig;
    }
    for (const auto &[name, sub] : subs) {
        if (sub->parsed()) cfg["command"] = name;
    }
    if (flags.model) cfg["model"] = *flags.model;
    if (flags.mask) cfg["mask"] = *flags.mask;
    if (flags.state) cfg["state_file"] = *flags.state;
    if (flags.lx) cfg["lattice"]["Lx"] = *flags.lx;
    if (flags.ly) cfg["lattice"]["Ly"] = *flags.ly;
    if (flags.seed) cfg["seed"] = *flags.seed;
    if (flags.out) cfg["output"]["dir"] = *flags.out;
    if (flags.format) cfg["output"]["format"] = *flags.format;
    if (flags.plot) cfg["output"]["plot"] = true;
    if (flags.assumption_tol) cfg["tolerances"]["assumption"] = *flags.assumption_tol;
    if (flags.markov_tol) cfg["tolerances"]["markov"] = *flags.markov_tol;
    if (flags.maxent_tol) cfg["tolerances"]["maxent"] = *flags.maxent_tol;
    if (flags.max_iter) cfg["tolerances"]["max_iter"] = *flags.max_iter;
    if (flags.eps) cfg["tolerances"]["eps"] = *flags.eps;
    if (flags.degeneracy_tol) cfg["tolerances"]["degeneracy"] = *flags.degeneracy_tol;
    if (flags.mc_samples) cfg["monte_carlo_samples"] = *flags.mc_samples;
    if (!flags.sweep.empty()) cfg["sweep"]["p"] = flags.sweep;
    return irrcorr::cli::run(cfg, std::cout, std::cerr);
}
