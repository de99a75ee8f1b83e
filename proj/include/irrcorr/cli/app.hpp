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


#pragma once

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include "irrcorr/approx/bounds.hpp"
#include "irrcorr/io/mask.hpp"
#include "irrcorr/io/report.hpp"
#include "irrcorr/markov/random_state.hpp"
#include "irrcorr/markov/recovery.hpp"
#include "irrcorr/secret/rate.hpp"

namespace irrcorr::cli {

using io::json;

enum ExitCode : int { kOk = 0, kFailure = 1, kAssumption = 2, kConvergence = 3, kConfig = 4 };

inline const char *const kCommands[] = {"tee", "irrcorr", "markov", "merge", "secret-rate", "approx-sweep"};
inline const char *const kModels[] = {"toric", "file", "ghz3", "w", "bell", "product", "random-qms", "toy"};

/// Defaults for every key a config may carry; anything else is rejected.
inline json default_config() {
    return {{"command", "tee"},
            {"model", "toric"},
            {"lattice", {{"Lx", nullptr}, {"Ly", nullptr}}},
            {"mask", nullptr},
            {"state_file", nullptr},
            {"seed", nullptr},
            {"tolerances",
             {{"assumption", 1e-7},
              {"markov", 1e-7},
              {"maxent", 1e-9},
              {"max_iter", 20000},
              {"eps", 1e-13},
              {"degeneracy", 1e-9}}},
            {"sweep", {{"p", {0.0, 1e-4, 1e-3}}}},
            {"monte_carlo_samples", 256},
            {"output", {{"dir", nullptr}, {"format", "json"}, {"plot", false}}}};
}

/// Overlays `user` on `base`, rejecting keys the base does not have.
inline void merge_config(json &base, const json &user, const std::string &where = "config") {
    if (!user.is_object()) fail(ErrorKind::ConfigError, where + " must be an object");
    for (const auto &[key, value] : user.items()) {
        if (!base.contains(key)) fail(ErrorKind::ConfigError, "unknown key '" + key + "' in " + where);
        json &slot = base[key];
        if (slot.is_object() && key != "mask") {
            merge_config(slot, value, where + "." + key);
        } else {
            slot = value;
        }
    }
}

inline json validated(const json &user) {
    json cfg = default_config();
    merge_config(cfg, user);
    const auto in = [](const std::string &v, const auto &list) {
        return std::any_of(std::begin(list), std::end(list), [&](const char *x) { return v == x; });
    };
    if (!cfg["command"].is_string() || !in(cfg["command"].get<std::string>(), kCommands)) {
        fail(ErrorKind::ConfigError, "command must be one of tee, irrcorr, markov, merge, secret-rate, approx-sweep");
    }
    if (!cfg["model"].is_string() || !in(cfg["model"].get<std::string>(), kModels)) {
        fail(ErrorKind::ConfigError, "unsupported model " + cfg["model"].dump());
    }
    const std::string model = cfg["model"];
    if ((model == "random-qms" || model == "product") && cfg["seed"].is_null()) {
        fail(ErrorKind::ConfigError, "model '" + model + "' is randomized and needs a seed");
    }
    if (model == "toric" && cfg["mask"].is_null()) fail(ErrorKind::ConfigError, "toric model needs a mask");
    if (model == "file" && cfg["state_file"].is_null()) fail(ErrorKind::ConfigError, "file model needs state_file");
    const std::string fmt = cfg["output"]["format"];
    if (fmt != "json" && fmt != "csv") fail(ErrorKind::ConfigError, "output.format must be json or csv");
    return cfg;
}

inline std::uint64_t seed_of(const json &cfg) { return cfg["seed"].is_null() ? 7 : cfg["seed"].get<std::uint64_t>(); }

/// A state with its A | B | C regions and optional splits.
struct Problem {
    DensityMatrix rho;
    TeeRegions regions;
    std::optional<io::LoadedMask> mask;
    std::optional<StabilizerTableau> tableau;
};

inline json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::ConfigError, "cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception &e) {
        fail(ErrorKind::ConfigError, path + ": " + e.what());
    }
}

// Largest region handed to the iterative maxent solver by `tee`.
inline constexpr std::size_t kIterativeQubitLimit = 8;

inline Problem make_problem(const json &cfg) {
    const std::string model = cfg["model"];
    const std::uint64_t seed = seed_of(cfg);
    auto three = [](DensityMatrix rho) { return Problem{std::move(rho), TeeRegions{{"A"}, {"B"}, {"C"}, {}, {}}, {}, {}}; };
    const FactorLayout qubits({{"A", 2}, {"B", 2}, {"C", 2}});
    if (model == "toric") {
        const json mj = cfg["mask"].is_string() ? read_json_file(cfg["mask"]) : cfg["mask"];
        auto loaded = io::mask_from_json(mj);
        for (const auto &[key, dim] : {std::pair{"Lx", loaded.lattice.Lx}, std::pair{"Ly", loaded.lattice.Ly}}) {
            const auto &want = cfg["lattice"][key];
            if (!want.is_null() && want.get<std::size_t>() != dim) {
                fail(ErrorKind::ConfigError, std::string("lattice ") + key + " = " + want.dump() +
                                                 " does not match the mask's " + std::to_string(dim));
            }
        }
        StabilizerTableau tab = toric_ground_state(loaded.lattice);
        auto regions = io::tee_regions(loaded.mask);
        const auto n = loaded.mask.ABC().size();
        const bool tee_only = cfg["command"] == "tee" && !regions.b_split && !regions.ring && n > kIterativeQubitLimit;
        auto rho = n <= kDenseQubitLimit && !tee_only
                       ? std::optional<DensityMatrix>(rdm_dense(tab, loaded.mask.ABC()))
                       : std::nullopt;
        if (!rho) {
            // Stabilizer-only: a placeholder single-site state keeps the struct uniform.
            rho = DensityMatrix::maximally_mixed(FactorLayout({{"none", 1}}));
        }
        return Problem{*rho, std::move(regions), loaded, std::move(tab)};
    }
    if (model == "file") {
        const json j = read_json_file(cfg["state_file"]);
        auto rho = io::density_from_json(j.contains("state") ? j.at("state") : j);
        TeeRegions r{{"A"}, {"B"}, {"C"}, {}, {}};
        if (j.contains("regions")) {
            const auto &g = j.at("regions");
            r.A = g.at("A").get<LabelSet>();
            r.B = g.at("B").get<LabelSet>();
            r.C = g.at("C").get<LabelSet>();
            if (g.contains("B1")) r.b_split = std::make_pair(g.at("B1").get<LabelSet>(), g.at("B2").get<LabelSet>());
        }
        return Problem{std::move(rho), r, {}, {}};
    }
    if (model == "ghz3" || model == "w") {
        Vector psi = Vector::Zero(8);
        if (model == "ghz3") {
            psi(0) = psi(7) = 1;
        } else {
            psi(1) = psi(2) = psi(4) = 1;
        }
        return three(DensityMatrix::pure(qubits, psi));
    }
    if (model == "bell") {
        Vector psi = Vector::Zero(8);
        psi(0) = psi(6) = 1;  // (|00> + |11>)_AB ⊗ |0>_C
        return three(DensityMatrix::pure(qubits, psi));
    }
    if (model == "product") {
        std::mt19937_64 rng(seed);
        DensityMatrix out = DensityMatrix(FactorLayout({{"A", 2}}), random_density(2, rng), DensityMatrix::Trusted{});
        for (const char *l : {"B", "C"}) {
            out = tensor(out, DensityMatrix(FactorLayout({{l, 2}}), random_density(2, rng), DensityMatrix::Trusted{}));
        }
        return three(out);
    }
    if (model == "toy") {
        return Problem{parity_toy_state(), TeeRegions{{"A"}, {"B1", "B2"}, {"C"}, std::make_pair(LabelSet{"B1"}, LabelSet{"B2"}), {}},
                       {}, {}};
    }
    // random-qms: annulus-type Markov state with B = B1 (B2a B2b).
    auto rho = random_annulus_state(2, {{1, 2}, {2, 1}}, 2, 2, 2, seed);
    return Problem{rho,
                   TeeRegions{{"A"}, {"B1", "B2a", "B2b"}, {"C"}, std::make_pair(LabelSet{"B1"}, LabelSet{"B2a", "B2b"}), {}},
                   {}, {}};
}

inline MaxentOptions maxent_options(const json &cfg) {
    MaxentOptions o;
    const auto &t = cfg["tolerances"];
    o.tol = t["maxent"];
    o.max_iter = t["max_iter"];
    o.eps = t["eps"];
    return o;
}

inline void require_dense(const Problem &p) {
    if (p.rho.layout().size() == 1 && p.rho.labels().front() == "none") {
        fail(ErrorKind::DenseLimitExceeded, "region exceeds the dense limit of " + std::to_string(kDenseQubitLimit) +
                                                " qubits; only the stabilizer path is available");
    }
}

inline std::pair<LabelSet, LabelSet> require_split(const Problem &p) {
    if (!p.regions.b_split) fail(ErrorKind::ConfigError, "this command needs a B1/B2 split of B");
    return *p.regions.b_split;
}

/// Result of one command: the JSON payload, optional CSV / SVG side files,
/// and the exit code.
struct Outcome {
    json result;
    std::string csv;
    std::string svg;
    int code = kOk;
};

inline Outcome run_tee(const json &cfg, const Problem &p, bool dense_only) {
    Outcome out;
    if (p.tableau && !dense_only) {
        const long bits = tee_bits(*p.tableau, p.mask->mask);
        out.result["stabilizer"] = {{"gamma_bits", bits},
                                    {"gamma", static_cast<double>(bits) * std::numbers::ln2},
                                    {"mask", io::mask_to_json(*p.mask)}};
        const auto n = p.mask->mask.ABC().size();
        // Without a split C^(3) needs the iterative solver, which is only
        // practical on small regions.
        if (n > kDenseQubitLimit || (!p.regions.b_split && !p.regions.ring && n > kIterativeQubitLimit)) {
            out.result["dense"] = nullptr;
            out.result["notes"] = {"C^(3) skipped: region too large for the iterative solver and no merge split"};
            return out;
        }
    }
    const auto rep = tee_dense(p.rho, p.regions, maxent_options(cfg), seed_of(cfg), cfg["tolerances"]["assumption"]);
    out.result["dense"] = io::to_json(rep);
    out.csv = io::csv_header_correlation() + io::csv_row(p.mask ? std::string(to_string(p.mask->mask.geometry)) : cfg["model"].get<std::string>(), rep);
    if (rep.assumption_violated && (p.regions.b_split || p.regions.ring)) out.code = kAssumption;
    return out;
}

inline Outcome run_markov(const json &cfg, const Problem &p) {
    require_dense(p);
    Outcome out;
    const auto &r = p.regions;
    const double tol = cfg["tolerances"]["markov"];
    const auto check = is_qms(p.rho, r.A, r.B, r.C, tol);
    out.result["is_markov"] = check.is_markov;
    out.result["cmi"] = check.cmi;
    out.result["recovery_error"] = check.recovery_error;
    if (!check.is_markov) {
        out.code = kAssumption;
        return out;
    }
    const auto dec = markov_decompose(p.rho, r.A, r.B, r.C, seed_of(cfg), tol);
    json shape = json::array();
    for (const auto &[n, m] : dec.shape()) shape.push_back({n, m});
    out.result["shape"] = shape;
    out.result["reconstruction_error"] = trace_distance(reconstruct(dec), p.rho.reordered(dec.layout.labels()));
    out.result["decomposition"] = io::decomposition_to_json(dec);
    return out;
}

inline Outcome run_merge(const json &cfg, const Problem &p) {
    require_dense(p);
    Outcome out;
    const auto &r = p.regions;
    if (r.ring) {
        const auto m = merge_ring(p.rho, *r.ring, cfg["tolerances"]["assumption"], seed_of(cfg));
        out.result["method"] = "merge-ring";
        out.result["weight_sum"] = m.weight_sum;
        out.result["marginal_residual"] =
            max_marginal_distance(m.state, p.rho.reordered(m.state.labels()),
                                  {set_union(r.A, r.B), set_union(r.B, r.C), set_union(r.C, r.A)});
        out.result["C3"] = von_neumann_entropy(m.state) - von_neumann_entropy(p.rho);
        return out;
    }
    const auto [b1, b2] = require_split(p);
    const auto res = annulus_residuals(p.rho, r.A, b1, b2, r.C);
    out.result["residuals"] = io::residuals_to_json(res);
    const auto merged = merge_annulus(p.rho, r.A, b1, b2, r.C, cfg["tolerances"]["assumption"]);
    out.result["method"] = "merge-annulus";
    out.result["marginal_residual"] =
        max_marginal_distance(merged, p.rho, {set_union(r.A, r.B), set_union(r.B, r.C), set_union(r.C, r.A)});
    out.result["C3"] = von_neumann_entropy(merged) - von_neumann_entropy(p.rho);
    out.result["cmi"] = conditional_mutual_information(p.rho, r.A, r.B, r.C);
    return out;
}

inline Outcome run_secret(const json &cfg, const Problem &p) {
    require_dense(p);
    RateOptions opt;
    opt.seed = seed_of(cfg);
    opt.tol = cfg["tolerances"]["assumption"];
    opt.rel_tol = cfg["tolerances"]["degeneracy"];
    opt.mc_samples = cfg["monte_carlo_samples"];
    Outcome out;
    if (p.regions.ring) {
        out.result = io::to_json(rate_report_ring(p.rho, *p.regions.ring, opt));
    } else {
        const auto [b1, b2] = require_split(p);
        out.result = io::to_json(rate_report(p.rho, p.regions.A, b1, b2, p.regions.C, opt));
    }
    return out;
}

inline Outcome run_approx(const json &cfg, const Problem &p) {
    require_dense(p);
    const auto [b1, b2] = require_split(p);
    Outcome out;
    json points = json::array();
    std::vector<double> ps, eps, delta, chat, cmi, f;
    std::ostringstream csv;
    csv << "p,epsilon,delta,delta_achieved,f_delta,C_hat,cmi,lower_holds,upper_holds\n";
    std::vector<double> grid;
    for (const auto &pv : cfg["sweep"]["p"]) {
        const double pr = pv.get<double>();
        if (!(pr >= 0 && pr <= 1)) fail(ErrorKind::ConfigError, "sweep p values must lie in [0, 1]");
        grid.push_back(pr);
    }
    // Points are independent; evaluate them on a bounded pool, collect in order.
    std::vector<BoundReport> reports;
    const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
    for (std::size_t lo = 0; lo < grid.size(); lo += workers) {
        std::vector<std::future<BoundReport>> batch;
        for (std::size_t i = lo; i < std::min(grid.size(), lo + workers); ++i) {
            batch.push_back(std::async(std::launch::async, [&, pr = grid[i]] {
                return bound_check(depolarize_all(p.rho, pr), p.regions.A, b1, b2, p.regions.C);
            }));
        }
        for (auto &fut : batch) reports.push_back(fut.get());
    }
    bool all = true;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double pr = grid[i];
        const auto &r = reports[i];
        json pt = io::to_json(r);
        pt["p"] = pr;
        points.push_back(pt);
        all = all && r.holds() && r.delta_ok;
        ps.push_back(pr);
        eps.push_back(r.params.epsilon);
        delta.push_back(r.params.delta);
        chat.push_back(r.c_hat);
        cmi.push_back(r.cmi);
        f.push_back(r.f_delta);
        csv << io::cell(pr) << "," << io::cell(r.params.epsilon) << "," << io::cell(r.params.delta) << ","
            << io::cell(r.delta_achieved) << "," << io::cell(r.f_delta) << "," << io::cell(r.c_hat) << ","
            << io::cell(r.cmi) << "," << (r.lower_ok ? "true" : "false") << "," << (r.upper_ok ? "true" : "false") << "\n";
    }
    out.result = {{"points", points}, {"all_hold", all}};
    out.csv = csv.str();
    if (cfg["output"]["plot"].get<bool>()) {
        out.svg = io::svg_line_chart("bound chain vs depolarizing strength", "p", ps,
                                     {{"C_hat", chat}, {"I(A:C|B)", cmi}, {"f(delta)", f}, {"delta", delta}});
    }
    return out;
}

inline std::filesystem::path output_dir(const json &cfg) {
    if (!cfg["output"]["dir"].is_null()) return cfg["output"]["dir"].get<std::string>();
    if (const char *env = std::getenv("IRRCORR_OUTPUT_DIR"); env && *env) return env;
    return ".";
}

/// Runs a validated config, writes <command>.json (and .csv / .svg when
/// produced) into the output directory, and returns the exit code. The
/// report is also written to `echo`.
inline int run(const json &user, std::ostream &echo, std::ostream &err) {
    json cfg;
    try {
        cfg = validated(user);
    } catch (const Error &e) {
        err << e.what() << "\n";
        return kConfig;
    }
    const std::string command = cfg["command"];
    json report = {{"command", command},
                   {"config_hash", io::hex64(io::fnv1a64(cfg.dump()))},
                   {"config", cfg},
                   {"tolerances", cfg["tolerances"]},
                   {"seed", seed_of(cfg)}};
    Outcome out;
    try {
        const Problem p = make_problem(cfg);
        if (command == "tee") {
            out = run_tee(cfg, p, false);
        } else if (command == "irrcorr") {
            require_dense(p);
            out = run_tee(cfg, p, true);
        } else if (command == "markov") {
            out = run_markov(cfg, p);
        } else if (command == "merge") {
            out = run_merge(cfg, p);
        } else if (command == "secret-rate") {
            out = run_secret(cfg, p);
        } else {
            out = run_approx(cfg, p);
        }
    } catch (const ConvergenceError &e) {
        report["error"] = {{"kind", "ConvergenceFailure"}, {"message", e.what()}};
        const auto &b = e.best();
        out.result["best_iterate"] = {{"entropy", io::number(von_neumann_entropy(b.state))},
                                      {"iterations", b.iterations},
                                      {"residual", io::number(b.residual)}};
        out.code = kConvergence;
    } catch (const Error &e) {
        report["error"] = {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
        switch (e.kind()) {
            case ErrorKind::AssumptionViolated: out.code = kAssumption; break;
            case ErrorKind::ConvergenceFailure: out.code = kConvergence; break;
            case ErrorKind::ConfigError:
            case ErrorKind::InvalidMask:
            case ErrorKind::InvalidLattice: out.code = kConfig; break;
            default: out.code = kFailure; break;
        }
    }
    report["result"] = out.result;
    report["exit_code"] = out.code;

    const auto dir = output_dir(cfg);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    const std::string text = report.dump(2) + "\n";
    {
        std::ofstream f(dir / (command + ".json"));
        f << text;
        if (!f) err << "cannot write " << (dir / (command + ".json")).string() << "\n";
    }
    if (cfg["output"]["format"] == "csv" && !out.csv.empty()) std::ofstream(dir / (command + ".csv")) << out.csv;
    if (!out.svg.empty()) std::ofstream(dir / (command + ".svg")) << out.svg;
    echo << text;
    if (report.contains("error")) err << report["error"]["message"].get<std::string>() << "\n";
    return out.code;
}

}  // namespace irrcorr::cli
