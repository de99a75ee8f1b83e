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

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "irrcorr/core/entropy.hpp"
#include "irrcorr/maxent/merge.hpp"
#include "irrcorr/secret/twirl.hpp"

namespace irrcorr {

/// Eigenvalue-count bound for N copies, in both readings of the type-counting
/// estimate: ln D_N <= d ln(N+1) and D_N <= (ln(N+1))^d.
struct NCopyBound {
    int N = 1;
    std::size_t count = 1;       // distinct eigenvalues of the N-fold product
    double log_count = 0;        // ln D_N
    double polynomial_bound = 0; // d ln(N+1)
    bool polynomial_holds = true;
    double literal_bound = 0;    // d ln ln(N+1), may be -inf
    bool literal_holds = true;
};

struct RateReport {
    std::string geometry;
    double S_bar = 0;
    double S_tilde = 0;
    double S_rho = 0;
    double C3 = 0;
    double logD = 0;
    double slack = 0;
    std::size_t D = 1;
    std::size_t cut_dim = 1;  // d_{AB^L}
    // Closed forms, annulus geometry only.
    std::optional<double> S_bar_formula;
    std::optional<double> S_tilde_formula;
    double marginal_error = 0;  // 2-RDMs of the averaged state vs rho
    std::size_t mc_samples = 0;
    double mc_deviation = 0;    // trace norm of the sample mean minus the exact average
    double mc_max_entry = 0;    // largest entrywise deviation of the sample mean
    double codebook_error = 0;  // worst 2-RDM deviation over sampled members
    std::vector<NCopyBound> N_bounds;
};

struct RateOptions {
    std::uint64_t seed = 7;
    double tol = 1e-7;
    double rel_tol = tol::degeneracy;
    std::size_t mc_samples = 256;
    int max_copies = 3;
};

namespace detail {

/// Distinct values of a positive list, grouped at relative tolerance.
inline std::vector<double> distinct_values(std::vector<double> v, double rel_tol) {
    std::sort(v.begin(), v.end(), std::greater<>());
    std::vector<double> out;
    for (double x : v) {
        if (out.empty() || out.back() - x > rel_tol * v.front()) out.push_back(x);
    }
    return out;
}

/// Nonzero eigenvalues of the block-weighted cut state for one ensemble.
inline std::vector<double> cut_eigenvalues(const TwirlEnsemble &ens) {
    std::vector<double> out;
    for (const auto &b : ens.blocks) {
        const double v = b.weight * b.eigenvalue;
        if (v > kNegligibleWeight) out.push_back(v);
    }
    return out;
}

inline std::vector<NCopyBound> copy_bounds(const std::vector<double> &eig, std::size_t cut_dim, int max_copies,
                                           double rel_tol) {
    std::vector<NCopyBound> out;
    std::vector<double> logs;
    for (double v : eig) logs.push_back(std::log(v));
    std::vector<double> products = {0.0};
    for (int n = 1; n <= max_copies; ++n) {
        std::vector<double> next;
        for (double p : products) {
            for (double l : logs) next.push_back(p + l);
        }
        // Group in log space; products of distinct eigenvalues may coincide.
        std::sort(next.begin(), next.end());
        std::vector<double> uniq;
        for (double x : next) {
            if (uniq.empty() || x - uniq.back() > rel_tol * std::max(1.0, std::abs(x))) uniq.push_back(x);
        }
        products = uniq;
        NCopyBound b;
        b.N = n;
        b.count = products.size();
        b.log_count = std::log(static_cast<double>(b.count));
        const double d = static_cast<double>(cut_dim);
        b.polynomial_bound = d * std::log(n + 1.0);
        b.polynomial_holds = b.log_count <= b.polynomial_bound + 1e-9;
        b.literal_bound = d * std::log(std::log(n + 1.0));
        b.literal_holds = b.log_count <= b.literal_bound + 1e-9;
        out.push_back(b);
    }
    return out;
}

inline double worst_marginal_error(const DensityMatrix &x, const DensityMatrix &rho, const LabelSet &a,
                                   const LabelSet &b, const LabelSet &c) {
    double worst = 0;
    for (const auto &s : {set_union(a, b), set_union(b, c), set_union(a, c)}) {
        worst = std::max(worst, trace_distance(partial_trace(x, s), partial_trace(rho, s)));
    }
    return worst;
}

/// Per-draw generator derived from the master seed.
inline std::mt19937_64 draw_stream(std::uint64_t seed, std::size_t draw) {
    std::seed_seq seq{seed, static_cast<std::uint64_t>(draw), std::uint64_t{0x5eed}};
    return std::mt19937_64(seq);
}

/// Monte Carlo estimate of the composed twirl, with code-book validity on
/// every sampled member.
struct SampleStats {
    double deviation = 0;
    double max_entry = 0;
    double codebook = 0;
};

inline SampleStats sample_twirls(const DensityMatrix &rho, const std::vector<TwirlEnsemble> &stages,
                                               const DensityMatrix &exact, const std::array<LabelSet, 3> &parts,
                                               std::size_t samples, std::uint64_t seed) {
    if (samples == 0) return {};
    Matrix mean = Matrix::Zero(rho.data().rows(), rho.data().cols());
    double worst = 0;
    for (std::size_t s = 0; s < samples; ++s) {
        auto rng = draw_stream(seed, s);
        DensityMatrix x = rho;
        for (const auto &ens : stages) x = ens.conjugate(x, ens.unitary(ens.random_draw(rng)));
        worst = std::max(worst, worst_marginal_error(x, rho, parts[0], parts[1], parts[2]));
        mean += x.data();
    }
    mean /= static_cast<double>(samples);
    return {trace_distance(mean, exact.data()), max_abs(mean - exact.data()), worst};
}

}  // namespace detail

/// Rate report for an annulus A | B1 B2 | C satisfying the merge conditions.
inline RateReport rate_report(const DensityMatrix &rho, const LabelSet &a, const LabelSet &b1, const LabelSet &b2,
                              const LabelSet &c, const RateOptions &opt = {}) {
    const LabelSet b = set_union(b1, b2);
    const DensityMatrix merged = merge_annulus(rho, a, b1, b2, c, opt.tol);
    const MarkovDecomposition dec = markov_decompose(merged, a, b, c, opt.seed, opt.tol);
    const TwirlEnsemble ens = build_twirl(dec, opt.rel_tol);
    const DensityMatrix ordered = rho.reordered(dec.layout.labels());
    const DensityMatrix avg = ens.average(ordered);

    RateReport r;
    r.geometry = "annulus";
    r.S_rho = von_neumann_entropy(rho);
    r.S_tilde = von_neumann_entropy(merged);
    r.S_bar = von_neumann_entropy(avg);
    r.C3 = r.S_tilde - r.S_rho;
    r.slack = r.S_tilde - r.S_bar;
    const auto eig = detail::distinct_values(detail::cut_eigenvalues(ens), opt.rel_tol);
    r.D = std::max<std::size_t>(eig.size(), 1);
    r.logD = std::log(static_cast<double>(r.D));
    r.cut_dim = 0;
    for (const auto &blk : dec.blocks) r.cut_dim += dec.dim_a() * blk.left_dim;
    r.marginal_error = detail::worst_marginal_error(avg, ordered, dec.A, dec.B, dec.C);

    // Closed forms: S_bar = H({t_b}) + sum t_b (ln d_b + S(rho^b)), with the
    // conditional states rho^b on (C, B^R) read off the eigenspace blocks.
    double s_bar = 0;
    const std::size_t dc = dec.dim_c();
    const std::size_t dab = dec.dim_a() * dec.dim_b();
    for (const auto &blk : ens.blocks) {
        const Matrix inner = apply_on_group(ordered.data(), {dab, dc}, {0}, blk.isometry.adjoint(), blk.isometry);
        const Matrix w = partial_trace_positions(inner, {dc, blk.dim_e, blk.dim_f}, {0, 2});
        const double t = w.trace().real();
        if (t <= detail::kNegligibleWeight) continue;
        s_bar += eta(t) + t * std::log(static_cast<double>(blk.dim_e)) + t * entropy_of_eigenvalues(eigvalsh(w / t));
    }
    r.S_bar_formula = s_bar;
    double s_tilde = 0;
    for (std::size_t i = 0; i < dec.blocks.size(); ++i) {
        const auto &blk = dec.blocks[i];
        if (blk.weight <= detail::kNegligibleWeight) continue;
        double h_q = 0, log_deg = 0;
        for (const auto &tb : ens.blocks) {
            if (tb.cut != i) continue;
            const double q = tb.eigenvalue * static_cast<double>(tb.dim_e);
            h_q += eta(q);
            log_deg += q * std::log(static_cast<double>(tb.dim_e));
        }
        s_tilde += eta(blk.weight) + blk.weight * (h_q + log_deg + von_neumann_entropy(blk.right));
    }
    r.S_tilde_formula = s_tilde;

    r.mc_samples = opt.mc_samples;
    const auto st = detail::sample_twirls(ordered, {ens}, avg, {dec.A, dec.B, dec.C}, opt.mc_samples, opt.seed);
    r.mc_deviation = st.deviation;
    r.mc_max_entry = st.max_entry;
    r.codebook_error = st.codebook;
    r.N_bounds = detail::copy_bounds(eig, r.cut_dim, opt.max_copies, opt.rel_tol);
    return r;
}

namespace detail {

/// Twirl across ring link k, i.e. on X_k ∪ X_{k+1} with cuts X_k^R ⊗ X_{k+1}^L.
inline TwirlEnsemble ring_twirl(const FactorLayout &layout, const RingMerge &m, std::size_t k, double rel_tol) {
    const std::size_t k1 = (k + 1) % 6;
    const auto &dx = m.blocks[k];
    const auto &dy = m.blocks[k1];
    const auto &link = m.links[k];
    std::vector<TwirlCut> cuts;
    for (std::size_t i = 0; i < dx.blocks.size(); ++i) {
        for (std::size_t j = 0; j < dy.blocks.size(); ++j) {
            const double t = link.joint(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)).real();
            if (t <= kNegligibleWeight) continue;
            const auto &bi = dx.blocks[i];
            const auto &bj = dy.blocks[j];
            // Columns ordered (R_i, L_j, L_i, R_j); rows of W_i ⊗ W_j are (L_i, R_i, L_j, R_j).
            const std::vector<std::size_t> dims = {bi.left_dim, bi.right_dim, bj.left_dim, bj.right_dim};
            const auto map = permutation_map(dims, {1, 2, 0, 3});
            const auto n = static_cast<Eigen::Index>(map.size());
            Matrix perm = Matrix::Zero(n, n);
            for (Eigen::Index col = 0; col < n; ++col) perm(static_cast<Eigen::Index>(map[col]), col) = 1.0;
            cuts.push_back({kron(bi.isometry, bj.isometry) * perm, bi.right_dim * bj.left_dim,
                            bi.left_dim * bj.right_dim, link.pair[i][j], t});
        }
    }
    return build_twirl(layout, set_union(m.regions[k], m.regions[k1]), cuts, rel_tol);
}

}  // namespace detail

/// Rate report for a six-region ring with A = X1X2, B = X3X4, C = X5X6: the
/// state is twirled across the A|B link and then across the C|A link.
inline RateReport rate_report_ring(const DensityMatrix &rho, const std::array<LabelSet, 6> &regions,
                                   const RateOptions &opt = {}) {
    const RingMerge m = merge_ring(rho, regions, opt.tol, opt.seed);
    const LabelSet a = set_union(m.regions[0], m.regions[1]);
    const LabelSet b = set_union(m.regions[2], m.regions[3]);
    const LabelSet c = set_union(m.regions[4], m.regions[5]);
    const LabelSet all = set_union({m.regions[0], m.regions[1], m.regions[2], m.regions[3], m.regions[4], m.regions[5]});
    const DensityMatrix ordered = rho.reordered(all);
    const std::vector<TwirlEnsemble> stages = {detail::ring_twirl(ordered.layout(), m, 1, opt.rel_tol),
                                               detail::ring_twirl(ordered.layout(), m, 5, opt.rel_tol)};
    DensityMatrix avg = ordered;
    for (const auto &ens : stages) avg = ens.average(avg);

    RateReport r;
    r.geometry = "ring";
    r.S_rho = von_neumann_entropy(rho);
    r.S_tilde = von_neumann_entropy(m.state);
    r.S_bar = von_neumann_entropy(avg);
    r.C3 = r.S_tilde - r.S_rho;
    r.slack = r.S_tilde - r.S_bar;
    r.D = 1;
    r.cut_dim = 0;
    std::vector<double> eig = {1.0};
    for (const auto &ens : stages) {
        const auto e = detail::distinct_values(detail::cut_eigenvalues(ens), opt.rel_tol);
        r.D *= std::max<std::size_t>(e.size(), 1);
        std::vector<double> prod;
        for (double x : eig) {
            for (double y : e) prod.push_back(x * y);
        }
        eig = detail::distinct_values(prod, opt.rel_tol);
        for (const auto &blk : ens.blocks) r.cut_dim += blk.dim_e;
    }
    r.logD = std::log(static_cast<double>(r.D));
    r.marginal_error = detail::worst_marginal_error(avg, ordered, a, b, c);
    r.mc_samples = opt.mc_samples;
    const auto st = detail::sample_twirls(ordered, stages, avg, {a, b, c}, opt.mc_samples, opt.seed);
    r.mc_deviation = st.deviation;
    r.mc_max_entry = st.max_entry;
    r.codebook_error = st.codebook;
    r.N_bounds = detail::copy_bounds(eig, r.cut_dim, opt.max_copies, opt.rel_tol);
    return r;
}

}  // namespace irrcorr
