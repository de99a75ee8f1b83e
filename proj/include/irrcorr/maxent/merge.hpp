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
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "irrcorr/core/density_matrix.hpp"
#include "irrcorr/core/entropy.hpp"
#include "irrcorr/markov/decomposition.hpp"
#include "irrcorr/markov/recovery.hpp"

namespace irrcorr {

/// Residuals of the annulus merge assumptions, in nats.
struct AnnulusResiduals {
    double mi_a_b2c = 0;   // I(A:B2C)
    double cmi_a_b2 = 0;   // I(A:B2|B1)
    double cmi_b1_c = 0;   // I(B1:C|B2)

    double worst() const { return std::max({mi_a_b2c, cmi_a_b2, cmi_b1_c, 0.0}); }
};

inline AnnulusResiduals annulus_residuals(const DensityMatrix &rho, const LabelSet &a, const LabelSet &b1,
                                          const LabelSet &b2, const LabelSet &c) {
    return {mutual_information(rho, a, set_union(b2, c)), conditional_mutual_information(rho, a, b1, b2),
            conditional_mutual_information(rho, b1, b2, c)};
}

/// (id_{AB1} ⊗ Λ_{B2 -> B2 C}) ρ_{AB1B2} with the Petz map of ρ_{B2C}, in the
/// source layout order. No assumptions are checked.
inline DensityMatrix petz_merge(const DensityMatrix &rho, const LabelSet &a, const LabelSet &b1, const LabelSet &b2,
                                const LabelSet &c) {
    const auto all = set_union({a, b1, b2, c});
    const auto map = petz_recovery(partial_trace(rho, set_union(b2, c)), b2, c);
    const auto merged = apply_recovery(map, partial_trace(rho, set_union({a, b1, b2})));
    return merged.reordered(rho.layout().restrict_to(all).labels());
}

/// Maximum-entropy state with the AB, BC, CA marginals of ρ for an annulus
/// split B = B1 ∪ B2. Throws AssumptionViolated when the chain conditions fail.
inline DensityMatrix merge_annulus(const DensityMatrix &rho, const LabelSet &a, const LabelSet &b1,
                                   const LabelSet &b2, const LabelSet &c, double tol = 1e-7) {
    const auto r = annulus_residuals(rho, a, b1, b2, c);
    if (r.cmi_a_b2 > tol) fail(ErrorKind::AssumptionViolated, "I(A:B2|B1) = " + std::to_string(r.cmi_a_b2));
    if (r.cmi_b1_c > tol) fail(ErrorKind::AssumptionViolated, "I(B1:C|B2) = " + std::to_string(r.cmi_b1_c));
    if (r.mi_a_b2c > tol) fail(ErrorKind::AssumptionViolated, "I(A:B2C) = " + std::to_string(r.mi_a_b2c));
    return petz_merge(rho, a, b1, b2, c);
}

/// Data of the six-region cyclic merge. Link k joins X_k and X_{k+1}.
struct RingLink {
    Matrix joint;  // Tr(Π_i Π_j ρ) for blocks i of X_k and j of X_{k+1}
    std::vector<std::vector<Matrix>> pair;  // normalized state on (X_k^R, X_{k+1}^L) per (i, j)

    double conditional(std::size_t i, std::size_t j) const {
        const double row = joint.row(static_cast<Eigen::Index>(i)).real().sum();
        return row > 0 ? joint(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)).real() / row : 0.0;
    }
};

struct RingMerge {
    std::array<LabelSet, 6> regions;  // each in source layout order
    std::array<MarkovDecomposition, 6> blocks;
    std::array<RingLink, 6> links;
    double weight_sum = 0;
    DensityMatrix state;
};

namespace detail {

inline constexpr double kNegligibleWeight = 1e-14;

inline RingLink ring_link(const DensityMatrix &rho, const LabelSet &x, const LabelSet &y,
                          const MarkovDecomposition &dx, const MarkovDecomposition &dy) {
    const auto pair = regrouped(partial_trace(rho, set_union(x, y)), {x, y});
    const std::size_t d0 = pair.layout().dim_of(x), d1 = pair.layout().dim_of(y);
    RingLink link;
    link.joint = Matrix::Zero(static_cast<Eigen::Index>(dx.blocks.size()), static_cast<Eigen::Index>(dy.blocks.size()));
    link.pair.assign(dx.blocks.size(), std::vector<Matrix>(dy.blocks.size()));
    for (std::size_t i = 0; i < dx.blocks.size(); ++i) {
        const auto &bi = dx.blocks[i];
        const Matrix left = apply_on_group(pair.data(), {d0, d1}, {0}, bi.isometry.adjoint(), bi.isometry);
        for (std::size_t j = 0; j < dy.blocks.size(); ++j) {
            const auto &bj = dy.blocks[j];
            // left is ordered (X_{k+1}, L_k R_k); compress X_{k+1} to (L, R).
            const Matrix both = apply_on_group(left, {d1, bi.left_dim * bi.right_dim}, {0}, bj.isometry.adjoint(),
                                               bj.isometry);
            const double t = both.trace().real();
            link.joint(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = t;
            if (t <= kNegligibleWeight) continue;
            link.pair[i][j] =
                partial_trace_positions(both, {bi.left_dim, bi.right_dim, bj.left_dim, bj.right_dim}, {1, 2}) / t;
        }
    }
    return link;
}

}  // namespace detail

/// Maximum-entropy state for a ring of six regions X_1..X_6 (cyclic), where
/// each consecutive triple is Markov and separated regions are uncorrelated.
inline RingMerge merge_ring(const DensityMatrix &rho, const std::array<LabelSet, 6> &regions, double tol = 1e-7,
                            std::uint64_t seed = 7) {
    const auto &lay = rho.layout();
    std::array<LabelSet, 6> x;
    for (std::size_t k = 0; k < 6; ++k) {
        if (regions[k].empty()) fail(ErrorKind::UnknownSubsystem, "ring region " + std::to_string(k + 1) + " is empty");
        x[k] = grouped_labels(lay, {regions[k]});
    }
    for (std::size_t k = 0; k < 6; ++k) {
        for (std::size_t j = k + 1; j < 6; ++j) {
            if (!disjoint(x[k], x[j])) fail(ErrorKind::OverlappingRegions, "ring regions overlap");
        }
    }
    auto at = [&](long k) -> const LabelSet & { return x[static_cast<std::size_t>((k % 6 + 6) % 6)]; };
    for (long k = 0; k < 6; ++k) {
        const double cmi = conditional_mutual_information(rho, at(k - 1), at(k), at(k + 1));
        if (cmi > tol) {
            fail(ErrorKind::AssumptionViolated,
                 "triple around region " + std::to_string(k + 1) + " has I = " + std::to_string(cmi));
        }
        for (long s : {2L, 3L}) {
            const double mi = mutual_information(rho, at(k), at(k + s));
            if (mi > tol) {
                fail(ErrorKind::AssumptionViolated, "regions " + std::to_string(k + 1) + " and " +
                                                        std::to_string((k + s) % 6 + 1) + " share I = " +
                                                        std::to_string(mi));
            }
        }
    }

    RingMerge out{x, {}, {}, 0, DensityMatrix::maximally_mixed(FactorLayout({{"_", 1}}))};
    for (long k = 0; k < 6; ++k) {
        out.blocks[static_cast<std::size_t>(k)] = markov_decompose(rho, at(k - 1), at(k), at(k + 1), seed, tol);
    }
    for (std::size_t k = 0; k < 6; ++k) {
        out.links[k] = detail::ring_link(rho, x[k], x[(k + 1) % 6], out.blocks[k], out.blocks[(k + 1) % 6]);
    }

    std::vector<std::size_t> dims;
    for (const auto &r : x) dims.push_back(lay.dim_of(r));
    std::size_t total = 1;
    for (auto d : dims) total *= d;
    const auto dt = static_cast<Eigen::Index>(total);
    Matrix acc = Matrix::Zero(dt, dt);

    std::array<std::size_t, 6> idx{};
    std::array<std::size_t, 6> count{};
    for (std::size_t k = 0; k < 6; ++k) count[k] = out.blocks[k].blocks.size();
    while (true) {
        double w = 1;
        for (std::size_t k = 0; k < 6 && w > 0; ++k) w *= out.links[k].conditional(idx[k], idx[(k + 1) % 6]);
        if (w > detail::kNegligibleWeight) {
            out.weight_sum += w;
            // Factors (R_1 L_2)(R_2 L_3)...(R_6 L_1) -> (L_1 R_1 ... L_6 R_6).
            Matrix prod = out.links[0].pair[idx[0]][idx[1]];
            std::vector<std::size_t> fdims;
            for (std::size_t k = 0; k < 6; ++k) {
                if (k > 0) prod = kron(prod, out.links[k].pair[idx[k]][idx[(k + 1) % 6]]);
                fdims.push_back(out.blocks[k].blocks[idx[k]].right_dim);
                fdims.push_back(out.blocks[(k + 1) % 6].blocks[idx[(k + 1) % 6]].left_dim);
            }
            std::vector<std::size_t> order{11};
            for (std::size_t p = 0; p < 11; ++p) order.push_back(p);
            prod = permute_factors(prod, fdims, order);
            std::vector<std::size_t> cur;
            for (std::size_t k = 0; k < 6; ++k) {
                const auto &b = out.blocks[k].blocks[idx[k]];
                cur.push_back(b.left_dim);
                cur.push_back(b.right_dim);
            }
            for (std::size_t k = 0; k < 6; ++k) {
                const auto &iso = out.blocks[k].blocks[idx[k]].isometry;
                prod = apply_on_group(prod, cur, {0, 1}, iso, iso.adjoint());
                cur.erase(cur.begin(), cur.begin() + 2);
                cur.push_back(dims[k]);
            }
            acc += w * prod;
        }
        std::size_t k = 0;
        while (k < 6 && ++idx[k] == count[k]) idx[k++] = 0;
        if (k == 6) break;
    }

    std::vector<Site> sites;
    for (const auto &r : x) {
        for (auto p : lay.positions(r)) sites.push_back(lay[p]);
    }
    LabelSet all;
    for (const auto &r : x) all.insert(all.end(), r.begin(), r.end());
    out.state = DensityMatrix(FactorLayout(sites), acc, DensityMatrix::Trusted{})
                    .reordered(lay.restrict_to(all).labels());
    return out;
}

}  // namespace irrcorr
