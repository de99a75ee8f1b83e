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
#include <cmath>
#include <optional>
#include <vector>

#include "irrcorr/core/density_matrix.hpp"
#include "irrcorr/core/entropy.hpp"
#include "irrcorr/markov/decomposition.hpp"

namespace irrcorr {

/// Doubly-indexed structure ⊕_{i,j} p_i q_{j|i} ρ_{A B1_i^L} ⊗ ρ_{B1_i^R B2_j^L} ⊗ ρ_{B2_j^R C}
/// obtained from decompositions of A|B1|B2 and B1|B2|C.
struct RefinedDecomposition {
    MarkovDecomposition left;   // A | B1 | B2
    MarkovDecomposition right;  // B1 | B2 | C
    Matrix conditional;         // q_{j|i}
    /// Normalized state on (B1_i^R, B2_j^L); empty when q_{j|i} vanishes.
    std::vector<std::vector<std::optional<Matrix>>> middle;
    double pinching_error = 0;  // ||P_2(ρ_B2) - ρ_B2||_1
    double marginal_error = 0;  // max_j |Σ_i p_i q_{j|i} - q_j|
};

inline RefinedDecomposition refine_block(const MarkovDecomposition &left, const MarkovDecomposition &right) {
    if (left.B != right.A || left.C != right.B) {
        fail(ErrorKind::DecompositionFailed, "decompositions do not share the B1, B2 systems");
    }
    RefinedDecomposition out{left, right, {}, {}, 0, 0};
    const std::size_t d2 = left.dim_c();
    const auto ni = static_cast<Eigen::Index>(left.blocks.size());
    const auto nj = static_cast<Eigen::Index>(right.blocks.size());
    out.conditional = Matrix::Zero(ni, nj);
    out.middle.assign(left.blocks.size(), std::vector<std::optional<Matrix>>(right.blocks.size()));

    Matrix rho_b2 = Matrix::Zero(static_cast<Eigen::Index>(d2), static_cast<Eigen::Index>(d2));
    for (std::size_t i = 0; i < left.blocks.size(); ++i) {
        const auto &bi = left.blocks[i];
        const Matrix &r = bi.right.data();  // (B1_i^R, B2)
        rho_b2 += bi.weight * trace_leading(r, bi.right_dim);
        for (std::size_t j = 0; j < right.blocks.size(); ++j) {
            const auto &bj = right.blocks[j];
            const Matrix c = apply_on_group(r, {bi.right_dim, d2}, {1}, bj.isometry.adjoint(), bj.isometry);
            const double q = c.trace().real();
            out.conditional(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = q;
            if (q > 1e-14) out.middle[i][j] = trace_trailing(c, bj.right_dim) / q;
        }
    }

    Matrix pinched = Matrix::Zero(rho_b2.rows(), rho_b2.cols());
    for (std::size_t j = 0; j < right.blocks.size(); ++j) {
        const auto &bj = right.blocks[j];
        const Matrix local = trace_trailing(bj.isometry.adjoint() * rho_b2 * bj.isometry, bj.right_dim);
        const Matrix r_state = trace_trailing(bj.right.data(), right.dim_c());
        pinched += bj.isometry * kron(local, r_state) * bj.isometry.adjoint();
        double mix = 0;
        for (std::size_t i = 0; i < left.blocks.size(); ++i) {
            mix += left.blocks[i].weight * out.conditional(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)).real();
        }
        out.marginal_error = std::max(out.marginal_error, std::abs(mix - bj.weight));
    }
    out.pinching_error = trace_distance(pinched, rho_b2);
    return out;
}

/// The four-party state on (A, B1, B2, C) assembled from the refined blocks.
inline DensityMatrix reconstruct(const RefinedDecomposition &ref) {
    const std::size_t da = ref.left.dim_a(), d1 = ref.left.dim_b(), d2 = ref.left.dim_c(), dc = ref.right.dim_c();
    const auto d = static_cast<Eigen::Index>(da * d1 * d2 * dc);
    Matrix out = Matrix::Zero(d, d);
    for (std::size_t i = 0; i < ref.left.blocks.size(); ++i) {
        const auto &bi = ref.left.blocks[i];
        for (std::size_t j = 0; j < ref.right.blocks.size(); ++j) {
            if (!ref.middle[i][j]) continue;
            const auto &bj = ref.right.blocks[j];
            const double w = bi.weight * ref.conditional(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)).real();
            Matrix m = kron(kron(bi.left.data(), *ref.middle[i][j]), bj.right.data());
            m = apply_on_group(m, {da, bi.left_dim, bi.right_dim, bj.left_dim, bj.right_dim, dc}, {1, 2}, bi.isometry,
                               bi.isometry.adjoint());  // (A, L2, R2, C, B1)
            m = apply_on_group(m, {da, bj.left_dim, bj.right_dim, dc, d1}, {1, 2}, bj.isometry,
                               bj.isometry.adjoint());  // (A, C, B1, B2)
            out += w * permute_factors(m, {da, dc, d1, d2}, {0, 2, 3, 1});
        }
    }
    std::vector<Site> sites = ref.left.layout.sites();
    const FactorLayout lc = ref.right.layout.restrict_to(ref.right.C);
    sites.insert(sites.end(), lc.sites().begin(), lc.sites().end());
    return {FactorLayout(sites), out, DensityMatrix::Trusted{}};
}

}  // namespace irrcorr
