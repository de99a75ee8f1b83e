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

#include <string>
#include <vector>

#include "irrcorr/core/density_matrix.hpp"
#include "irrcorr/markov/decomposition.hpp"
#include "irrcorr/maxent/merge.hpp"

namespace irrcorr {

/// H = Σ_t embed(term_t) with each term supported on two of the parties.
struct TwoLocalHamiltonian {
    struct Term {
        LabelSet support;  // in layout order
        Matrix op;
    };
    FactorLayout layout;
    std::vector<Term> terms;
    double eps = 0;

    Matrix total() const {
        const auto d = static_cast<Eigen::Index>(layout.total_dim());
        Matrix h = Matrix::Zero(d, d);
        for (const auto &t : terms) h += embed(t.op, layout, t.support);
        return h;
    }

    DensityMatrix gibbs_state() const { return {layout, gibbs(total()), DensityMatrix::Trusted{}}; }
};

/// log_eps(p σ) lifted through the block isometry of a split factor.
namespace detail {

inline Matrix kernel_log(const Matrix &iso_sum, double eps) {
    const auto d = iso_sum.rows();
    return std::log(eps) * (Matrix::Identity(d, d) - iso_sum);
}

}  // namespace detail

/// ε-regularized H_AB + H_BC reproducing a Markov state from its decomposition.
inline TwoLocalHamiltonian two_local_hamiltonian(const MarkovDecomposition &dec, double eps) {
    const std::size_t da = dec.dim_a(), db = dec.dim_b(), dc = dec.dim_c();
    const auto dbi = static_cast<Eigen::Index>(db);
    Matrix h_ab = Matrix::Zero(static_cast<Eigen::Index>(da * db), static_cast<Eigen::Index>(da * db));
    Matrix h_bc = Matrix::Zero(static_cast<Eigen::Index>(db * dc), static_cast<Eigen::Index>(db * dc));
    Matrix covered = Matrix::Zero(dbi, dbi);
    for (const auto &blk : dec.blocks) {
        const auto n = static_cast<Eigen::Index>(blk.left_dim), m = static_cast<Eigen::Index>(blk.right_dim);
        covered += blk.projector();
        const Matrix left = kron(regularized_log(blk.weight * blk.left.data(), eps), Matrix::Identity(m, m));
        h_ab += apply_on_group(left, {da, blk.left_dim, blk.right_dim}, {1, 2}, blk.isometry, blk.isometry.adjoint());
        const Matrix right = kron(Matrix::Identity(n, n), regularized_log(blk.right.data(), eps));
        const Matrix lifted =
            apply_on_group(right, {blk.left_dim, blk.right_dim, dc}, {0, 1}, blk.isometry, blk.isometry.adjoint());
        h_bc += permute_factors(lifted, {dc, db}, {1, 0});
    }
    h_ab += kron(Matrix::Identity(static_cast<Eigen::Index>(da), static_cast<Eigen::Index>(da)),
                 detail::kernel_log(covered, eps));
    TwoLocalHamiltonian h{dec.layout, {}, eps};
    h.terms.push_back({set_union(dec.A, dec.B), hermitize(h_ab)});
    h.terms.push_back({set_union(dec.B, dec.C), hermitize(h_bc)});
    return h;
}

/// ε-regularized sum of six link terms reproducing a ring merge.
inline TwoLocalHamiltonian two_local_hamiltonian(const RingMerge &ring, double eps) {
    TwoLocalHamiltonian h{ring.state.layout(), {}, eps};
    for (std::size_t k = 0; k < 6; ++k) {
        const auto &dx = ring.blocks[k];
        const auto &dy = ring.blocks[(k + 1) % 6];
        const auto &link = ring.links[k];
        const std::size_t d0 = h.layout.dim_of(ring.regions[k]);
        const std::size_t d1 = h.layout.dim_of(ring.regions[(k + 1) % 6]);
        const auto d01 = static_cast<Eigen::Index>(d0 * d1);
        Matrix term = Matrix::Zero(d01, d01);
        Matrix covered = Matrix::Zero(static_cast<Eigen::Index>(d0), static_cast<Eigen::Index>(d0));
        for (std::size_t i = 0; i < dx.blocks.size(); ++i) {
            const auto &bi = dx.blocks[i];
            covered += bi.projector();
            for (std::size_t j = 0; j < dy.blocks.size(); ++j) {
                const auto &bj = dy.blocks[j];
                const auto mi = static_cast<Eigen::Index>(bi.right_dim), nj = static_cast<Eigen::Index>(bj.left_dim);
                const double p = link.conditional(i, j);
                const Matrix local = p > detail::kNegligibleWeight
                                         ? regularized_log(p * link.pair[i][j], eps)
                                         : Matrix(std::log(eps) * Matrix::Identity(mi * nj, mi * nj));
                Matrix op = kron(kron(Matrix::Identity(static_cast<Eigen::Index>(bi.left_dim),
                                                       static_cast<Eigen::Index>(bi.left_dim)),
                                      local),
                                 Matrix::Identity(static_cast<Eigen::Index>(bj.right_dim),
                                                  static_cast<Eigen::Index>(bj.right_dim)));
                const std::vector<std::size_t> f{bi.left_dim, bi.right_dim, bj.left_dim, bj.right_dim};
                op = apply_on_group(op, f, {0, 1}, bi.isometry, bi.isometry.adjoint());  // (L_y R_y, X_k)
                op = apply_on_group(op, {bj.left_dim, bj.right_dim, d0}, {0, 1}, bj.isometry,
                                    bj.isometry.adjoint());  // (X_k, X_{k+1})
                term += op;
            }
        }
        term += kron(detail::kernel_log(covered, eps), Matrix::Identity(static_cast<Eigen::Index>(d1),
                                                                        static_cast<Eigen::Index>(d1)));
        // Term lives on (X_k, X_{k+1}); reorder to layout order of the union.
        const LabelSet both = set_union(ring.regions[k], ring.regions[(k + 1) % 6]);
        const FactorLayout sub = h.layout.restrict_to(both);
        LabelSet concat = ring.regions[k];
        concat.insert(concat.end(), ring.regions[(k + 1) % 6].begin(), ring.regions[(k + 1) % 6].end());
        const FactorLayout cl = h.layout.reordered(concat);
        std::vector<std::size_t> order;
        for (const auto &l : sub.labels()) order.push_back(cl.index_of(l));
        h.terms.push_back({sub.labels(), hermitize(permute_factors(term, cl.dims(), order))});
    }
    return h;
}

}  // namespace irrcorr
