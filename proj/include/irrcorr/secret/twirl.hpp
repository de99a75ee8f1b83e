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

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "irrcorr/core/density_matrix.hpp"
#include "irrcorr/core/spectral.hpp"
#include "irrcorr/markov/decomposition.hpp"

namespace irrcorr {

/// Weyl-Heisenberg operator X^a Z^b on C^d.
inline Matrix weyl(std::size_t d, std::size_t a, std::size_t b) {
    const auto n = static_cast<Eigen::Index>(d);
    Matrix w = Matrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double phase = 2 * std::numbers::pi * static_cast<double>(b) * static_cast<double>(j) / static_cast<double>(d);
        w((j + static_cast<Eigen::Index>(a)) % n, j) = std::polar(1.0, phase);
    }
    return w;
}

/// Element e of the signed Weyl group {±X^a Z^b}, 0 <= e < 2 d^2. The sign
/// makes the first moment vanish so that distinct blocks decohere.
inline Matrix signed_weyl(std::size_t d, std::size_t e) {
    const std::size_t d2 = d * d;
    const double sign = e < d2 ? 1.0 : -1.0;
    const std::size_t r = e % d2;
    return sign * weyl(d, r / d, r % d);
}

/// One twirled eigenspace E (dim_e) times a spectator F (dim_f), embedded in
/// the group space by an isometry with columns ordered e * dim_f + f.
struct TwirlBlock {
    Matrix isometry;
    std::size_t dim_e = 1;
    std::size_t dim_f = 1;
    double eigenvalue = 0;  // of the cut state on E
    std::size_t cut = 0;    // index of the cut block it belongs to
    double weight = 0;      // p_i of the cut block

    std::size_t ensemble_size() const { return 2 * dim_e * dim_e; }
};

/// Random block unitaries ⊕_β (U_β ⊗ I_F) ⊕ I on the group `group` (an
/// explicit label order), with U_β drawn independently per block.
struct TwirlEnsemble {
    FactorLayout layout;
    LabelSet group;
    std::vector<TwirlBlock> blocks;
    Matrix uncovered;  // projector on the part of the group space outside all blocks

    std::size_t group_dim() const { return static_cast<std::size_t>(uncovered.rows()); }

    /// Member selected by one element index per block.
    Matrix unitary(const std::vector<std::size_t> &draw) const {
        Matrix u = uncovered;
        for (std::size_t k = 0; k < blocks.size(); ++k) {
            const auto &b = blocks[k];
            const auto f = static_cast<Eigen::Index>(b.dim_f);
            const Matrix local = kron(signed_weyl(b.dim_e, draw[k]), Matrix::Identity(f, f));
            u += b.isometry * local * b.isometry.adjoint();
        }
        return u;
    }

    std::vector<std::size_t> random_draw(std::mt19937_64 &rng) const {
        std::vector<std::size_t> draw;
        for (const auto &b : blocks) {
            std::uniform_int_distribution<std::size_t> pick(0, b.ensemble_size() - 1);
            draw.push_back(pick(rng));
        }
        return draw;
    }

    /// Exact ensemble average of U X U^dagger for X on (rest, group) with
    /// the group last: each block is depolarized on E and blocks decohere.
    Matrix average_grouped(const Matrix &x, std::size_t d_rest) const {
        const std::size_t dg = group_dim();
        Matrix out = apply_on_group(x, {d_rest, dg}, {1}, uncovered, uncovered);
        for (const auto &b : blocks) {
            const Matrix inner = apply_on_group(x, {d_rest, dg}, {1}, b.isometry.adjoint(), b.isometry);
            const Matrix reduced = partial_trace_positions(inner, {d_rest, b.dim_e, b.dim_f}, {0, 2});
            const auto de = static_cast<Eigen::Index>(b.dim_e);
            Matrix spread = kron(reduced, Matrix::Identity(de, de) / static_cast<double>(b.dim_e));
            spread = permute_factors(spread, {d_rest, b.dim_f, b.dim_e}, {0, 2, 1});
            out += apply_on_group(spread, {d_rest, b.dim_e * b.dim_f}, {1}, b.isometry, b.isometry.adjoint());
        }
        return out;
    }

    /// Labels of the layout outside the group, in layout order.
    LabelSet rest() const { return set_difference(layout.labels(), group); }

    DensityMatrix average(const DensityMatrix &rho) const {
        LabelSet order = rest();
        const std::size_t d_rest = order.empty() ? 1 : layout.dim_of(order);
        order.insert(order.end(), group.begin(), group.end());
        const Matrix g = rho.reordered(order).data();
        Matrix avg = average_grouped(g, d_rest);
        return DensityMatrix(layout.reordered(order), avg, DensityMatrix::Trusted{}).reordered(rho.labels());
    }

    DensityMatrix conjugate(const DensityMatrix &rho, const Matrix &u) const {
        LabelSet order = rest();
        order.insert(order.end(), group.begin(), group.end());
        const Matrix g = rho.reordered(order).data();
        const std::size_t dg = group_dim();
        const std::size_t d_rest = static_cast<std::size_t>(g.rows()) / dg;
        const Matrix out = apply_on_group(g, {d_rest, dg}, {1}, u, u.adjoint());
        return DensityMatrix(layout.reordered(order), out, DensityMatrix::Trusted{}).reordered(rho.labels());
    }
};

/// A cut of the group space into blocks iso_i: (X_i ⊗ F_i) -> group, with a
/// state on X_i whose eigenspaces are twirled.
struct TwirlCut {
    Matrix isometry;  // group_dim x (dim_x * dim_f)
    std::size_t dim_x = 1;
    std::size_t dim_f = 1;
    Matrix state;     // on X_i, normalized
    double weight = 1;
};

/// Builds the ensemble from the spectra of the cut states. Throws
/// DegeneracyAmbiguous when two distinct nonzero eigenvalues of one cut state
/// are closer than 1e3 * rel_tol * lambda_max.
inline TwirlEnsemble build_twirl(const FactorLayout &layout, const LabelSet &group, const std::vector<TwirlCut> &cuts,
                                 double rel_tol = tol::degeneracy) {
    const auto dg = static_cast<Eigen::Index>(layout.dim_of(group));
    TwirlEnsemble ens{layout, group, {}, Matrix::Identity(dg, dg)};
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        const auto &c = cuts[i];
        const Spectrum sp = spectral(c.state, rel_tol);
        const double top = sp.eigenvalues.empty() ? 0.0 : sp.eigenvalues.front();
        for (std::size_t k = 0; k + 1 < sp.distinct_count(); ++k) {
            const double gap = sp.eigenvalues[k] - sp.eigenvalues[k + 1];
            if (sp.eigenvalues[k + 1] > tol::eig_cutoff * top && gap < 1e3 * rel_tol * top) {
                fail(ErrorKind::DegeneracyAmbiguous,
                     "eigenvalues " + std::to_string(sp.eigenvalues[k]) + " and " +
                         std::to_string(sp.eigenvalues[k + 1]) + " are nearly degenerate; loosen rel_tol");
            }
        }
        const auto f = static_cast<Eigen::Index>(c.dim_f);
        for (std::size_t k = 0; k < sp.distinct_count(); ++k) {
            TwirlBlock b;
            b.dim_e = sp.degeneracies[k];
            b.dim_f = c.dim_f;
            b.eigenvalue = std::max(sp.eigenvalues[k], 0.0);
            b.cut = i;
            b.weight = c.weight;
            b.isometry = c.isometry * kron(sp.bases[k], Matrix::Identity(f, f));
            ens.uncovered -= b.isometry * b.isometry.adjoint();
            ens.blocks.push_back(std::move(b));
        }
    }
    return ens;
}

/// Ensemble for a Markov decomposition A | B | C: the group is (A, B) and
/// cut i is A ⊗ B_i^L with spectator B_i^R.
inline TwirlEnsemble build_twirl(const MarkovDecomposition &dec, double rel_tol = tol::degeneracy) {
    const std::size_t da = dec.dim_a();
    const auto dai = static_cast<Eigen::Index>(da);
    std::vector<TwirlCut> cuts;
    for (const auto &blk : dec.blocks) {
        cuts.push_back({kron(Matrix::Identity(dai, dai), blk.isometry), da * blk.left_dim, blk.right_dim,
                        blk.left.data(), blk.weight});
    }
    return build_twirl(dec.layout, set_union(dec.A, dec.B), cuts, rel_tol);
}

}  // namespace irrcorr
