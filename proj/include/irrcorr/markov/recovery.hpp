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

#include <cstddef>
#include <vector>

#include "irrcorr/core/density_matrix.hpp"
#include "irrcorr/core/entropy.hpp"
#include "irrcorr/core/errors.hpp"

namespace irrcorr {

/// A channel B -> B C in Kraus form. Kraus operators map the input (ordered as
/// `input`) to the output ordered as input followed by `extension`.
struct RecoveryMap {
    FactorLayout input;
    FactorLayout extension;
    std::vector<Matrix> kraus;

    FactorLayout output() const { return input.concat(extension); }

    Matrix apply(const Matrix &x) const {
        const auto d = static_cast<Eigen::Index>(output().total_dim());
        Matrix out = Matrix::Zero(d, d);
        for (const auto &k : kraus) out.noalias() += k * x * k.adjoint();
        return out;
    }

    /// Choi operator sum_ij |i><j| ⊗ Λ(|i><j|), built on demand.
    Matrix choi() const {
        const auto din = static_cast<Eigen::Index>(input.total_dim());
        const auto dout = static_cast<Eigen::Index>(output().total_dim());
        Matrix j = Matrix::Zero(din * dout, din * dout);
        for (Eigen::Index a = 0; a < din; ++a) {
            for (Eigen::Index b = 0; b < din; ++b) {
                Matrix e = Matrix::Zero(din, din);
                e(a, b) = 1.0;
                j.block(a * dout, b * dout, dout, dout) = apply(e);
            }
        }
        return j;
    }

    /// max |sum_k K_k^dagger K_k - I|.
    double trace_preservation_error() const {
        const auto din = static_cast<Eigen::Index>(input.total_dim());
        Matrix s = Matrix::Zero(din, din);
        for (const auto &k : kraus) s.noalias() += k.adjoint() * k;
        return max_abs(s - Matrix::Identity(din, din));
    }
};

/// Petz map Λ(X) = ρ_BC^{1/2} (ρ_B^{-1/2} X ρ_B^{-1/2} ⊗ I_C) ρ_BC^{1/2} built
/// from ρ_BC. The kernel of ρ_B is sent to itself with C in its first basis
/// state so that the map stays trace preserving.
inline RecoveryMap petz_recovery(const DensityMatrix &rho_bc, const LabelSet &b, const LabelSet &c) {
    if (b.empty() || c.empty()) fail(ErrorKind::UnknownSubsystem, "petz_recovery needs nonempty B and C");
    if (!disjoint(b, c)) fail(ErrorKind::OverlappingRegions, "B and C overlap");
    const auto ordered = regrouped(rho_bc, {b, c});
    const auto &lay = ordered.layout();
    const std::size_t nb = b.size();
    std::vector<Site> bs(lay.sites().begin(), lay.sites().begin() + static_cast<long>(nb));
    std::vector<Site> cs(lay.sites().begin() + static_cast<long>(nb), lay.sites().end());
    RecoveryMap map{FactorLayout(bs), FactorLayout(cs), {}};

    const auto db = static_cast<Eigen::Index>(map.input.total_dim());
    const auto dc = static_cast<Eigen::Index>(map.extension.total_dim());
    const Matrix rho_b = trace_trailing(ordered.data(), static_cast<std::size_t>(dc));
    const Matrix root_bc = psd_sqrt(ordered.data());
    const Matrix inv_root_b = pinv_sqrt(rho_b);
    const Matrix kernel = Matrix::Identity(db, db) - support_projector(rho_b);

    for (Eigen::Index k = 0; k < dc; ++k) {
        Matrix lift = Matrix::Zero(db * dc, db);
        for (Eigen::Index i = 0; i < db; ++i) lift.row(i * dc + k) = inv_root_b.row(i);
        map.kraus.push_back(root_bc * lift);
    }
    if (max_abs(kernel) > tol::hermitian) {
        Matrix lift = Matrix::Zero(db * dc, db);
        for (Eigen::Index i = 0; i < db; ++i) lift.row(i * dc) = kernel.row(i);
        map.kraus.push_back(lift);
    }
    return map;
}

/// Same map with ρ_B supplied by the caller; it must be the B-marginal of ρ_BC
/// within `tol` in trace distance.
inline RecoveryMap petz_recovery(const DensityMatrix &rho_bc, const DensityMatrix &rho_b, const LabelSet &c,
                                 double tol = 1e-9) {
    const LabelSet b = rho_b.labels();
    const auto own = partial_trace(rho_bc, b);
    const double gap = trace_distance(own, rho_b.reordered(own.labels()));
    if (gap > tol) fail(ErrorKind::InconsistentMarginal, "rho_B differs from Tr_C rho_BC by " + std::to_string(gap));
    return petz_recovery(rho_bc, b, c);
}

/// (id ⊗ Λ)(ρ) where Λ acts on the map's input labels. The output layout is
/// (rest of ρ in its order, map input, map extension).
inline DensityMatrix apply_recovery(const RecoveryMap &map, const DensityMatrix &rho) {
    const auto in_labels = map.input.labels();
    for (const auto &l : map.extension.labels()) {
        if (rho.layout().contains(l)) fail(ErrorKind::DuplicateLabel, "state already holds '" + l + "'");
    }
    const auto &lay = rho.layout();
    std::vector<std::size_t> group;
    for (const auto &l : in_labels) {
        if (lay[lay.index_of(l)].dim != map.input[group.size()].dim) {
            fail(ErrorKind::SupportMismatch, "dimension mismatch on '" + l + "'");
        }
        group.push_back(lay.index_of(l));
    }
    std::vector<Site> rest;
    for (std::size_t i = 0; i < lay.size(); ++i) {
        if (std::find(group.begin(), group.end(), i) == group.end()) rest.push_back(lay[i]);
    }
    const FactorLayout out_layout = FactorLayout(rest).concat(map.output());
    const auto dims = lay.dims();
    const auto dout = static_cast<Eigen::Index>(map.output().total_dim());
    const auto drest = static_cast<Eigen::Index>(FactorLayout(rest).total_dim());
    Matrix out = Matrix::Zero(drest * dout, drest * dout);
    for (const auto &k : map.kraus) out += apply_on_group(rho.data(), dims, group, k, k.adjoint());
    return {out_layout, out, DensityMatrix::Trusted{}};
}

/// Result of a Markov-chain test for A - B - C.
struct MarkovCheck {
    bool is_markov = false;
    double cmi = 0;           // I(A:C|B) in nats
    double recovery_error = 0;  // ||Λ_{B->BC}(ρ_AB) - ρ_ABC||_1
};

inline MarkovCheck is_qms(const DensityMatrix &rho, const LabelSet &a, const LabelSet &b, const LabelSet &c,
                          double tol = 1e-7) {
    MarkovCheck out;
    out.cmi = conditional_mutual_information(rho, a, b, c);
    auto abc = set_union({a, b, c});
    const DensityMatrix full = abc.size() == rho.layout().size() ? rho : partial_trace(rho, abc);
    auto map = petz_recovery(partial_trace(full, set_union(b, c)), b, c);
    auto rec = apply_recovery(map, partial_trace(full, set_union(a, b)));
    out.recovery_error = trace_distance(rec.reordered(full.labels()), full);
    out.is_markov = out.cmi <= tol;
    return out;
}

}  // namespace irrcorr
