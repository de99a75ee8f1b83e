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
#include <utility>

#include "irrcorr/core/errors.hpp"
#include "irrcorr/core/layout.hpp"
#include "irrcorr/core/linalg.hpp"

namespace irrcorr {

/// Unit-trace positive semidefinite operator on a labelled tensor product.
///
/// Instances are immutable. The public constructor symmetrizes its input and
/// validates trace and positivity; operations that provably map states to
/// states (partial trace, tensor products, factor permutations) use the
/// trusted path and only re-symmetrize.
class DensityMatrix {
  public:
    struct Trusted {};

    DensityMatrix(FactorLayout layout, const Matrix &data) : layout_(std::move(layout)) {
        check_shape(data);
        const double scale = std::max(1.0, max_abs(data));
        if (max_abs(data - data.adjoint()) > 1e-8 * scale) {
            fail(ErrorKind::InvalidState, "matrix is not Hermitian");
        }
        data_ = hermitize(data);
        validate();
    }

    DensityMatrix(FactorLayout layout, const Matrix &data, Trusted) : layout_(std::move(layout)) {
        check_shape(data);
        data_ = hermitize(data);
    }

    /// Normalizes a PSD operator to unit trace before validating.
    static DensityMatrix normalized(FactorLayout layout, const Matrix &data) {
        const double tr = data.trace().real();
        if (!(tr > 0)) fail(ErrorKind::InvalidState, "cannot normalize operator with non-positive trace");
        return DensityMatrix(std::move(layout), data / tr);
    }

    static DensityMatrix pure(FactorLayout layout, const Vector &psi) {
        Vector v = psi / psi.norm();
        return DensityMatrix(std::move(layout), v * v.adjoint());
    }

    static DensityMatrix maximally_mixed(FactorLayout layout) {
        const auto d = static_cast<Eigen::Index>(layout.total_dim());
        return DensityMatrix(std::move(layout), Matrix::Identity(d, d) / static_cast<double>(d), Trusted{});
    }

    const FactorLayout &layout() const { return layout_; }
    const Matrix &data() const { return data_; }
    std::size_t dim() const { return static_cast<std::size_t>(data_.rows()); }
    LabelSet labels() const { return layout_.labels(); }

    RealVector eigenvalues() const { return eigvalsh(data_); }

    /// Same operator with the factors relabelled in place (dims must match).
    DensityMatrix relabeled(const LabelSet &labels) const {
        if (labels.size() != layout_.size()) fail(ErrorKind::UnknownSubsystem, "relabel arity mismatch");
        std::vector<Site> sites;
        for (std::size_t i = 0; i < labels.size(); ++i) sites.push_back({labels[i], layout_[i].dim});
        return {FactorLayout(std::move(sites)), data_, Trusted{}};
    }

    /// Same state with factors reordered as `order` (a permutation of labels).
    DensityMatrix reordered(const LabelSet &order) const {
        if (order.size() != layout_.size()) fail(ErrorKind::UnknownSubsystem, "reorder must list every label");
        std::vector<std::size_t> pos;
        for (const auto &l : order) pos.push_back(layout_.index_of(l));
        return {layout_.reordered(order), permute_factors(data_, layout_.dims(), pos), Trusted{}};
    }

  private:
    void check_shape(const Matrix &data) const {
        const auto d = static_cast<Eigen::Index>(layout_.total_dim());
        if (data.rows() != d || data.cols() != d) {
            fail(ErrorKind::InvalidState, "matrix shape " + std::to_string(data.rows()) + "x" +
                                              std::to_string(data.cols()) + " does not match layout dimension " +
                                              std::to_string(d));
        }
    }

    void validate() const {
        const double tr = data_.trace().real();
        if (std::abs(tr - 1.0) > tol::trace) {
            fail(ErrorKind::InvalidState, "trace " + std::to_string(tr) + " differs from 1");
        }
        const double lmin = eigvalsh(data_).minCoeff();
        if (lmin < -tol::positivity) {
            fail(ErrorKind::InvalidState, "negative eigenvalue " + std::to_string(lmin));
        }
    }

    FactorLayout layout_;
    Matrix data_;
};

inline DensityMatrix tensor(const DensityMatrix &a, const DensityMatrix &b) {
    for (const auto &l : b.labels()) {
        if (a.layout().contains(l)) fail(ErrorKind::DuplicateLabel, "label '" + l + "' present in both factors");
    }
    return {a.layout().concat(b.layout()), kron(a.data(), b.data()), DensityMatrix::Trusted{}};
}

/// Reduced state on `keep`, in the parent layout's order.
inline DensityMatrix partial_trace(const DensityMatrix &rho, const LabelSet &keep) {
    if (keep.empty()) fail(ErrorKind::UnknownSubsystem, "partial_trace needs a nonempty label set");
    auto pos = rho.layout().positions(keep);
    return {rho.layout().restrict_to(keep), partial_trace_positions(rho.data(), rho.layout().dims(), pos),
            DensityMatrix::Trusted{}};
}

/// Concatenation of label groups, each group sorted by layout position.
inline LabelSet grouped_labels(const FactorLayout &layout, std::initializer_list<LabelSet> groups) {
    LabelSet out;
    for (const auto &g : groups) {
        for (auto p : layout.positions(g)) out.push_back(layout[p].label);
    }
    return out;
}

/// `rho` with its factors regrouped as (g_1, g_2, ...); the groups must cover
/// the layout exactly.
inline DensityMatrix regrouped(const DensityMatrix &rho, std::initializer_list<LabelSet> groups) {
    return rho.reordered(grouped_labels(rho.layout(), groups));
}

/// Operator on `labels` (ordered as in `layout`) lifted to the full layout as op ⊗ I.
inline Matrix embed(const Matrix &op, const FactorLayout &layout, const LabelSet &labels) {
    auto pos = layout.positions(labels);
    std::size_t rest = 1;
    std::vector<std::size_t> order = pos;
    for (std::size_t i = 0; i < layout.size(); ++i) {
        if (std::find(pos.begin(), pos.end(), i) == pos.end()) {
            order.push_back(i);
            rest *= layout[i].dim;
        }
    }
    const auto r = static_cast<Eigen::Index>(rest);
    Matrix lifted = kron(op, Matrix::Identity(r, r));
    // lifted lives on factors ordered as `order`; invert the permutation.
    std::vector<std::size_t> inverse(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) inverse[order[k]] = k;
    std::vector<std::size_t> permuted_dims;
    for (auto o : order) permuted_dims.push_back(layout[o].dim);
    return permute_factors(lifted, permuted_dims, inverse);
}

}  // namespace irrcorr
