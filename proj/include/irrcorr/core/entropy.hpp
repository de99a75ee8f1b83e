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
#include <numbers>
#include <vector>

#include "irrcorr/core/density_matrix.hpp"

namespace irrcorr {

inline constexpr double kLn2 = std::numbers::ln2;

/// Von Neumann entropy in nats.
inline double von_neumann_entropy(const DensityMatrix &rho) {
    return std::max(0.0, entropy_of_eigenvalues(rho.eigenvalues()));
}

inline double entropy_of(const DensityMatrix &rho, const LabelSet &region) {
    if (region.empty()) return 0.0;
    return von_neumann_entropy(partial_trace(rho, region));
}

/// Quantum relative entropy S(rho||sigma) in nats. Throws SupportMismatch when
/// rho has weight outside the support of sigma (the divergence is infinite).
inline double relative_entropy(const DensityMatrix &rho, const DensityMatrix &sigma) {
    if (!(rho.layout() == sigma.layout())) fail(ErrorKind::UnknownSubsystem, "relative_entropy: layouts differ");
    auto es = eigh(sigma.data());
    const double cut = support_threshold(es.values);
    RealVector kernel = es.values.unaryExpr([cut](double x) { return x > cut ? 0.0 : 1.0; });
    Matrix kernel_proj = es.vectors * kernel.asDiagonal() * es.vectors.adjoint();
    const double leak = (rho.data() * kernel_proj).trace().real();
    if (leak > 1e-10) {
        fail(ErrorKind::SupportMismatch, "support of rho not contained in support of sigma (leak " +
                                             std::to_string(leak) + ")");
    }
    Matrix log_sigma = hermitian_function(es, [cut](double x) { return x > cut ? std::log(x) : 0.0; });
    const double cross = (rho.data() * log_sigma).trace().real();
    return -von_neumann_entropy(rho) - cross;
}

/// I(A:B) = S(A) + S(B) - S(AB).
inline double mutual_information(const DensityMatrix &rho, const LabelSet &a, const LabelSet &b) {
    if (!disjoint(a, b)) fail(ErrorKind::OverlappingRegions, "mutual_information: regions overlap");
    return entropy_of(rho, a) + entropy_of(rho, b) - entropy_of(rho, set_union(a, b));
}

/// I(A:C|B) = S(AB) + S(BC) - S(B) - S(ABC).
inline double conditional_mutual_information(const DensityMatrix &rho, const LabelSet &a, const LabelSet &b,
                                             const LabelSet &c) {
    if (!disjoint(a, b) || !disjoint(b, c) || !disjoint(a, c)) {
        fail(ErrorKind::OverlappingRegions, "conditional_mutual_information: regions overlap");
    }
    return entropy_of(rho, set_union(a, b)) + entropy_of(rho, set_union(b, c)) - entropy_of(rho, b) -
           entropy_of(rho, set_union({a, b, c}));
}

/// C^T = sum_i S(rho_i) - S(rho) over a partition of the layout.
inline double total_correlation(const DensityMatrix &rho, const std::vector<LabelSet> &parts) {
    LabelSet all;
    for (const auto &p : parts) {
        if (!disjoint(all, p)) fail(ErrorKind::OverlappingRegions, "total_correlation: parts overlap");
        all = set_union(all, p);
    }
    if (all.size() != rho.layout().size()) {
        fail(ErrorKind::UnknownSubsystem, "total_correlation: parts do not cover the layout");
    }
    double sum = 0;
    for (const auto &p : parts) sum += entropy_of(rho, p);
    return sum - von_neumann_entropy(rho);
}

/// Unnormalized trace norm ||a - b||_1, in [0, 2].
inline double trace_distance(const Matrix &a, const Matrix &b) { return eigvalsh(a - b).cwiseAbs().sum(); }

inline double trace_distance(const DensityMatrix &a, const DensityMatrix &b) {
    if (a.dim() != b.dim()) fail(ErrorKind::UnknownSubsystem, "trace_distance: dimensions differ");
    return trace_distance(a.data(), b.data());
}

/// Uhlmann fidelity Tr sqrt(sqrt(a) b sqrt(a)) (not squared).
inline double fidelity(const DensityMatrix &a, const DensityMatrix &b) {
    if (a.dim() != b.dim()) fail(ErrorKind::UnknownSubsystem, "fidelity: dimensions differ");
    Matrix sa = psd_sqrt(a.data());
    RealVector ev = eigvalsh(sa * b.data() * sa);
    double f = 0;
    for (double x : ev) f += x > 0 ? std::sqrt(x) : 0.0;
    return std::clamp(f, 0.0, 1.0);
}

/// Largest trace distance between the reduced states of a and b over
/// `regions`; the two states may order their factors differently.
inline double max_marginal_distance(const DensityMatrix &a, const DensityMatrix &b,
                                    const std::vector<LabelSet> &regions) {
    double worst = 0;
    for (const auto &r : regions) {
        const auto ma = partial_trace(a, r);
        worst = std::max(worst, trace_distance(ma, partial_trace(b, r).reordered(ma.labels())));
    }
    return worst;
}

}  // namespace irrcorr
