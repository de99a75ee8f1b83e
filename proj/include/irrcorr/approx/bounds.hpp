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
#include <string>
#include <vector>

#include "irrcorr/core/entropy.hpp"
#include "irrcorr/markov/recovery.hpp"
#include "irrcorr/maxent/merge.hpp"

namespace irrcorr {

/// Residual bound epsilon (nats) and the derived delta and f(delta).
/// The exponent in 1 - 2^{-eps} is taken in bits.
struct ApproxParams {
    double epsilon = 0;  // nats
    double delta = 0;
    std::size_t d_a = 1, d_b = 1, d_c = 1;

    static double delta_of(double epsilon_nats) {
        const double bits = std::max(epsilon_nats, 0.0) / std::numbers::ln2;
        return 6.0 * std::sqrt(std::max(0.0, 1.0 - std::exp2(-bits)));
    }

    /// 2 delta ln(d_A d_B^2 d_C) + 3 eta(2 delta).
    static double fannes_term(double delta, std::size_t da, std::size_t db, std::size_t dc) {
        const double d = static_cast<double>(da) * static_cast<double>(db) * static_cast<double>(db) * static_cast<double>(dc);
        return 2 * delta * std::log(d) + 3 * eta(2 * delta);
    }

    /// 7 sqrt(delta) log2(d_A), converted to nats.
    static double recovery_term(double delta, std::size_t da) {
        return 7 * std::sqrt(delta) * std::log(static_cast<double>(da));
    }

    static double f_of(double delta, std::size_t da, std::size_t db, std::size_t dc) {
        return 2 * (fannes_term(delta, da, db, dc) + recovery_term(delta, da));
    }

    double f_delta() const { return f_of(delta, d_a, d_b, d_c); }

    static ApproxParams from(double epsilon, std::size_t da, std::size_t db, std::size_t dc) {
        return {epsilon, delta_of(epsilon), da, db, dc};
    }
};

struct ApproxMerge {
    DensityMatrix state;
    double delta_achieved = 0;  // max over the AB, BC, AC trace distances
    double dist_ab = 0, dist_bc = 0, dist_ac = 0;
    ApproxParams params;
    AnnulusResiduals residuals;
    bool within_delta = true;
};

/// Residuals at or below this are rounding noise and reported as zero, so an
/// exact fixed point gives delta = f = 0.
inline constexpr double kResidualFloor = 1e-12;

inline AnnulusResiduals assumption_residuals(const DensityMatrix &rho, const LabelSet &a, const LabelSet &b1,
                                             const LabelSet &b2, const LabelSet &c) {
    auto r = annulus_residuals(rho, a, b1, b2, c);
    for (double *x : {&r.mi_a_b2c, &r.cmi_a_b2, &r.cmi_b1_c}) {
        if (*x <= kResidualFloor) *x = 0;
    }
    return r;
}

/// Merge with the Petz map of rho_{B2 C}; never throws on large residuals.
inline ApproxMerge approx_merge(const DensityMatrix &rho, const LabelSet &a, const LabelSet &b1, const LabelSet &b2,
                                const LabelSet &c) {
    const LabelSet b = set_union(b1, b2);
    const auto res = assumption_residuals(rho, a, b1, b2, c);
    ApproxMerge out{petz_merge(rho, a, b1, b2, c), 0, 0, 0, 0, {}, res, true};
    const auto &lay = rho.layout();
    out.params = ApproxParams::from(res.worst(), lay.dim_of(a), lay.dim_of(b), lay.dim_of(c));
    const auto dist = [&](const LabelSet &s) {
        return trace_distance(partial_trace(out.state, s), partial_trace(rho, s));
    };
    out.dist_ab = dist(set_union(a, b));
    out.dist_bc = dist(set_union(b, c));
    out.dist_ac = dist(set_union(a, c));
    out.delta_achieved = std::max({out.dist_ab, out.dist_bc, out.dist_ac});
    out.within_delta = out.delta_achieved <= out.params.delta + 1e-9;
    return out;
}

/// Every intermediate quantity of the bound chain, in nats unless noted.
struct BoundReport {
    AnnulusResiduals residuals;
    ApproxParams params;
    double f_delta = 0;
    double delta_achieved = 0;
    double c_hat = 0;  // S(merged) - S(rho), a lower bound on the delta-relaxed C3
    double cmi = 0;    // I(A:C|B) of rho
    double cmi_merged = 0;
    // Pinsker step: ||rho_{AB2C} - rho_A ⊗ rho_{B2C}|| <= 2 sqrt(eps).
    double pinsker_lhs = 0, pinsker_rhs = 0;
    // Recovery step, plain Petz maps: both distances <= 2 sqrt(1 - 2^{-eps}).
    double recovery_ab_lhs = 0, recovery_bc_lhs = 0, recovery_rhs = 0;
    // Fannes step and the recovery-based CMI bound on the merged state.
    double fannes_term = 0;
    double recovery_term = 0;
    bool pinsker_ok = true;
    bool recovery_ok = true;
    bool merged_cmi_ok = true;
    bool delta_ok = true;
    bool lower_ok = true;   // c_hat >= cmi - f/2
    bool upper_ok = true;   // cmi >= c_hat - f

    bool holds() const { return lower_ok && upper_ok; }
};

inline BoundReport bound_check(const DensityMatrix &rho, const LabelSet &a, const LabelSet &b1, const LabelSet &b2,
                               const LabelSet &c, double slack = 1e-9) {
    const LabelSet b = set_union(b1, b2);
    const auto m = approx_merge(rho, a, b1, b2, c);
    BoundReport r;
    r.residuals = m.residuals;
    r.params = m.params;
    r.f_delta = m.params.f_delta();
    r.delta_achieved = m.delta_achieved;
    // Full-state entropies dominate the cost; each is computed once.
    const double s_rho = von_neumann_entropy(rho);
    const double s_merged = von_neumann_entropy(m.state);
    const auto cmi_given = [&](const DensityMatrix &x, double s_abc) {
        return entropy_of(x, set_union(a, b)) + entropy_of(x, set_union(b, c)) - entropy_of(x, b) - s_abc;
    };
    r.c_hat = s_merged - s_rho;
    r.cmi = cmi_given(rho, s_rho);
    r.cmi_merged = cmi_given(m.state, s_merged);

    const double eps_bits = m.params.epsilon / std::numbers::ln2;
    const auto ab2c = partial_trace(rho, set_union({a, b2, c}));
    const auto split = tensor(partial_trace(rho, a), partial_trace(rho, set_union(b2, c)));
    r.pinsker_lhs = trace_distance(ab2c.reordered(split.labels()), split);
    r.pinsker_rhs = 2 * std::sqrt(eps_bits);
    r.pinsker_ok = r.pinsker_lhs <= r.pinsker_rhs + slack;

    r.recovery_rhs = 2 * std::sqrt(std::max(0.0, 1 - std::exp2(-eps_bits)));
    {
        const auto ab = petz_recovery(partial_trace(rho, set_union(a, b1)), b1, a);
        const auto rec = apply_recovery(ab, partial_trace(rho, b));
        const auto target = partial_trace(rho, set_union({a, b1, b2}));
        r.recovery_ab_lhs = trace_distance(rec.reordered(target.labels()), target);
        const auto bc = petz_recovery(partial_trace(rho, set_union(b2, c)), b2, c);
        const auto rec2 = apply_recovery(bc, partial_trace(rho, b));
        const auto target2 = partial_trace(rho, set_union(b, c));
        r.recovery_bc_lhs = trace_distance(rec2.reordered(target2.labels()), target2);
    }
    r.recovery_ok = std::max(r.recovery_ab_lhs, r.recovery_bc_lhs) <= r.recovery_rhs + slack;

    const double delta = m.params.delta;
    r.fannes_term = ApproxParams::fannes_term(delta, m.params.d_a, m.params.d_b, m.params.d_c);
    r.recovery_term = ApproxParams::recovery_term(delta, m.params.d_a);
    r.merged_cmi_ok = r.cmi_merged <= r.recovery_term + slack;
    r.delta_ok = m.within_delta;
    r.lower_ok = r.c_hat >= r.cmi - 0.5 * r.f_delta - slack;
    r.upper_ok = r.cmi >= r.c_hat - r.f_delta - slack;
    return r;
}

/// Independent single-site depolarizing channel x -> (1-p) x + p Tr(x) I/d on
/// every factor.
inline DensityMatrix depolarize_all(const DensityMatrix &rho, double p) {
    Matrix x = rho.data();
    const auto dims = rho.layout().dims();
    for (std::size_t k = 0; k < dims.size(); ++k) {
        std::vector<std::size_t> rest;
        for (std::size_t j = 0; j < dims.size(); ++j) {
            if (j != k) rest.push_back(j);
        }
        // Move factor k to the end, trace it, and re-embed as I/d.
        std::vector<std::size_t> order = rest;
        order.push_back(k);
        std::vector<std::size_t> moved_dims;
        for (auto o : order) moved_dims.push_back(dims[o]);
        const Matrix moved = permute_factors(x, dims, order);
        const auto d = static_cast<Eigen::Index>(dims[k]);
        const Matrix mixed = kron(trace_trailing(moved, dims[k]), Matrix::Identity(d, d) / static_cast<double>(d));
        Matrix out = (1 - p) * moved + p * mixed;
        std::vector<std::size_t> inverse(order.size());
        for (std::size_t i = 0; i < order.size(); ++i) inverse[order[i]] = i;
        x = permute_factors(out, moved_dims, inverse);
    }
    return {rho.layout(), x, DensityMatrix::Trusted{}};
}

}  // namespace irrcorr
