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
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "irrcorr/core/entropy.hpp"
#include "irrcorr/maxent/iterative.hpp"
#include "irrcorr/maxent/merge.hpp"

namespace irrcorr {

/// A tripartition with optional splits used by the closed-form merges.
struct TeeRegions {
    LabelSet A, B, C;
    std::optional<std::pair<LabelSet, LabelSet>> b_split;  // (B1, B2)
    std::optional<std::array<LabelSet, 6>> ring;           // X_1..X_6, A = X1X2, B = X3X4, C = X5X6
};

struct CorrelationReport {
    std::map<std::string, double> S_values;  // A, B, C, AB, BC, CA, ABC
    double gamma = 0;
    double C3 = 0;
    double C2 = 0;  // D^(1) - D^(2)
    double CT = 0;
    double pairwise_mi_sum = 0;  // I(A:B) + I(B:C) + I(C:A)
    std::vector<double> D_k;     // D^(1), D^(2), D^(3)
    double verdict = 0;          // |gamma - C3|
    std::string method;          // merge-annulus, merge-ring or iterative
    bool assumption_violated = false;
    std::vector<std::string> notes;
    double marginal_residual = 0;  // max 2-RDM trace distance of the maxent state
};

/// Entropy bookkeeping for a tripartition plus C^(3) through the cheapest
/// applicable route: the ring merge, the annulus merge, or the iterative solver.
inline CorrelationReport tee_dense(const DensityMatrix &rho, const TeeRegions &reg, const MaxentOptions &opt = {},
                                   std::uint64_t seed = 7, double assumption_tol = 1e-7) {
    if (!disjoint(reg.A, reg.B) || !disjoint(reg.B, reg.C) || !disjoint(reg.A, reg.C)) {
        fail(ErrorKind::OverlappingRegions, "A, B, C must be disjoint");
    }
    const LabelSet abc = set_union({reg.A, reg.B, reg.C});
    const DensityMatrix full = abc.size() == rho.layout().size() ? rho : partial_trace(rho, abc);
    CorrelationReport rep;
    auto s = [&](const LabelSet &r) { return entropy_of(full, r); };
    const double sa = s(reg.A), sb = s(reg.B), sc = s(reg.C);
    const double sab = s(set_union(reg.A, reg.B)), sbc = s(set_union(reg.B, reg.C)), sca = s(set_union(reg.C, reg.A));
    const double sabc = von_neumann_entropy(full);
    rep.S_values = {{"A", sa}, {"B", sb}, {"C", sc}, {"AB", sab}, {"BC", sbc}, {"CA", sca}, {"ABC", sabc}};
    rep.gamma = sab + sbc + sca - sa - sb - sc - sabc;
    rep.CT = sa + sb + sc - sabc;
    rep.pairwise_mi_sum = (sa + sb - sab) + (sb + sc - sbc) + (sc + sa - sca);

    std::optional<DensityMatrix> tilde;
    if (reg.ring) {
        try {
            tilde = merge_ring(full, *reg.ring, assumption_tol, seed).state;
            rep.method = "merge-ring";
        } catch (const Error &e) {
            if (e.kind() != ErrorKind::AssumptionViolated) throw;
            rep.assumption_violated = true;
            rep.notes.push_back(std::string("ring merge skipped: ") + e.what());
        }
    }
    if (!tilde && reg.b_split) {
        try {
            tilde = merge_annulus(full, reg.A, reg.b_split->first, reg.b_split->second, reg.C, assumption_tol);
            rep.method = "merge-annulus";
        } catch (const Error &e) {
            if (e.kind() != ErrorKind::AssumptionViolated) throw;
            rep.assumption_violated = true;
            rep.notes.push_back(std::string("annulus merge skipped: ") + e.what());
        }
    }
    if (!tilde && !reg.ring && !reg.b_split) {
        rep.assumption_violated = true;
        rep.notes.push_back("no split given; merge assumptions not established");
    }
    if (!tilde) {
        auto c = MarginalConstraintSet::from_state(full, {reg.A, reg.B, reg.C}, 2);
        tilde = iterative_maxent(c, opt).state;
        rep.method = "iterative";
    }
    rep.marginal_residual = max_marginal_distance(*tilde, full, {set_union(reg.A, reg.B), set_union(reg.B, reg.C),
                                                                 set_union(reg.C, reg.A)});
    rep.C3 = von_neumann_entropy(*tilde) - sabc;
    if (rep.C3 < 0 && rep.C3 >= -1e-6) {
        rep.notes.push_back("C^(3) = " + std::to_string(rep.C3) + " clamped to 0");
        rep.C3 = 0;
    }
    rep.D_k = {rep.CT, rep.C3, 0.0};
    rep.C2 = rep.CT - rep.C3;
    rep.verdict = std::abs(rep.gamma - rep.C3);
    return rep;
}

}  // namespace irrcorr
