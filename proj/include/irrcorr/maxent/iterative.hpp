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
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "irrcorr/core/density_matrix.hpp"
#include "irrcorr/core/entropy.hpp"
#include "irrcorr/core/errors.hpp"

namespace irrcorr {

/// Target marginals on groups of sites. Groups are label sets of the layout.
struct MarginalConstraintSet {
    FactorLayout layout;
    std::vector<std::pair<LabelSet, DensityMatrix>> targets;

    /// All k-subsets of `parts` with the matching marginals of ρ.
    static MarginalConstraintSet from_state(const DensityMatrix &rho, const std::vector<LabelSet> &parts,
                                            std::size_t k) {
        if (k == 0 || k > parts.size()) fail(ErrorKind::InvalidState, "constraint order out of range");
        MarginalConstraintSet set{rho.layout(), {}};
        std::vector<bool> pick(parts.size(), false);
        std::fill(pick.begin(), pick.begin() + static_cast<long>(k), true);
        do {
            LabelSet s;
            for (std::size_t i = 0; i < parts.size(); ++i) {
                if (pick[i]) s = set_union(s, parts[i]);
            }
            set.targets.emplace_back(s, partial_trace(rho, s));
        } while (std::prev_permutation(pick.begin(), pick.end()));
        return set;
    }

    /// Largest trace distance between overlapping targets on their intersection.
    double compatibility_error() const {
        double worst = 0;
        for (std::size_t i = 0; i < targets.size(); ++i) {
            for (std::size_t j = i + 1; j < targets.size(); ++j) {
                LabelSet common;
                for (const auto &l : targets[i].first) {
                    if (std::find(targets[j].first.begin(), targets[j].first.end(), l) != targets[j].first.end()) {
                        common.push_back(l);
                    }
                }
                if (common.empty()) continue;
                worst = std::max(worst, trace_distance(partial_trace(targets[i].second, common),
                                                       partial_trace(targets[j].second, common)));
            }
        }
        return worst;
    }
};

struct MaxentOptions {
    double tol = 1e-9;           // max marginal trace distance
    std::size_t max_iter = 20000;
    double eps = 1e-13;          // regularizer for zero eigenvalues
    double damping = 0.5;
    std::optional<Matrix> initial;  // starting state; maximally mixed if absent
};

struct MaxentResult {
    DensityMatrix state;
    std::size_t iterations = 0;
    double residual = 0;
    bool converged = false;
};

/// Thrown when the solver stops without meeting the tolerance; carries the
/// best iterate.
class ConvergenceError : public Error {
  public:
    ConvergenceError(const std::string &what, MaxentResult best)
        : Error(ErrorKind::ConvergenceFailure, what), best_(std::move(best)) {}
    const MaxentResult &best() const { return best_; }

  private:
    MaxentResult best_;
};

namespace detail {

struct MaxentState {
    std::vector<Matrix> fields;  // local terms H_S, one per target
    Matrix h;                    // Σ_S embed(H_S)
    Matrix rho;
    std::vector<Matrix> marginals;
    double residual = 0;
    double dual = 0;  // ln Tr e^H - Σ_S Tr(ρ_S^target H_S)
};

inline void evaluate(const MarginalConstraintSet &c, MaxentState &st) {
    auto e = eigh(st.h);
    const double top = e.values.maxCoeff();
    Matrix w = hermitian_function(e, [top](double x) { return std::exp(x - top); });
    const double z = w.trace().real();
    st.rho = w / z;
    st.dual = top + std::log(z);
    st.marginals.clear();
    st.residual = 0;
    const auto dims = c.layout.dims();
    for (std::size_t s = 0; s < c.targets.size(); ++s) {
        const auto &[labels, target] = c.targets[s];
        st.marginals.push_back(partial_trace_positions(st.rho, dims, c.layout.positions(labels)));
        st.residual = std::max(st.residual, trace_distance(st.marginals.back(), target.data()));
        st.dual -= (target.data() * st.fields[s]).trace().real();
    }
}

}  // namespace detail

/// Maximum-entropy state with the given marginals, by damped multiplicative
/// information projection on a Gibbs family exp(Σ_S H_S). Steps are halved
/// when the convex dual does not decrease.
inline MaxentResult iterative_maxent(const MarginalConstraintSet &c, const MaxentOptions &opt = {}) {
    if (c.targets.empty()) fail(ErrorKind::InvalidState, "no constraints");
    const auto d = static_cast<Eigen::Index>(c.layout.total_dim());
    std::vector<Matrix> target_logs;
    for (const auto &[labels, target] : c.targets) target_logs.push_back(regularized_log(target.data(), opt.eps));

    detail::MaxentState st;
    for (const auto &[labels, target] : c.targets) {
        const auto ds = static_cast<Eigen::Index>(target.dim());
        st.fields.push_back(Matrix::Zero(ds, ds));
    }
    st.h = opt.initial ? regularized_log(*opt.initial, opt.eps) : Matrix::Zero(d, d);
    detail::evaluate(c, st);

    double lambda = opt.damping;
    std::size_t it = 0;
    for (; it < opt.max_iter && st.residual >= opt.tol; ++it) {
        std::vector<Matrix> steps;
        Matrix dh = Matrix::Zero(d, d);
        for (std::size_t s = 0; s < c.targets.size(); ++s) {
            steps.push_back(target_logs[s] - regularized_log(st.marginals[s], opt.eps));
            dh += embed(steps.back(), c.layout, c.targets[s].first);
        }
        bool accepted = false;
        while (lambda > 1e-8) {
            detail::MaxentState trial;
            trial.h = st.h + lambda * dh;
            for (std::size_t s = 0; s < steps.size(); ++s) trial.fields.push_back(st.fields[s] + lambda * steps[s]);
            detail::evaluate(c, trial);
            if (trial.dual <= st.dual + 1e-14 * std::max(1.0, std::abs(st.dual))) {
                st = std::move(trial);
                accepted = true;
                lambda = std::min(opt.damping, lambda * 1.5);
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted) break;
    }
    MaxentResult res{DensityMatrix(c.layout, st.rho, DensityMatrix::Trusted{}), it, st.residual,
                     st.residual < opt.tol};
    if (!res.converged) {
        throw ConvergenceError("maxent residual " + std::to_string(st.residual) + " after " + std::to_string(it) +
                                   " iterations",
                               res);
    }
    return res;
}

/// D^(k)(ρ) = S(ρ̃^(k)) - S(ρ) over the parties `parts`. k = 1 uses the product
/// of marginals and k = n returns 0.
inline double distance_Dk(const DensityMatrix &rho, const std::vector<LabelSet> &parts, std::size_t k,
                          const MaxentOptions &opt = {}) {
    const std::size_t n = parts.size();
    if (k == 0 || k > n) fail(ErrorKind::InvalidState, "k must lie in [1, n]");
    if (k == n) return 0.0;
    if (k == 1) return total_correlation(rho, parts);
    auto c = MarginalConstraintSet::from_state(rho, parts, k);
    return von_neumann_entropy(iterative_maxent(c, opt).state) - von_neumann_entropy(rho);
}

/// C^(k)(ρ) = D^(k-1) - D^(k). Values in [-1e-6, 0) clamp to 0 and append a
/// warning when `warnings` is given.
inline double irreducible_correlation(const DensityMatrix &rho, const std::vector<LabelSet> &parts, std::size_t k,
                                      const MaxentOptions &opt = {}, std::vector<std::string> *warnings = nullptr) {
    if (k < 2 || k > parts.size()) fail(ErrorKind::InvalidState, "k must lie in [2, n]");
    double c = distance_Dk(rho, parts, k - 1, opt) - distance_Dk(rho, parts, k, opt);
    if (c < 0 && c >= -1e-6) {
        if (warnings) warnings->push_back("C^(" + std::to_string(k) + ") = " + std::to_string(c) + " clamped to 0");
        c = 0;
    }
    return c;
}

}  // namespace irrcorr
