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
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "irrcorr/core/density_matrix.hpp"
#include "irrcorr/core/entropy.hpp"
#include "irrcorr/core/errors.hpp"

namespace irrcorr {

inline const std::string kLeftLabel = "BL";
inline const std::string kRightLabel = "BR";

/// One summand p_i ρ_{A B_i^L} ⊗ ρ_{B_i^R C} of a Markov state.
struct MarkovBlock {
    double weight = 0;
    std::size_t left_dim = 1;
    std::size_t right_dim = 1;
    /// d_B x (left_dim * right_dim) isometry from B_i^L ⊗ B_i^R into B.
    Matrix isometry;
    DensityMatrix left;   // A ⊗ BL
    DensityMatrix right;  // BR ⊗ C

    Matrix projector() const { return isometry * isometry.adjoint(); }
};

struct MarkovDecomposition {
    LabelSet A, B, C;  // each in source layout order
    FactorLayout layout;  // sites ordered (A, B, C)
    std::vector<MarkovBlock> blocks;

    /// Sorted (left_dim, right_dim) pairs.
    std::vector<std::pair<std::size_t, std::size_t>> shape() const {
        std::vector<std::pair<std::size_t, std::size_t>> s;
        for (const auto &b : blocks) s.emplace_back(b.left_dim, b.right_dim);
        std::sort(s.begin(), s.end());
        return s;
    }

    std::size_t dim_a() const { return layout.dim_of(A); }
    std::size_t dim_b() const { return layout.dim_of(B); }
    std::size_t dim_c() const { return layout.dim_of(C); }
};

namespace detail {

/// Orthonormal basis (Hilbert-Schmidt) of a growing operator span.
class OperatorSpan {
  public:
    explicit OperatorSpan(Eigen::Index n) : n_(n), basis_(n * n, 0) {}

    Eigen::Index size() const { return basis_.cols(); }
    Eigen::Index dim() const { return n_; }

    /// Adds the component of m orthogonal to the span when it exceeds
    /// rel_tol * scale (scale defaults to |m|). Pass the norm of the factors a
    /// candidate was built from so that cancellation noise is not mistaken
    /// for a new direction.
    bool add(const Matrix &m, double scale = 0, double rel_tol = 1e-7) {
        Vector v = Eigen::Map<const Vector>(m.data(), n_ * n_);
        const double norm0 = v.norm();
        if (norm0 < 1e-300) return false;
        for (int pass = 0; pass < 2 && size() > 0; ++pass) v -= basis_ * (basis_.adjoint() * v);
        const double res = v.norm();
        if (res < rel_tol * (scale > 0 ? std::max(scale, norm0) : norm0)) return false;
        basis_.conservativeResize(Eigen::NoChange, size() + 1);
        v /= res;
        for (int pass = 0; pass < 2; ++pass) v -= basis_.leftCols(size() - 1) * (basis_.leftCols(size() - 1).adjoint() * v);
        basis_.col(size() - 1) = v / v.norm();
        return true;
    }

    Matrix element(Eigen::Index k) const { return Eigen::Map<const Matrix>(basis_.col(k).data(), n_, n_); }

    Matrix combination(const Vector &coeffs) const {
        Vector v = basis_ * coeffs;
        return Eigen::Map<const Matrix>(v.data(), n_, n_);
    }

    const Matrix &basis() const { return basis_; }

  private:
    Eigen::Index n_;
    Matrix basis_;
};

inline Vector random_coefficients(Eigen::Index k, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    Vector c(k);
    for (Eigen::Index i = 0; i < k; ++i) c(i) = Complex(g(rng), g(rng));
    return c;
}

inline Matrix random_hermitian_in(const OperatorSpan &span, std::mt19937_64 &rng) {
    Matrix h = hermitize(span.combination(random_coefficients(span.size(), rng)));
    return h / h.norm();
}

/// Groups ascending eigenvalues into clusters with gaps at most `gap`.
inline std::vector<std::pair<Eigen::Index, Eigen::Index>> clusters(const RealVector &values, double gap) {
    std::vector<std::pair<Eigen::Index, Eigen::Index>> out;  // [begin, end)
    Eigen::Index begin = 0;
    for (Eigen::Index i = 1; i <= values.size(); ++i) {
        if (i == values.size() || values(i) - values(i - 1) > gap) {
            out.emplace_back(begin, i);
            begin = i;
        }
    }
    return out;
}

/// Unital *-algebra generated by `gens` (Hermitian, n x n).
inline OperatorSpan generated_algebra(const std::vector<Matrix> &gens, Eigen::Index n) {
    OperatorSpan alg(n);
    alg.add(Matrix::Identity(n, n));
    std::vector<Matrix> frontier{Matrix::Identity(n, n)};
    while (!frontier.empty()) {
        std::vector<Matrix> next;
        for (const auto &f : frontier) {
            for (const auto &g : gens) {
                Matrix w = f * g;
                if (alg.add(w, f.norm() * g.norm())) next.push_back(alg.element(alg.size() - 1));
            }
        }
        frontier = std::move(next);
    }
    return alg;
}

struct BlockFactor {
    Matrix isometry;  // r x (n m), columns index k * m + j
    std::size_t n = 1, m = 1;
};

/// Splits the simple block spanned by `v` (r x D) of the algebra into C^n ⊗ C^m.
inline BlockFactor factor_block(const OperatorSpan &alg, const Matrix &v, std::mt19937_64 &rng) {
    const Eigen::Index big_d = v.cols();
    OperatorSpan local(big_d);
    for (Eigen::Index k = 0; k < alg.size(); ++k) local.add(v.adjoint() * alg.element(k) * v, 1.0);
    const auto a = static_cast<std::size_t>(local.size());
    const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(a))));
    if (n * n != a || static_cast<std::size_t>(big_d) % n != 0) {
        fail(ErrorKind::DecompositionFailed, "block algebra of dimension " + std::to_string(a) +
                                                 " on a " + std::to_string(big_d) + "-dim space is not a full matrix block");
    }
    const std::size_t m = static_cast<std::size_t>(big_d) / n;
    const auto mi = static_cast<Eigen::Index>(m);
    for (int attempt = 0; attempt < 8; ++attempt) {
        auto e = eigh(random_hermitian_in(local, rng));
        const double scale = std::max(e.values.cwiseAbs().maxCoeff(), 1.0);
        auto groups = clusters(e.values, 1e-7 * scale);
        if (groups.size() != n) continue;
        bool sizes_ok = std::all_of(groups.begin(), groups.end(),
                                    [&](const auto &g) { return g.second - g.first == mi; });
        if (!sizes_ok) continue;

        Matrix x = local.combination(random_coefficients(local.size(), rng));
        const Matrix e1 = e.vectors.middleCols(groups[0].first, mi);
        Matrix iso(big_d, big_d);
        bool ok = true;
        for (std::size_t k = 0; k < n && ok; ++k) {
            const Matrix ek = e.vectors.middleCols(groups[k].first, mi);
            Matrix t = ek.adjoint() * x * e1;
            const double c = t.norm() / std::sqrt(static_cast<double>(m));
            if (c < 1e-6 * x.norm()) {
                ok = false;
                break;
            }
            t /= c;
            if (max_abs(t.adjoint() * t - Matrix::Identity(mi, mi)) > 1e-6) {
                ok = false;
                break;
            }
            iso.middleCols(static_cast<Eigen::Index>(k) * mi, mi) = ek * t;
        }
        if (ok) return {v * iso, n, m};
    }
    fail(ErrorKind::DecompositionFailed, "could not split a block into tensor factors");
}

/// Isometries B_i^L ⊗ B_i^R -> B (on the full space of B) for the algebra
/// attached to ρ_AB.
inline std::vector<BlockFactor> markov_blocks(const Matrix &rho_ab, std::size_t da, std::size_t db,
                                              std::mt19937_64 &rng) {
    const auto dai = static_cast<Eigen::Index>(da);
    const auto dbi = static_cast<Eigen::Index>(db);
    const Matrix rho_b = trace_leading(rho_ab, da);
    auto eb = eigh(rho_b);
    const double cut = support_threshold(eb.values);
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < eb.values.size(); ++i) {
        if (eb.values(i) > cut) keep.push_back(i);
    }
    const auto r = static_cast<Eigen::Index>(keep.size());
    Matrix vs(dbi, r);
    RealVector lam(r);
    for (Eigen::Index i = 0; i < r; ++i) {
        vs.col(i) = eb.vectors.col(keep[static_cast<std::size_t>(i)]);
        lam(i) = eb.values(keep[static_cast<std::size_t>(i)]);
    }
    const RealVector inv_root = lam.cwiseSqrt().cwiseInverse();
    const RealVector log_lam = lam.array().log();

    // Generators Z = ρ_B^{-1/2} Tr_A[(X ⊗ I) ρ_AB] ρ_B^{-1/2} on the support.
    OperatorSpan gen(r);
    for (Eigen::Index a1 = 0; a1 < dai; ++a1) {
        for (Eigen::Index a2 = 0; a2 < dai; ++a2) {
            Matrix z = vs.adjoint() * rho_ab.block(a1 * dbi, a2 * dbi, dbi, dbi) * vs;
            z = inv_root.asDiagonal() * z * inv_root.asDiagonal();
            gen.add(z, z.norm());
        }
    }
    // Closure under the modular derivation X -> [log ρ_B, X].
    const double log_spread = r > 0 ? log_lam.maxCoeff() - log_lam.minCoeff() : 0.0;
    for (Eigen::Index k = 0; k < gen.size() && log_spread > 0; ++k) {
        Matrix g = gen.element(k);
        Matrix dg = log_lam.asDiagonal() * g - g * log_lam.asDiagonal();
        gen.add(dg, log_spread);
    }

    std::vector<Matrix> gens;
    const Eigen::Index count = std::min<Eigen::Index>(gen.size(), 4);
    if (gen.size() <= 4) {
        for (Eigen::Index k = 0; k < gen.size(); ++k) {
            for (const Matrix &h : {hermitize(gen.element(k)), hermitize(Complex(0, 1) * gen.element(k))}) {
                if (h.norm() > 1e-9) gens.push_back(h / h.norm());
            }
        }
    } else {
        for (Eigen::Index k = 0; k < count; ++k) gens.push_back(random_hermitian_in(gen, rng));
    }
    const OperatorSpan alg = generated_algebra(gens, r);

    // Center: elements of the algebra commuting with every generator.
    const Eigen::Index na = alg.size();
    Matrix comm(r * r * static_cast<Eigen::Index>(gens.size()), na);
    for (Eigen::Index k = 0; k < na; ++k) {
        const Matrix q = alg.element(k);
        for (std::size_t j = 0; j < gens.size(); ++j) {
            Matrix c = q * gens[j] - gens[j] * q;
            comm.block(static_cast<Eigen::Index>(j) * r * r, k, r * r, 1) = Eigen::Map<const Vector>(c.data(), r * r);
        }
    }
    auto ce = eigh(comm.adjoint() * comm);
    std::vector<Eigen::Index> central;
    for (Eigen::Index i = 0; i < ce.values.size(); ++i) {
        if (ce.values(i) < 1e-12) central.push_back(i);
    }
    Matrix z = Matrix::Zero(r, r);
    {
        std::normal_distribution<double> g;
        for (auto i : central) z += g(rng) * alg.combination(ce.vectors.col(i));
        z = hermitize(z);
    }
    auto ze = eigh(z);
    const double spread = std::max(ze.values.cwiseAbs().maxCoeff(), 1e-300);
    std::vector<BlockFactor> out;
    for (const auto &[b, e] : clusters(ze.values, 1e-6 * spread)) {
        out.push_back(factor_block(alg, ze.vectors.middleCols(b, e - b), rng));
        out.back().isometry = vs * out.back().isometry;
    }
    return out;
}

inline MarkovDecomposition decompose_once(const DensityMatrix &ordered, const LabelSet &a, const LabelSet &b,
                                          const LabelSet &c, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const auto &lay = ordered.layout();
    const std::size_t da = lay.dim_of(a), db = lay.dim_of(b), dc = lay.dim_of(c);
    const Matrix rho_ab = trace_trailing(ordered.data(), dc);

    MarkovDecomposition dec{a, b, c, lay, {}};
    for (auto &f : markov_blocks(rho_ab, da, db, rng)) {
        Matrix sigma = apply_on_group(ordered.data(), {da, db, dc}, {1}, f.isometry.adjoint(), f.isometry);
        sigma = permute_factors(sigma, {da, dc, f.n, f.m}, {0, 2, 3, 1});
        const double p = sigma.trace().real();
        sigma /= p;
        const std::vector<std::size_t> dims{da, f.n, f.m, dc};
        std::vector<Site> ls = lay.restrict_to(a).sites();
        ls.push_back({kLeftLabel, f.n});
        std::vector<Site> rs{{kRightLabel, f.m}};
        const FactorLayout lay_c = lay.restrict_to(c);
        rs.insert(rs.end(), lay_c.sites().begin(), lay_c.sites().end());
        dec.blocks.push_back({p, f.n, f.m, f.isometry,
                              DensityMatrix(FactorLayout(ls), partial_trace_positions(sigma, dims, {0, 1}),
                                            DensityMatrix::Trusted{}),
                              DensityMatrix(FactorLayout(rs), partial_trace_positions(sigma, dims, {2, 3}),
                                            DensityMatrix::Trusted{})});
    }
    return dec;
}

}  // namespace detail

/// ⊕_i p_i ρ_{A B_i^L} ⊗ ρ_{B_i^R C} as a state on (A, B, C).
inline DensityMatrix reconstruct(const MarkovDecomposition &dec) {
    const std::size_t da = dec.dim_a(), db = dec.dim_b(), dc = dec.dim_c();
    const auto d = static_cast<Eigen::Index>(da * db * dc);
    Matrix out = Matrix::Zero(d, d);
    for (const auto &blk : dec.blocks) {
        Matrix prod = kron(blk.left.data(), blk.right.data());
        Matrix lifted = apply_on_group(prod, {da, blk.left_dim, blk.right_dim, dc}, {1, 2}, blk.isometry,
                                       blk.isometry.adjoint());
        out += blk.weight * permute_factors(lifted, {da, dc, db}, {0, 2, 1});
    }
    return {dec.layout, out, DensityMatrix::Trusted{}};
}

/// Structure theorem for a quantum Markov chain A - B - C: finds the block
/// decomposition of B and the local states. Throws NotMarkov when I(A:C|B) > tol
/// and DecompositionFailed when the blocks cannot be certified.
inline MarkovDecomposition markov_decompose(const DensityMatrix &rho, const LabelSet &a, const LabelSet &b,
                                            const LabelSet &c, std::uint64_t seed = 7, double tol = 1e-7) {
    if (a.empty() || b.empty() || c.empty()) fail(ErrorKind::UnknownSubsystem, "A, B and C must be nonempty");
    const double cmi = conditional_mutual_information(rho, a, b, c);
    if (cmi > tol) fail(ErrorKind::NotMarkov, "I(A:C|B) = " + std::to_string(cmi) + " exceeds tolerance");
    const auto abc = set_union({a, b, c});
    const DensityMatrix sub = abc.size() == rho.layout().size() ? rho : partial_trace(rho, abc);
    const DensityMatrix ordered = regrouped(sub, {a, b, c});
    const auto &lay = ordered.layout();
    const LabelSet oa = grouped_labels(lay, {a}), ob = grouped_labels(lay, {b}), oc = grouped_labels(lay, {c});

    auto dec = detail::decompose_once(ordered, oa, ob, oc, seed);
    auto check = detail::decompose_once(ordered, oa, ob, oc, seed ^ 0x9E3779B97F4A7C15ULL);
    if (dec.shape() != check.shape()) {
        fail(ErrorKind::DecompositionFailed, "block structure differs between independent random draws");
    }
    const double err = trace_distance(reconstruct(dec), ordered);
    if (err > std::max(1e-6, 100 * tol)) {
        fail(ErrorKind::DecompositionFailed, "reconstruction error " + std::to_string(err));
    }
    return dec;
}

}  // namespace irrcorr
