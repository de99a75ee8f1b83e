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
#include <complex>
#include <cstddef>
#include <functional>
#include <numeric>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

namespace irrcorr {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

namespace tol {
/// Eigenvalues at or below eig_cutoff * lambda_max are treated as zero.
inline constexpr double eig_cutoff = 1e-12;
inline constexpr double hermitian = 1e-10;
inline constexpr double trace = 1e-10;
inline constexpr double positivity = 1e-10;
inline constexpr double degeneracy = 1e-9;
}  // namespace tol

inline Matrix hermitize(const Matrix &m) { return (m + m.adjoint()) * 0.5; }

inline double max_abs(const Matrix &m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

inline Matrix kron(const Matrix &a, const Matrix &b) { return Eigen::kroneckerProduct(a, b).eval(); }

struct HermitianEigen {
    RealVector values;  // ascending, as returned by Eigen
    Matrix vectors;
};

// Real symmetric input (common for stabilizer states) takes the faster real solver.
inline bool is_real(const Matrix &m) { return m.size() == 0 || m.imag().cwiseAbs().maxCoeff() == 0.0; }

inline HermitianEigen eigh(const Matrix &m) {
    if (is_real(m)) {
        const Eigen::MatrixXd r = m.real();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es((r + r.transpose()) * 0.5);
        return {es.eigenvalues(), es.eigenvectors().cast<Complex>()};
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(m));
    return {es.eigenvalues(), es.eigenvectors()};
}

inline RealVector eigvalsh(const Matrix &m) {
    if (is_real(m)) {
        const Eigen::MatrixXd r = m.real();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es((r + r.transpose()) * 0.5, Eigen::EigenvaluesOnly);
        return es.eigenvalues();
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(m), Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

/// Absolute threshold below which an eigenvalue of `values` counts as zero.
inline double support_threshold(const RealVector &values, double rel = tol::eig_cutoff) {
    double vmax = values.size() ? values.cwiseAbs().maxCoeff() : 0.0;
    return rel * std::max(vmax, 1e-300);
}

/// f applied to the spectrum of a Hermitian matrix.
inline Matrix hermitian_function(const HermitianEigen &e, const std::function<double(double)> &f) {
    RealVector fv = e.values.unaryExpr(f);
    return e.vectors * fv.asDiagonal() * e.vectors.adjoint();
}

inline Matrix hermitian_function(const Matrix &m, const std::function<double(double)> &f) {
    return hermitian_function(eigh(m), f);
}

/// log on the support, 0 on the kernel.
inline Matrix support_log(const Matrix &m) {
    auto e = eigh(m);
    double cut = support_threshold(e.values);
    return hermitian_function(e, [cut](double x) { return x > cut ? std::log(x) : 0.0; });
}

/// log with kernel eigenvalues replaced by log(eps).
inline Matrix regularized_log(const Matrix &m, double eps) {
    auto e = eigh(m);
    double cut = support_threshold(e.values);
    return hermitian_function(e, [cut, eps](double x) { return x > cut ? std::log(x) : std::log(eps); });
}

inline Matrix psd_sqrt(const Matrix &m) {
    return hermitian_function(m, [](double x) { return x > 0 ? std::sqrt(x) : 0.0; });
}

/// Moore-Penrose inverse square root at the relative eigenvalue cutoff.
inline Matrix pinv_sqrt(const Matrix &m) {
    auto e = eigh(m);
    double cut = support_threshold(e.values);
    return hermitian_function(e, [cut](double x) { return x > cut ? 1.0 / std::sqrt(x) : 0.0; });
}

inline Matrix support_projector(const Matrix &m) {
    auto e = eigh(m);
    double cut = support_threshold(e.values);
    return hermitian_function(e, [cut](double x) { return x > cut ? 1.0 : 0.0; });
}

/// exp(H) / Tr exp(H), shifted by the top eigenvalue to avoid overflow.
inline Matrix gibbs(const Matrix &h) {
    auto e = eigh(h);
    double top = e.values.maxCoeff();
    Matrix out = hermitian_function(e, [top](double x) { return std::exp(x - top); });
    return out / out.trace().real();
}

// ---------------------------------------------------------------------------
// Tensor-factor index arithmetic.
// ---------------------------------------------------------------------------

/// For a product space with factor dims `dims`, returns for each index of the
/// permuted space (factors ordered as `order`) the matching original index.
inline std::vector<std::size_t> permutation_map(const std::vector<std::size_t> &dims,
                                                const std::vector<std::size_t> &order) {
    const std::size_t n = dims.size();
    std::vector<std::size_t> stride(n, 1);
    for (std::size_t i = n; i-- > 1;) stride[i - 1] = stride[i] * dims[i];
    std::size_t total = n ? stride[0] * dims[0] : 1;

    std::vector<std::size_t> map(total);
    std::vector<std::size_t> digit(order.size(), 0);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t orig = 0;
        for (std::size_t k = 0; k < order.size(); ++k) orig += digit[k] * stride[order[k]];
        map[idx] = orig;
        for (std::size_t k = order.size(); k-- > 0;) {
            if (++digit[k] < dims[order[k]]) break;
            digit[k] = 0;
        }
    }
    return map;
}

/// Reorders the tensor factors of an operator: new factor k is old factor order[k].
inline Matrix permute_factors(const Matrix &m, const std::vector<std::size_t> &dims,
                              const std::vector<std::size_t> &order) {
    auto map = permutation_map(dims, order);
    const auto d = static_cast<Eigen::Index>(map.size());
    Matrix out(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index i = 0; i < d; ++i) {
            out(i, j) = m(static_cast<Eigen::Index>(map[i]), static_cast<Eigen::Index>(map[j]));
        }
    }
    return out;
}

inline Vector permute_factors(const Vector &v, const std::vector<std::size_t> &dims,
                              const std::vector<std::size_t> &order) {
    auto map = permutation_map(dims, order);
    Vector out(static_cast<Eigen::Index>(map.size()));
    for (std::size_t i = 0; i < map.size(); ++i) out(static_cast<Eigen::Index>(i)) = v(static_cast<Eigen::Index>(map[i]));
    return out;
}

/// Traces out the trailing factor of dimension `traced` from an operator on
/// (kept ⊗ traced).
inline Matrix trace_trailing(const Matrix &m, std::size_t traced) {
    const auto dt = static_cast<Eigen::Index>(traced);
    const auto dk = m.rows() / dt;
    Matrix out = Matrix::Zero(dk, dk);
    for (Eigen::Index j = 0; j < dk; ++j) {
        for (Eigen::Index i = 0; i < dk; ++i) {
            Complex acc = 0;
            for (Eigen::Index t = 0; t < dt; ++t) acc += m(i * dt + t, j * dt + t);
            out(i, j) = acc;
        }
    }
    return out;
}

/// Traces out the leading factor of dimension `traced` from (traced ⊗ kept).
inline Matrix trace_leading(const Matrix &m, std::size_t traced) {
    const auto dt = static_cast<Eigen::Index>(traced);
    const auto dk = m.rows() / dt;
    Matrix out = Matrix::Zero(dk, dk);
    for (Eigen::Index t = 0; t < dt; ++t) out += m.block(t * dk, t * dk, dk, dk);
    return out;
}

/// Partial trace over the factors not listed in `keep` (positions, ascending).
inline Matrix partial_trace_positions(const Matrix &m, const std::vector<std::size_t> &dims,
                                      const std::vector<std::size_t> &keep) {
    std::vector<std::size_t> order = keep;
    std::size_t traced = 1;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (std::find(keep.begin(), keep.end(), i) == keep.end()) {
            order.push_back(i);
            traced *= dims[i];
        }
    }
    if (traced == 1) return permute_factors(m, dims, order);
    bool identity_order = true;
    for (std::size_t i = 0; i < order.size(); ++i) identity_order &= (order[i] == i);
    return trace_trailing(identity_order ? m : permute_factors(m, dims, order), traced);
}

inline double entropy_of_eigenvalues(const RealVector &values) {
    double cut = support_threshold(values);
    double s = 0;
    for (double x : values) {
        if (x > cut) s -= x * std::log(x);
    }
    return s;
}

/// Shannon entropy in nats with the 0·log 0 = 0 convention.
template <typename Range>
double shannon(const Range &probs) {
    double s = 0;
    for (double p : probs) {
        if (p > tol::eig_cutoff) s -= p * std::log(p);
    }
    return s;
}

/// eta(x) = -x ln x, continuous at 0.
inline double eta(double x) { return x > 0 ? -x * std::log(x) : 0.0; }

}  // namespace irrcorr

namespace irrcorr {

/// Applies left (d' x d_g) and right (d_g x d'') on the factor group at
/// positions `group` (merged in the listed order):
///   out = (I_rest ⊗ left) P ρ P^T (I_rest ⊗ right)
/// where P moves the group to the end. The result is ordered [rest..., group'].
inline Matrix apply_on_group(const Matrix &m, const std::vector<std::size_t> &dims,
                             const std::vector<std::size_t> &group, const Matrix &left, const Matrix &right) {
    std::vector<std::size_t> order;
    std::size_t d_rest = 1, d_group = 1;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (std::find(group.begin(), group.end(), i) == group.end()) {
            order.push_back(i);
            d_rest *= dims[i];
        }
    }
    for (auto g : group) {
        order.push_back(g);
        d_group *= dims[g];
    }
    const Matrix moved = permute_factors(m, dims, order);
    const auto dg = static_cast<Eigen::Index>(d_group);
    const auto dr = static_cast<Eigen::Index>(d_rest);
    const Eigen::Index dl = left.rows(), dd = right.cols();
    Matrix out(dr * dl, dr * dd);
    for (Eigen::Index j = 0; j < dr; ++j) {
        for (Eigen::Index i = 0; i < dr; ++i) {
            out.block(i * dl, j * dd, dl, dd).noalias() = left * moved.block(i * dg, j * dg, dg, dg) * right;
        }
    }
    return out;
}

/// Merges trailing factor groups: convenience for (I ⊗ V) ρ (I ⊗ V)^dagger
/// with V acting on the last factor of an operator on (rest ⊗ last).
inline Matrix conjugate_last(const Matrix &m, std::size_t d_rest, const Matrix &v) {
    const auto dr = static_cast<Eigen::Index>(d_rest);
    const Eigen::Index din = v.cols(), dout = v.rows();
    Matrix out(dr * dout, dr * dout);
    const Matrix vh = v.adjoint();
    for (Eigen::Index j = 0; j < dr; ++j) {
        for (Eigen::Index i = 0; i < dr; ++i) {
            out.block(i * dout, j * dout, dout, dout).noalias() = v * m.block(i * din, j * din, din, din) * vh;
        }
    }
    return out;
}

}  // namespace irrcorr
