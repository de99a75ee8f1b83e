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

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "irrcorr/core/density_matrix.hpp"
#include "irrcorr/markov/decomposition.hpp"
#include "irrcorr/markov/recovery.hpp"

namespace irrcorr {

/// Haar-ish random unitary via QR of a complex Ginibre matrix.
inline Matrix random_unitary(Eigen::Index d, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    Matrix z(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index i = 0; i < d; ++i) z(i, j) = Complex(g(rng), g(rng));
    }
    Eigen::HouseholderQR<Matrix> qr(z);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR();
    for (Eigen::Index i = 0; i < d; ++i) q.col(i) *= std::polar(1.0, std::arg(r(i, i)));
    return q;
}

/// Full-rank random density matrix G G^dagger / Tr with G Ginibre.
inline Matrix random_density(Eigen::Index d, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    Matrix z(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index i = 0; i < d; ++i) z(i, j) = Complex(g(rng), g(rng));
    }
    Matrix rho = z * z.adjoint();
    return rho / rho.trace().real();
}

/// Random Markov chain A - B - C on sites ("A", "B", "C") with
/// B = ⊕_i C^{n_i} ⊗ C^{m_i} rotated by a random unitary.
inline DensityMatrix random_markov_state(std::size_t da, const std::vector<std::pair<std::size_t, std::size_t>> &blocks,
                                         std::size_t dc, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::size_t db = 0;
    for (auto [n, m] : blocks) db += n * m;
    const auto dbi = static_cast<Eigen::Index>(db);
    const Matrix u = random_unitary(dbi, rng);
    std::uniform_real_distribution<double> uni(0.5, 1.5);
    std::vector<double> w;
    double total = 0;
    for (std::size_t i = 0; i < blocks.size(); ++i) total += w.emplace_back(uni(rng));

    MarkovDecomposition dec{{"A"}, {"B"}, {"C"}, FactorLayout({{"A", da}, {"B", db}, {"C", dc}}), {}};
    Eigen::Index offset = 0;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const auto [n, m] = blocks[i];
        const auto nm = static_cast<Eigen::Index>(n * m);
        MarkovBlock blk{w[i] / total,
                        n,
                        m,
                        u.middleCols(offset, nm),
                        DensityMatrix(FactorLayout({{"A", da}, {kLeftLabel, n}}),
                                      random_density(static_cast<Eigen::Index>(da * n), rng), DensityMatrix::Trusted{}),
                        DensityMatrix(FactorLayout({{kRightLabel, m}, {"C", dc}}),
                                      random_density(static_cast<Eigen::Index>(m * dc), rng), DensityMatrix::Trusted{})};
        dec.blocks.push_back(std::move(blk));
        offset += nm;
    }
    return reconstruct(dec);
}

/// Random state on (x, y) whose x-marginal is exactly `rho_x`:
/// (√ρ_x ⊗ I) J (√ρ_x ⊗ I) with J the Choi operator of a random channel.
inline Matrix random_extension(const Matrix &rho_x, Eigen::Index dy, std::mt19937_64 &rng) {
    const Eigen::Index dx = rho_x.rows();
    const Matrix y = random_density(dx * dy, rng);
    const Matrix inv = pinv_sqrt(trace_trailing(y, static_cast<std::size_t>(dy)));
    const Matrix root = psd_sqrt(rho_x);
    const Matrix l = kron(root * inv, Matrix::Identity(dy, dy));
    return hermitize(l * y * l.adjoint());
}

/// Random state on sites ("A", "B1", "B2a", "B2b", "C") satisfying the annulus
/// merge conditions for B2 = {B2a, B2b}: A - B1 - B2 and B1 - B2 - C are
/// Markov and I(A:B2C) = 0. B1 carries the direct sum `b1_blocks`; B2a is
/// correlated with B1, B2b with C, and both are mixed by a random unitary.
inline DensityMatrix random_annulus_state(std::size_t da, const std::vector<std::pair<std::size_t, std::size_t>> &b1_blocks,
                                          std::size_t d2a, std::size_t d2b, std::size_t dc, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const auto dai = static_cast<Eigen::Index>(da);
    const Matrix rho_a = random_density(dai, rng);
    std::size_t db1 = 0;
    for (auto [n, m] : b1_blocks) db1 += n * m;
    const Matrix u = random_unitary(static_cast<Eigen::Index>(db1), rng);
    std::uniform_real_distribution<double> uni(0.5, 1.5);
    std::vector<double> w;
    double total = 0;
    for (std::size_t i = 0; i < b1_blocks.size(); ++i) total += w.emplace_back(uni(rng));

    MarkovDecomposition dec{{"A"}, {"B1"}, {"B2a"}, FactorLayout({{"A", da}, {"B1", db1}, {"B2a", d2a}}), {}};
    Eigen::Index offset = 0;
    for (std::size_t i = 0; i < b1_blocks.size(); ++i) {
        const auto [n, m] = b1_blocks[i];
        const auto nm = static_cast<Eigen::Index>(n * m);
        dec.blocks.push_back({w[i] / total, n, m, u.middleCols(offset, nm),
                              DensityMatrix(FactorLayout({{"A", da}, {kLeftLabel, n}}),
                                            random_extension(rho_a, static_cast<Eigen::Index>(n), rng),
                                            DensityMatrix::Trusted{}),
                              DensityMatrix(FactorLayout({{kRightLabel, m}, {"B2a", d2a}}),
                                            random_density(static_cast<Eigen::Index>(m * d2a), rng),
                                            DensityMatrix::Trusted{})});
        offset += nm;
    }
    const DensityMatrix right(FactorLayout({{"B2b", d2b}, {"C", dc}}),
                              random_density(static_cast<Eigen::Index>(d2b * dc), rng), DensityMatrix::Trusted{});
    const Matrix v = random_unitary(static_cast<Eigen::Index>(d2a * d2b), rng);
    const Matrix full = kron(reconstruct(dec).data(), right.data());
    const std::size_t d_ab1 = da * db1;
    const Matrix mixed = apply_on_group(full, {d_ab1, d2a * d2b, dc}, {1}, v, v.adjoint());
    return {FactorLayout({{"A", da}, {"B1", db1}, {"B2a", d2a}, {"B2b", d2b}, {"C", dc}}),
            permute_factors(mixed, {d_ab1, dc, d2a * d2b}, {0, 2, 1}), DensityMatrix::Trusted{}};
}

/// Classical bits on ("A", "B1", "B2", "C"): a xor b1 = 0 with probability
/// `agree` and uniform marginals, c copies a xor b1 through a bit flip with
/// probability `flip`, b2 is an independent fair coin.
inline DensityMatrix parity_toy_state(double agree = 0.8, double flip = 0.1) {
    const FactorLayout lay({{"A", 2}, {"B1", 2}, {"B2", 2}, {"C", 2}});
    Matrix m = Matrix::Zero(16, 16);
    for (int a = 0; a < 2; ++a) {
        for (int b1 = 0; b1 < 2; ++b1) {
            for (int b2 = 0; b2 < 2; ++b2) {
                for (int c = 0; c < 2; ++c) {
                    const double pab = ((a ^ b1) == 0 ? agree : 1 - agree) / 2;
                    const double pc = c == (a ^ b1) ? 1 - flip : flip;
                    const int i = a * 8 + b1 * 4 + b2 * 2 + c;
                    m(i, i) = pab * 0.5 * pc;
                }
            }
        }
    }
    return {lay, m};
}

}  // namespace irrcorr
