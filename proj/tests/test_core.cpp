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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "irrcorr/core/entropy.hpp"
#include "irrcorr/core/spectral.hpp"
#include "irrcorr/markov/random_state.hpp"

namespace {

using namespace irrcorr;

const double ln2 = std::numbers::ln2;

template <class F>
void expect_error(ErrorKind kind, F &&f) {
    try {
        f();
        ADD_FAILURE() << "no error raised";
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), kind) << e.what();
    }
}

DensityMatrix bell_pair() {
    Vector psi = Vector::Zero(4);
    psi(0) = psi(3) = 1;
    return DensityMatrix::pure(FactorLayout({{"A", 2}, {"B", 2}}), psi);
}

// Index-loop partial trace over the middle factor of (d0, d1, d2).
Matrix trace_middle(const Matrix &m, int d0, int d1, int d2) {
    Matrix out = Matrix::Zero(d0 * d2, d0 * d2);
    for (int i0 = 0; i0 < d0; ++i0)
        for (int i2 = 0; i2 < d2; ++i2)
            for (int j0 = 0; j0 < d0; ++j0)
                for (int j2 = 0; j2 < d2; ++j2)
                    for (int k = 0; k < d1; ++k)
                        out(i0 * d2 + i2, j0 * d2 + j2) += m((i0 * d1 + k) * d2 + i2, (j0 * d1 + k) * d2 + j2);
    return out;
}

TEST(Layout, RejectsDuplicatesAndUnknownLabels) {
    expect_error(ErrorKind::DuplicateLabel, [] { FactorLayout({{"A", 2}, {"A", 3}}); });
    const FactorLayout lay({{"A", 2}, {"B", 3}});
    expect_error(ErrorKind::UnknownSubsystem, [&] { lay.index_of("Z"); });
    expect_error(ErrorKind::DuplicateLabel, [&] { lay.positions({"A", "A"}); });
    EXPECT_EQ(lay.total_dim(), 6u);
    EXPECT_EQ(lay.dim_of({"B"}), 3u);
}

TEST(DensityMatrix, ValidatesInput) {
    const FactorLayout q({{"A", 2}});
    Matrix bad(2, 2);
    bad << 0.5, 0.3, 0.1, 0.5;
    expect_error(ErrorKind::InvalidState, [&] { DensityMatrix(q, bad); });
    expect_error(ErrorKind::InvalidState, [&] { DensityMatrix(q, Matrix::Identity(2, 2)); });
    Matrix neg(2, 2);
    neg << 1.2, 0, 0, -0.2;
    expect_error(ErrorKind::InvalidState, [&] { DensityMatrix(q, neg); });
    expect_error(ErrorKind::InvalidState, [&] { DensityMatrix(q, Matrix::Identity(3, 3) / 3.0); });
}

TEST(PartialTrace, MatchesIndexLoop) {
    std::mt19937_64 rng(4);
    const DensityMatrix rho(FactorLayout({{"A", 2}, {"B", 3}, {"C", 2}}), random_density(12, rng));
    const auto ac = partial_trace(rho, {"C", "A"});
    EXPECT_EQ(ac.labels(), (LabelSet{"A", "C"}));
    EXPECT_LT(max_abs(ac.data() - trace_middle(rho.data(), 2, 3, 2)), 1e-14);
}

TEST(PartialTrace, CommutesWithReordering) {
    std::mt19937_64 rng(5);
    const DensityMatrix rho(FactorLayout({{"A", 2}, {"B", 3}, {"C", 2}}), random_density(12, rng));
    const auto moved = rho.reordered({"C", "A", "B"});
    EXPECT_LT(max_abs(partial_trace(moved, {"A", "B"}).data() - partial_trace(rho, {"A", "B"}).data()), 1e-14);
    EXPECT_LT(max_abs(moved.reordered({"A", "B", "C"}).data() - rho.data()), 1e-15);
}

TEST(Embed, PlacesOperatorOnNamedFactor) {
    const FactorLayout lay({{"A", 2}, {"B", 3}});
    Matrix x(2, 2);
    x << 0, 1, 1, 0;
    EXPECT_LT(max_abs(embed(x, lay, {"A"}) - kron(x, Matrix::Identity(3, 3))), 1e-15);
    Matrix z = Matrix::Zero(3, 3);
    z(0, 0) = 1;
    z(2, 2) = -1;
    EXPECT_LT(max_abs(embed(z, lay, {"B"}) - kron(Matrix::Identity(2, 2), z)), 1e-15);
}

TEST(Entropy, KnownValues) {
    const auto bell = bell_pair();
    EXPECT_NEAR(von_neumann_entropy(bell), 0.0, 1e-12);
    EXPECT_NEAR(entropy_of(bell, {"A"}), ln2, 1e-12);
    EXPECT_NEAR(mutual_information(bell, {"A"}, {"B"}), 2 * ln2, 1e-12);
    EXPECT_NEAR(von_neumann_entropy(DensityMatrix::maximally_mixed(FactorLayout({{"X", 5}}))), std::log(5.0), 1e-12);

    const std::vector<double> p{0.5, 0.3, 0.15, 0.05};
    Matrix d = Matrix::Zero(4, 4);
    double shannon = 0;
    for (int i = 0; i < 4; ++i) {
        d(i, i) = p[i];
        shannon -= p[i] * std::log(p[i]);
    }
    EXPECT_NEAR(von_neumann_entropy(DensityMatrix(FactorLayout({{"X", 4}}), d)), shannon, 1e-12);
}

TEST(Entropy, EntropyIsUnitaryInvariant) {
    std::mt19937_64 rng(6);
    const Matrix rho = random_density(6, rng);
    const Matrix u = random_unitary(6, rng);
    const FactorLayout lay({{"X", 6}});
    EXPECT_NEAR(von_neumann_entropy(DensityMatrix(lay, rho)), von_neumann_entropy(DensityMatrix(lay, u * rho * u.adjoint())),
                1e-10);
}

TEST(RelativeEntropy, ClassicalKullbackLeibler) {
    const FactorLayout lay({{"X", 3}});
    const std::vector<double> p{0.6, 0.3, 0.1}, q{0.2, 0.5, 0.3};
    Matrix dp = Matrix::Zero(3, 3), dq = Matrix::Zero(3, 3);
    double kl = 0;
    for (int i = 0; i < 3; ++i) {
        dp(i, i) = p[i];
        dq(i, i) = q[i];
        kl += p[i] * std::log(p[i] / q[i]);
    }
    EXPECT_NEAR(relative_entropy(DensityMatrix(lay, dp), DensityMatrix(lay, dq)), kl, 1e-12);
}

TEST(RelativeEntropy, SupportMismatchThrows) {
    const FactorLayout lay({{"X", 2}});
    Matrix p0 = Matrix::Zero(2, 2), p1 = Matrix::Zero(2, 2);
    p0(0, 0) = 1;
    p1(1, 1) = 1;
    expect_error(ErrorKind::SupportMismatch, [&] { relative_entropy(DensityMatrix(lay, p0), DensityMatrix(lay, p1)); });
}

TEST(Distances, OrthogonalAndIdentical) {
    const FactorLayout lay({{"X", 2}});
    Matrix p0 = Matrix::Zero(2, 2), p1 = Matrix::Zero(2, 2);
    p0(0, 0) = 1;
    p1(1, 1) = 1;
    EXPECT_NEAR(trace_distance(DensityMatrix(lay, p0), DensityMatrix(lay, p1)), 2.0, 1e-14);
    std::mt19937_64 rng(9);
    const DensityMatrix r(FactorLayout({{"X", 3}}), random_density(3, rng));
    EXPECT_NEAR(fidelity(r, r), 1.0, 1e-8);
    EXPECT_NEAR(trace_distance(r, r), 0.0, 1e-14);
}

TEST(Entropy, OverlappingRegionsRejected) {
    const auto bell = bell_pair();
    expect_error(ErrorKind::OverlappingRegions, [&] { mutual_information(bell, {"A"}, {"A"}); });
}

TEST(TotalCorrelation, EqualsMutualInformationForTwoParties) {
    std::mt19937_64 rng(12);
    const DensityMatrix rho(FactorLayout({{"A", 2}, {"B", 3}}), random_density(6, rng));
    EXPECT_NEAR(total_correlation(rho, {{"A"}, {"B"}}), mutual_information(rho, {"A"}, {"B"}), 1e-12);
}

TEST(Linalg, RealFastPathMatchesPowerTraces) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    Matrix m(7, 7);
    for (Eigen::Index i = 0; i < 7; ++i)
        for (Eigen::Index j = 0; j < 7; ++j) m(i, j) = g(rng);
    m = hermitize(m);
    ASSERT_TRUE(is_real(m));
    const RealVector ev = eigvalsh(m);
    Matrix power = Matrix::Identity(7, 7);
    for (int k = 1; k <= 4; ++k) {
        power = power * m;
        EXPECT_NEAR(ev.array().pow(k).sum(), power.trace().real(), 1e-9 * std::pow(10.0, k));
    }
    const auto e = eigh(m);
    EXPECT_LT(max_abs(e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint() - m), 1e-12);
}

TEST(Spectral, GroupsDegenerateEigenvalues) {
    Matrix d = Matrix::Zero(4, 4);
    d(0, 0) = 0.5;
    d(1, 1) = d(2, 2) = 0.25;
    const Matrix u = [] {
        std::mt19937_64 rng(1);
        return random_unitary(4, rng);
    }();
    const auto s = spectral(Matrix(u * d * u.adjoint()));
    ASSERT_EQ(s.distinct_count(), 3u);
    EXPECT_NEAR(s.eigenvalues[0], 0.5, 1e-12);
    EXPECT_EQ(s.degeneracies[1], 2u);
    EXPECT_LT(max_abs(s.reconstruct() - u * d * u.adjoint()), 1e-12);
}

}  // namespace
