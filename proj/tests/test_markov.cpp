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

#include <random>

#include "irrcorr/markov/decomposition.hpp"
#include "irrcorr/markov/random_state.hpp"
#include "irrcorr/markov/recovery.hpp"
#include "irrcorr/markov/refine.hpp"

namespace {

using namespace irrcorr;
using Shape = std::vector<std::pair<std::size_t, std::size_t>>;

template <class F>
void expect_error(ErrorKind kind, F &&f) {
    try {
        f();
        ADD_FAILURE() << "no error raised";
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), kind) << e.what();
    }
}

DensityMatrix ghz3() {
    Vector psi = Vector::Zero(8);
    psi(0) = psi(7) = 1;
    return DensityMatrix::pure(FactorLayout({{"A", 2}, {"B", 2}, {"C", 2}}), psi);
}

class PlantedShape : public ::testing::TestWithParam<Shape> {};

TEST_P(PlantedShape, DecompositionRecoversBlocks) {
    const Shape planted = GetParam();
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto rho = random_markov_state(2, planted, 2, seed);
        const auto dec = markov_decompose(rho, {"A"}, {"B"}, {"C"});
        Shape sorted = planted;
        std::sort(sorted.begin(), sorted.end());
        EXPECT_EQ(dec.shape(), sorted);
        EXPECT_LT(trace_distance(reconstruct(dec), rho), 1e-8);

        double total = 0;
        const auto db = static_cast<Eigen::Index>(dec.dim_b());
        Matrix sum = Matrix::Zero(db, db);
        for (const auto &blk : dec.blocks) {
            total += blk.weight;
            const auto k = blk.isometry.cols();
            EXPECT_LT(max_abs(blk.isometry.adjoint() * blk.isometry - Matrix::Identity(k, k)), 1e-9);
            sum += blk.projector();
        }
        EXPECT_NEAR(total, 1.0, 1e-10);
        // Planted blocks fill B, so the projectors resolve the identity.
        EXPECT_LT(max_abs(sum - Matrix::Identity(db, db)), 1e-8);
    }
}

INSTANTIATE_TEST_SUITE_P(Shapes, PlantedShape,
                         ::testing::Values(Shape{{1, 2}}, Shape{{2, 1}}, Shape{{1, 2}, {2, 1}}, Shape{{2, 2}},
                                           Shape{{1, 1}, {1, 1}, {1, 1}}, Shape{{1, 3}, {2, 1}}));

TEST(MarkovDecompose, RejectsNonMarkovState) {
    expect_error(ErrorKind::NotMarkov, [] { markov_decompose(ghz3(), {"A"}, {"B"}, {"C"}); });
}

TEST(MarkovDecompose, SameSeedSameBlocks) {
    const auto rho = random_markov_state(2, {{1, 2}, {2, 1}}, 2, 9);
    const auto d1 = markov_decompose(rho, {"A"}, {"B"}, {"C"}, 5);
    const auto d2 = markov_decompose(rho, {"A"}, {"B"}, {"C"}, 5);
    ASSERT_EQ(d1.blocks.size(), d2.blocks.size());
    for (std::size_t i = 0; i < d1.blocks.size(); ++i) {
        EXPECT_EQ(d1.blocks[i].weight, d2.blocks[i].weight);
        EXPECT_EQ(max_abs(d1.blocks[i].isometry - d2.blocks[i].isometry), 0.0);
    }
}

TEST(MarkovDecompose, MultiSiteRegionsInAnyOrder) {
    const auto base = random_markov_state(2, {{1, 2}, {2, 1}}, 2, 4);
    const DensityMatrix extra(FactorLayout({{"D", 2}}), Matrix::Identity(2, 2) / 2.0);
    const auto rho = tensor(base, extra).reordered({"C", "D", "B", "A"});
    const auto dec = markov_decompose(rho, {"A"}, {"B"}, {"C", "D"});
    EXPECT_EQ(dec.shape(), (Shape{{1, 2}, {2, 1}}));
}

// Λ(X) = ρ_BC^{1/2} (ρ_B^{-1/2} X ρ_B^{-1/2} ⊗ I_C) ρ_BC^{1/2}, written out directly.
Matrix petz_formula(const Matrix &rho_bc, Eigen::Index dc, const Matrix &x) {
    const Matrix rho_b = trace_trailing(rho_bc, static_cast<std::size_t>(dc));
    const auto e = eigh(rho_b);
    RealVector inv(e.values.size());
    for (Eigen::Index i = 0; i < inv.size(); ++i) inv(i) = e.values(i) > 1e-12 ? 1 / std::sqrt(e.values(i)) : 0.0;
    const Matrix r = e.vectors * inv.cast<Complex>().asDiagonal() * e.vectors.adjoint();
    const auto ebc = eigh(rho_bc);
    const Matrix root = ebc.vectors * ebc.values.cwiseMax(0.0).cwiseSqrt().cast<Complex>().asDiagonal() *
                        ebc.vectors.adjoint();
    return root * kron(r * x * r, Matrix::Identity(dc, dc)) * root;
}

TEST(Petz, MatchesClosedForm) {
    std::mt19937_64 rng(31);
    const DensityMatrix rho_bc(FactorLayout({{"B", 3}, {"C", 2}}), random_density(6, rng));
    const auto map = petz_recovery(rho_bc, {"B"}, {"C"});
    for (int t = 0; t < 3; ++t) {
        const Matrix x = random_density(3, rng);
        EXPECT_LT(max_abs(map.apply(x) - petz_formula(rho_bc.data(), 2, x)), 1e-10);
    }
    EXPECT_LT(map.trace_preservation_error(), 1e-10);
    EXPECT_GT(eigvalsh(map.choi()).minCoeff(), -1e-10);
    // Λ(ρ_B) = ρ_BC.
    EXPECT_LT(max_abs(map.apply(partial_trace(rho_bc, {"B"}).data()) - rho_bc.data()), 1e-10);
}

TEST(Petz, RankDeficientInputStaysTracePreserving) {
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = 0.7;
    m(1, 1) = 0.3;  // B = |0>, support of ρ_B is one-dimensional
    const DensityMatrix rho_bc(FactorLayout({{"B", 2}, {"C", 2}}), m);
    const auto map = petz_recovery(rho_bc, {"B"}, {"C"});
    EXPECT_LT(map.trace_preservation_error(), 1e-10);
}

TEST(Petz, PerfectOnMarkovStates) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const auto rho = random_markov_state(2, {{1, 2}, {2, 1}}, 3, 60 + seed);
        const auto check = is_qms(rho, {"A"}, {"B"}, {"C"});
        EXPECT_TRUE(check.is_markov);
        EXPECT_LE(check.recovery_error, 1e-8);
    }
}

TEST(Petz, GhzRecoveryFails) {
    // Recovery from ρ_AB yields (|000><000| + |111><111|)/2, at trace distance 1 from GHZ.
    const auto check = is_qms(ghz3(), {"A"}, {"B"}, {"C"});
    EXPECT_FALSE(check.is_markov);
    EXPECT_NEAR(check.cmi, std::log(2.0), 1e-12);
    EXPECT_NEAR(check.recovery_error, 1.0, 1e-9);
    EXPECT_GE(check.recovery_error, 0.1);
}

TEST(Refine, RebuildsAnnulusState) {
    const auto rho = random_annulus_state(2, {{1, 2}, {2, 1}}, 2, 2, 2, 17);
    const LabelSet b2{"B2a", "B2b"};
    const auto left = markov_decompose(rho, {"A"}, {"B1"}, b2);
    const auto right = markov_decompose(rho, {"B1"}, b2, {"C"});
    const auto ref = refine_block(left, right);
    EXPECT_LT(ref.marginal_error, 1e-9);
    const auto rebuilt = reconstruct(ref);
    EXPECT_LT(trace_distance(rebuilt, rho.reordered(rebuilt.labels())), 1e-8);
}

TEST(Refine, RejectsMismatchedChains) {
    const auto rho = random_annulus_state(2, {{1, 2}}, 2, 2, 2, 18);
    const auto left = markov_decompose(rho, {"A"}, {"B1"}, {"B2a", "B2b"});
    expect_error(ErrorKind::DecompositionFailed, [&] { refine_block(left, left); });
}

TEST(Petz, ProductStateRecoveryAppendsMarginal) {
    std::mt19937_64 rng(32);
    const DensityMatrix b(FactorLayout({{"B", 2}}), random_density(2, rng));
    const DensityMatrix c(FactorLayout({{"C", 3}}), random_density(3, rng));
    const auto map = petz_recovery(tensor(b, c), b, {"C"});
    const Matrix x = random_density(2, rng);
    EXPECT_LT(max_abs(map.apply(x) - kron(x, c.data())), 1e-10);
}

TEST(Petz, ExplicitMarginalMustMatch) {
    std::mt19937_64 rng(33);
    const DensityMatrix rho_bc(FactorLayout({{"B", 2}, {"C", 2}}), random_density(4, rng));
    const DensityMatrix wrong(FactorLayout({{"B", 2}}), Matrix::Identity(2, 2) / 2.0);
    expect_error(ErrorKind::InconsistentMarginal, [&] { petz_recovery(rho_bc, wrong, {"C"}); });
}

TEST(Petz, ChoiPositiveOnRandomInputs) {
    std::mt19937_64 rng(34);
    for (int t = 0; t < 100; ++t) {
        const DensityMatrix rho_bc(FactorLayout({{"B", 2}, {"C", 2}}), random_density(4, rng));
        const auto map = petz_recovery(rho_bc, {"B"}, {"C"});
        ASSERT_GT(eigvalsh(map.choi()).minCoeff(), -1e-9);
        ASSERT_LT(map.trace_preservation_error(), 1e-9);
    }
}

TEST(IsQms, ProductStateIsMarkov) {
    std::mt19937_64 rng(35);
    DensityMatrix rho(FactorLayout({{"A", 2}}), random_density(2, rng));
    for (const char *l : {"B", "C"}) rho = tensor(rho, DensityMatrix(FactorLayout({{l, 2}}), random_density(2, rng)));
    const auto check = is_qms(rho, {"A"}, {"B"}, {"C"});
    EXPECT_TRUE(check.is_markov);
    EXPECT_NEAR(check.cmi, 0.0, 1e-12);
    EXPECT_LT(check.recovery_error, 1e-10);
}

}  // namespace
