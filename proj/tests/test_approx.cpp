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
#include <fstream>
#include <numbers>
#include <random>

#include "irrcorr/approx/bounds.hpp"
#include "irrcorr/io/mask.hpp"
#include "irrcorr/markov/random_state.hpp"
#include "irrcorr/stabilizer/toric.hpp"

namespace {

using namespace irrcorr;

const double ln2 = std::numbers::ln2;

TEST(ApproxParams, DeltaByHand) {
    EXPECT_EQ(ApproxParams::delta_of(0.0), 0.0);
    EXPECT_EQ(ApproxParams::delta_of(-1e-15), 0.0);
    // One bit: 1 - 2^-1 = 1/2.
    EXPECT_NEAR(ApproxParams::delta_of(ln2), 6 * std::sqrt(0.5), 1e-14);
    // Two bits: 1 - 1/4.
    EXPECT_NEAR(ApproxParams::delta_of(2 * ln2), 6 * std::sqrt(0.75), 1e-14);
}

TEST(ApproxParams, FByHand) {
    const double d = 0.01;
    const double eta2d = -0.02 * std::log(0.02);
    const double want = 2 * (2 * d * std::log(2.0 * 4 * 4 * 2) + 3 * eta2d + 7 * std::sqrt(d) * ln2);
    EXPECT_NEAR(ApproxParams::f_of(d, 2, 4, 2), want, 1e-13);
    EXPECT_EQ(ApproxParams::f_of(0.0, 2, 4, 2), 0.0);
}

TEST(ApproxParams, FIsMonotoneAndVanishes) {
    double prev = 0;
    for (double d = 1e-12; d < 0.2; d *= 1.5) {
        const double f = ApproxParams::f_of(d, 2, 4, 2);
        EXPECT_GT(f, prev);
        prev = f;
    }
    EXPECT_LT(ApproxParams::f_of(1e-14, 2, 4, 2), 1e-5);
}

TEST(Depolarize, SingleQubitShrinksBlochVector) {
    std::mt19937_64 rng(61);
    const DensityMatrix rho(FactorLayout({{"Q", 2}}), random_density(2, rng));
    const double p = 0.3;
    const auto out = depolarize_all(rho, p);
    const Matrix want = (1 - p) * rho.data() + p * Matrix::Identity(2, 2) / 2.0;
    EXPECT_LT(max_abs(out.data() - want), 1e-14);
}

TEST(Depolarize, MatchesPauliKrausForm) {
    // x -> (1 - 3p/4) x + (p/4) sum_P P x P on each qubit.
    std::mt19937_64 rng(62);
    const DensityMatrix rho(FactorLayout({{"L", 2}, {"M", 3}, {"R", 2}}), random_density(12, rng));
    const double p = 0.2;
    Matrix px(2, 2), py(2, 2), pz(2, 2);
    px << 0, 1, 1, 0;
    py << 0, Complex(0, -1), Complex(0, 1), 0;
    pz << 1, 0, 0, -1;
    const Matrix i2 = Matrix::Identity(2, 2), i3 = Matrix::Identity(3, 3);
    Matrix x = rho.data();
    for (int site : {0, 2}) {
        Matrix next = (1 - 0.75 * p) * x;
        for (const Matrix *pp : {&px, &py, &pz}) {
            const Matrix k = site == 0 ? kron(kron(*pp, i3), i2) : kron(kron(i2, i3), *pp);
            next += 0.25 * p * k * x * k;
        }
        x = next;
    }
    // Qutrit: (1 - p) x + p Tr_M(x) ⊗ I/3, via the 9 Weyl operators averaged.
    Matrix w = Matrix::Zero(12, 12);
    const Complex om = std::exp(Complex(0, 2 * std::numbers::pi / 3));
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            Matrix u = Matrix::Zero(3, 3);
            for (int j = 0; j < 3; ++j) u((j + a) % 3, j) = std::pow(om, b * j);
            const Matrix k = kron(kron(i2, u), i2);
            w += k * x * k.adjoint() / 9.0;
        }
    }
    x = (1 - p) * x + p * w;
    EXPECT_LT(max_abs(depolarize_all(rho, p).data() - x), 1e-13);
}

TEST(Bounds, ExactMergeHasNoSlack) {
    const auto rho = random_annulus_state(2, {{1, 2}, {2, 1}}, 2, 1, 2, 63);
    const auto r = bound_check(rho, {"A"}, {"B1"}, {"B2a"}, {"C"});
    EXPECT_EQ(r.params.epsilon, 0.0);
    EXPECT_EQ(r.params.delta, 0.0);
    EXPECT_EQ(r.f_delta, 0.0);
    EXPECT_LT(r.delta_achieved, 1e-9);
    EXPECT_NEAR(r.c_hat, r.cmi, 1e-8);
    EXPECT_TRUE(r.lower_ok && r.upper_ok && r.delta_ok);
}

TEST(Bounds, ProductStateIsTrivial) {
    std::mt19937_64 rng(64);
    DensityMatrix rho(FactorLayout({{"A", 2}}), random_density(2, rng));
    for (const char *l : {"B1", "B2", "C"}) rho = tensor(rho, DensityMatrix(FactorLayout({{l, 2}}), random_density(2, rng)));
    const auto r = bound_check(rho, {"A"}, {"B1"}, {"B2"}, {"C"});
    EXPECT_NEAR(r.c_hat, 0.0, 1e-10);
    EXPECT_NEAR(r.cmi, 0.0, 1e-10);
    EXPECT_LT(r.delta_achieved, 1e-9);
}

// Exact annulus state mixed with a little generic noise.
DensityMatrix noisy_annulus(double t, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const auto base = random_annulus_state(2, {{1, 2}}, 2, 1, 2, seed);
    const Matrix noise = random_density(base.data().rows(), rng);
    return {base.layout(), (1 - t) * base.data() + t * noise};
}

TEST(Bounds, HoldOnApproximateStates) {
    for (std::uint64_t seed : {65u, 66u, 67u}) {
        for (double t : {1e-4, 1e-3, 1e-2}) {
            const auto r = bound_check(noisy_annulus(t, seed), {"A"}, {"B1"}, {"B2a"}, {"C"});
            EXPECT_GT(r.params.epsilon, 0.0);
            EXPECT_TRUE(r.delta_ok) << r.delta_achieved << " > " << r.params.delta;
            EXPECT_LE(r.delta_achieved, r.params.delta);
            EXPECT_TRUE(r.lower_ok) << seed << " " << t;
            EXPECT_TRUE(r.upper_ok) << seed << " " << t;
            EXPECT_TRUE(r.pinsker_ok);
            EXPECT_TRUE(r.recovery_ok);
            EXPECT_TRUE(r.merged_cmi_ok);
        }
    }
}

TEST(Bounds, DepolarizedThickAnnulus) {
    // Twelve qubits: the thinnest mask where single-site noise leaves positive residuals.
    std::ifstream in(std::string(IRRCORR_SOURCE_DIR) + "/configs/masks/lw-annulus-thick.json");
    const auto m = io::mask_from_json(nlohmann::json::parse(in));
    const auto regions = io::tee_regions(m.mask);
    ASSERT_TRUE(regions.b_split);
    const auto pure = rdm_dense(toric_ground_state(m.lattice), m.mask.ABC());
    const auto rho = depolarize_all(pure, 1e-3);
    const auto &[b1, b2] = *regions.b_split;
    const auto r = bound_check(rho, regions.A, b1, b2, regions.C);
    EXPECT_GT(r.residuals.cmi_b1_c + r.residuals.cmi_a_b2 + r.residuals.mi_a_b2c, 1e-6);
    EXPECT_GT(r.params.delta, 0.0);
    EXPECT_LE(r.delta_achieved, r.params.delta);
    EXPECT_TRUE(r.lower_ok);
    EXPECT_TRUE(r.upper_ok);
    // Noise pulls both quantities below 2 ln 2 but not far.
    EXPECT_LT(r.cmi, 2 * ln2);
    EXPECT_GT(r.cmi, 2 * ln2 - 0.1);
    EXPECT_LT(std::abs(r.c_hat - r.cmi), r.f_delta);
}

}  // namespace
