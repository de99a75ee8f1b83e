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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>

#include "irrcorr/io/mask.hpp"
#include "irrcorr/stabilizer/region_mask.hpp"
#include "irrcorr/stabilizer/toric.hpp"

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

io::LoadedMask load_mask(const std::string &name) {
    std::ifstream in(std::string(IRRCORR_SOURCE_DIR) + "/configs/masks/" + name + ".json");
    return io::mask_from_json(nlohmann::json::parse(in));
}

TEST(Gf2, RankMatchesSpanSize) {
    std::mt19937_64 rng(21);
    std::bernoulli_distribution coin(0.3);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t rows = 1 + trial % 9, cols = 5 + trial % 13;
        gf2::BitMatrix m(rows, gf2::BitVector(cols));
        for (auto &r : m)
            for (std::size_t c = 0; c < cols; ++c) r.set(c, coin(rng));
        std::set<std::vector<bool>> span;
        for (std::size_t pick = 0; pick < (std::size_t{1} << rows); ++pick) {
            gf2::BitVector acc(cols);
            for (std::size_t r = 0; r < rows; ++r)
                if (pick >> r & 1) acc ^= m[r];
            std::vector<bool> key(cols);
            for (std::size_t c = 0; c < cols; ++c) key[c] = acc.get(c);
            span.insert(key);
        }
        EXPECT_EQ(std::size_t{1} << gf2::rank(m), span.size());
    }
}

TEST(Gf2, LeftKernelAnnihilates) {
    std::mt19937_64 rng(22);
    std::bernoulli_distribution coin(0.5);
    gf2::BitMatrix m(7, gf2::BitVector(4));
    for (auto &r : m)
        for (std::size_t c = 0; c < 4; ++c) r.set(c, coin(rng));
    const auto ker = gf2::left_kernel(m);
    EXPECT_EQ(ker.size(), 7 - gf2::rank(m));
    for (const auto &k : ker) {
        gf2::BitVector acc(4);
        for (std::size_t r = 0; r < 7; ++r)
            if (k.get(r)) acc ^= m[r];
        EXPECT_FALSE(acc.any());
    }
}

// Ground state vector of the toric code built by projecting |0...0> with
// (1 + A_v)/2 for every vertex; qubit q is bit (n - 1 - q) of the index.
std::vector<double> projected_ground_state(std::size_t lx, std::size_t ly) {
    const std::size_t n = 2 * lx * ly;
    auto h = [&](long x, long y) { return ((y + long(ly)) % long(ly)) * long(lx) + (x + long(lx)) % long(lx); };
    auto v = [&](long x, long y) { return long(lx * ly) + h(x, y); };
    std::vector<double> psi(std::size_t{1} << n, 0.0);
    psi[0] = 1;
    for (long y = 0; y < long(ly); ++y) {
        for (long x = 0; x < long(lx); ++x) {
            std::size_t flip = 0;
            for (long q : {h(x, y), h(x - 1, y), v(x, y), v(x, y - 1)}) flip ^= std::size_t{1} << (n - 1 - q);
            std::vector<double> next(psi.size());
            for (std::size_t s = 0; s < psi.size(); ++s) next[s] = 0.5 * (psi[s] + psi[s ^ flip]);
            psi.swap(next);
        }
    }
    double norm = 0;
    for (double a : psi) norm += a * a;
    for (double &a : psi) a /= std::sqrt(norm);
    return psi;
}

// Reduced state on `region` (listed order, first = most significant bit).
Matrix reduced(const std::vector<double> &psi, std::size_t n, const std::vector<std::size_t> &region) {
    const std::size_t m = region.size();
    const auto d = static_cast<Eigen::Index>(std::size_t{1} << m);
    const auto rest = static_cast<Eigen::Index>(std::size_t{1} << (n - m));
    Matrix amp = Matrix::Zero(d, rest);
    std::vector<bool> inside(n, false);
    for (auto q : region) inside[q] = true;
    for (std::size_t s = 0; s < psi.size(); ++s) {
        std::size_t r = 0, c = 0;
        for (auto q : region) r = (r << 1) | (s >> (n - 1 - q) & 1);
        for (std::size_t q = 0; q < n; ++q)
            if (!inside[q]) c = (c << 1) | (s >> (n - 1 - q) & 1);
        amp(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = psi[s];
    }
    return amp * amp.adjoint();
}

TEST(Toric, RankEntropiesMatchProjectedState) {
    const ToricCodeSpec spec{3, 2};
    const std::size_t n = spec.num_qubits();
    const auto psi = projected_ground_state(3, 2);
    const auto tab = toric_ground_state(spec);
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<std::size_t> all(n);
        std::iota(all.begin(), all.end(), 0);
        std::shuffle(all.begin(), all.end(), rng);
        const std::vector<std::size_t> region(all.begin(), all.begin() + 1 + trial % 7);
        const Matrix rho = reduced(psi, n, region);
        EXPECT_NEAR(region_entropy(tab, region), entropy_of_eigenvalues(eigvalsh(rho)), 1e-9);
        EXPECT_LT(max_abs(rdm_dense(tab, region).data() - rho), 1e-12);
    }
}

TEST(Toric, TopologicalEntropyOfStandardMasks) {
    for (const auto &[name, bits] : {std::pair{"kp-disk", 1L}, std::pair{"kp-annulus", 2L},
                                     std::pair{"lw-annulus", 2L}, std::pair{"lw-annulus-thick", 2L},
                                     std::pair{"trivial", 0L}}) {
        const auto m = load_mask(name);
        const auto tab = toric_ground_state(m.lattice);
        EXPECT_EQ(tee_bits(tab, m.mask), bits) << name;
        EXPECT_DOUBLE_EQ(tee(tab, m.mask), static_cast<double>(bits) * ln2) << name;
    }
}

TEST(Toric, TopologicalEntropyIsTranslationInvariant) {
    const auto m = load_mask("kp-disk");
    const auto tab = toric_ground_state(m.lattice);
    for (long dx = 0; dx < 4; ++dx)
        for (long dy = 0; dy < 4; ++dy) EXPECT_EQ(tee_bits(tab, m.mask.translated(m.lattice, dx, dy)), 1);
}

TEST(Toric, LargerLatticeAgrees) {
    const auto m = load_mask("lw-annulus");
    const ToricCodeSpec big{8, 8};
    // Re-embed the 4x4 mask in an 8x8 torus by coordinates.
    auto embed = [&](const QubitSet &qs) {
        QubitSet out;
        for (auto q : qs) {
            const std::size_t plane = 16;
            const long x = long((q % plane) % 4), y = long((q % plane) / 4);
            out.push_back(q < plane ? big.h(x + 2, y + 2) : big.v(x + 2, y + 2));
        }
        return out;
    };
    RegionMask moved{embed(m.mask.A), embed(m.mask.B), embed(m.mask.C), m.mask.geometry, {}};
    EXPECT_EQ(tee_bits(toric_ground_state(big), moved), 2);
}

TEST(Toric, ValidationErrors) {
    expect_error(ErrorKind::InvalidLattice, [] { toric_ground_state(ToricCodeSpec{1, 4}); });
    const ToricCodeSpec spec{4, 4};
    RegionMask overlap{{0, 1}, {1, 2}, {20}, Geometry::Trivial, {}};
    expect_error(ErrorKind::InvalidMask, [&] { validate_mask(spec, overlap); });
    RegionMask outside{{0}, {1}, {99}, Geometry::Trivial, {}};
    expect_error(ErrorKind::InvalidMask, [&] { validate_mask(spec, outside); });
    // h(0,0) and h(1,0) share a vertex, so A and C touch.
    RegionMask touching{{spec.h(0, 0)}, {spec.v(0, 0)}, {spec.h(1, 0)}, Geometry::LwAnnulus, {}};
    expect_error(ErrorKind::InvalidMask, [&] { validate_mask(spec, touching); });
    expect_error(ErrorKind::InvalidMask, [] { geometry_from_string("torus"); });
}

TEST(Tableau, RejectsAnticommutingGenerators) {
    gf2::BitVector x(1), z(1), none(1);
    x.set(0);
    z.set(0);
    expect_error(ErrorKind::InvalidState, [&] {
        StabilizerTableau(1, {PauliString::hermitian(x, none, false), PauliString::hermitian(none, z, false)});
    });
}

TEST(Tableau, DenseLimit) {
    const auto tab = toric_ground_state(ToricCodeSpec{4, 4});
    std::vector<std::size_t> big(13);
    std::iota(big.begin(), big.end(), 0);
    expect_error(ErrorKind::DenseLimitExceeded, [&] { rdm_dense(tab, big); });
    EXPECT_EQ(region_entropy_bits(tab, big), region_entropy_bits(tab, tab.complement(big)));
}

}  // namespace
