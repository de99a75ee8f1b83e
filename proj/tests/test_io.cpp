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
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

#include "irrcorr/io/mask.hpp"
#include "irrcorr/io/report.hpp"
#include "irrcorr/io/serialize.hpp"
#include "irrcorr/markov/random_state.hpp"

namespace {

using namespace irrcorr;
using json = nlohmann::json;

template <class F>
void expect_error(ErrorKind kind, F &&f) {
    try {
        f();
        ADD_FAILURE() << "no error raised";
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), kind) << e.what();
    }
}

std::vector<unsigned char> bytes(std::string_view s) { return {s.begin(), s.end()}; }

TEST(Base64, KnownVectors) {
    const std::pair<const char *, const char *> cases[] = {
        {"", ""}, {"f", "Zg=="}, {"fo", "Zm8="}, {"foo", "Zm9v"}, {"foob", "Zm9vYg=="}, {"fooba", "Zm9vYmE="},
        {"foobar", "Zm9vYmFy"}};
    for (const auto &[plain, enc] : cases) {
        EXPECT_EQ(io::detail::base64_encode(bytes(plain)), enc);
        EXPECT_EQ(io::detail::base64_decode(enc), bytes(plain));
    }
}

TEST(Base64, RejectsMalformedInput) {
    expect_error(ErrorKind::InvalidState, [] { io::detail::base64_decode("abc"); });
    expect_error(ErrorKind::InvalidState, [] { io::detail::base64_decode("ab!d"); });
}

TEST(Fnv, KnownVectors) {
    EXPECT_EQ(io::hex64(io::fnv1a64("")), "cbf29ce484222325");
    EXPECT_EQ(io::hex64(io::fnv1a64("a")), "af63dc4c8601ec8c");
    EXPECT_EQ(io::hex64(io::fnv1a64("foobar")), "85944171f73967e8");
}

TEST(Serialize, MatrixRoundTripIsBitExact) {
    std::mt19937_64 rng(71);
    Matrix m = random_density(5, rng);
    m(0, 1) = Complex(-0.0, std::numeric_limits<double>::denorm_min());
    const Matrix back = io::matrix_from_json(json::parse(io::matrix_to_json(m).dump()));
    ASSERT_EQ(back.rows(), 5);
    for (Eigen::Index i = 0; i < 5; ++i)
        for (Eigen::Index j = 0; j < 5; ++j) {
            EXPECT_EQ(std::memcmp(&back(i, j), &m(i, j), sizeof(Complex)), 0);
        }
}

TEST(Serialize, MatrixShapeMismatch) {
    auto j = io::matrix_to_json(Matrix::Identity(2, 2));
    j["rows"] = 3;
    expect_error(ErrorKind::InvalidState, [&] { io::matrix_from_json(j); });
}

TEST(Serialize, DensityRoundTrip) {
    std::mt19937_64 rng(72);
    const DensityMatrix rho(FactorLayout({{"A", 2}, {"B", 3}}), random_density(6, rng));
    const auto back = io::density_from_json(json::parse(io::density_to_json(rho).dump()));
    EXPECT_EQ(back.layout(), rho.layout());
    EXPECT_EQ(max_abs(back.data() - rho.data()), 0.0);
}

TEST(Serialize, DensityValidatesOnLoad) {
    json j = io::density_to_json(DensityMatrix(FactorLayout({{"A", 2}}), Matrix::Identity(2, 2) / 2.0));
    j["data"].erase(0);
    expect_error(ErrorKind::InvalidState, [&] { io::density_from_json(j); });
    j = io::density_to_json(DensityMatrix(FactorLayout({{"A", 2}}), Matrix::Identity(2, 2) / 2.0));
    j["data"][0] = {2.0, 0.0};  // trace 2.5
    EXPECT_THROW(io::density_from_json(j), Error);
}

TEST(Serialize, DecompositionRoundTrip) {
    const auto rho = random_markov_state(2, {{1, 2}, {2, 1}}, 2, 73);
    const auto dec = markov_decompose(rho, {"A"}, {"B"}, {"C"});
    const auto back = io::decomposition_from_json(json::parse(io::decomposition_to_json(dec).dump()));
    EXPECT_EQ(back.shape(), dec.shape());
    EXPECT_EQ(back.A, dec.A);
    EXPECT_EQ(trace_distance(reconstruct(back), reconstruct(dec)), 0.0);
}

TEST(Mask, ShippedMasksRoundTrip) {
    for (const auto &entry : std::filesystem::directory_iterator(std::string(IRRCORR_SOURCE_DIR) + "/configs/masks")) {
        std::ifstream in(entry.path());
        const json j = json::parse(in);
        const auto m = io::mask_from_json(j);
        EXPECT_EQ(io::mask_to_json(m), j) << entry.path();
    }
}

TEST(Mask, RejectsUnknownKeysAndBadRegions) {
    const json good = {{"lattice", {{"Lx", 4}, {"Ly", 4}}},
                       {"regions", {{"A", {0}}, {"B", {1}}, {"C", {10}}}},
                       {"geometry", "trivial"}};
    EXPECT_NO_THROW(io::mask_from_json(good));
    json extra = good;
    extra["colour"] = "red";
    expect_error(ErrorKind::ConfigError, [&] { io::mask_from_json(extra); });
    json nested = good;
    nested["lattice"]["Lz"] = 2;
    expect_error(ErrorKind::ConfigError, [&] { io::mask_from_json(nested); });
    json overlap = good;
    overlap["regions"]["C"] = {1};
    expect_error(ErrorKind::InvalidMask, [&] { io::mask_from_json(overlap); });
    json tiny = good;
    tiny["lattice"]["Lx"] = 1;
    expect_error(ErrorKind::InvalidLattice, [&] { io::mask_from_json(tiny); });
}

TEST(Report, NonFiniteNumbersBecomeNull) {
    EXPECT_TRUE(io::number(std::nan("")).is_null());
    EXPECT_TRUE(io::number(INFINITY).is_null());
    EXPECT_EQ(io::number(0.5).get<double>(), 0.5);
}

TEST(Report, CsvCellsRoundTrip) {
    const double x = 0.1 + 0.2;
    EXPECT_EQ(std::stod(io::cell(x)), x);
}

TEST(Report, SvgHasOnePolylinePerSeries) {
    const auto svg = io::svg_line_chart("t", "p", {0, 1, 2}, {{"a", {1, 2, 3}}, {"b", {3, std::nan(""), 1}}});
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    std::size_t count = 0;
    for (auto pos = svg.find("<polyline"); pos != std::string::npos; pos = svg.find("<polyline", pos + 1)) ++count;
    EXPECT_EQ(count, 2u);
    EXPECT_EQ(svg.find("nan"), std::string::npos);
}

}  // namespace
