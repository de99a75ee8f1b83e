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
#include <cstring>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "irrcorr/core/density_matrix.hpp"
#include "irrcorr/markov/decomposition.hpp"

namespace irrcorr::io {

using json = nlohmann::json;

/// 64-bit FNV-1a, used to tag reports with the config that produced them.
inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, v >>= 4) out[static_cast<std::size_t>(i)] = kDigits[v & 0xf];
    return out;
}

namespace detail {

inline constexpr char kB64[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

inline std::string base64_encode(const std::vector<unsigned char> &bytes) {
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    for (std::size_t i = 0; i < bytes.size(); i += 3) {
        std::uint32_t chunk = static_cast<std::uint32_t>(bytes[i]) << 16;
        if (i + 1 < bytes.size()) chunk |= static_cast<std::uint32_t>(bytes[i + 1]) << 8;
        if (i + 2 < bytes.size()) chunk |= bytes[i + 2];
        out.push_back(kB64[(chunk >> 18) & 63]);
        out.push_back(kB64[(chunk >> 12) & 63]);
        out.push_back(i + 1 < bytes.size() ? kB64[(chunk >> 6) & 63] : '=');
        out.push_back(i + 2 < bytes.size() ? kB64[chunk & 63] : '=');
    }
    return out;
}

inline std::vector<unsigned char> base64_decode(std::string_view s) {
    auto value = [](char c) -> int {
        const char *p = std::strchr(kB64, c);
        return (c != '\0' && p) ? static_cast<int>(p - kB64) : -1;
    };
    if (s.size() % 4 != 0) fail(ErrorKind::InvalidState, "base64 length is not a multiple of 4");
    std::vector<unsigned char> out;
    for (std::size_t i = 0; i < s.size(); i += 4) {
        std::uint32_t chunk = 0;
        int pad = 0;
        for (std::size_t k = 0; k < 4; ++k) {
            const char c = s[i + k];
            int v = 0;
            if (c == '=') {
                ++pad;
            } else if ((v = value(c)) < 0) {
                fail(ErrorKind::InvalidState, "invalid base64 character");
            }
            chunk = (chunk << 6) | static_cast<std::uint32_t>(v);
        }
        out.push_back(static_cast<unsigned char>(chunk >> 16));
        if (pad < 2) out.push_back(static_cast<unsigned char>(chunk >> 8));
        if (pad < 1) out.push_back(static_cast<unsigned char>(chunk));
    }
    return out;
}

}  // namespace detail

/// Row-major (re, im) doubles, little-endian IEEE-754, base64 encoded.
inline json matrix_to_json(const Matrix &m) {
    std::vector<unsigned char> bytes;
    bytes.reserve(static_cast<std::size_t>(m.size()) * 16);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            for (double part : {m(i, j).real(), m(i, j).imag()}) {
                std::uint64_t bits;
                std::memcpy(&bits, &part, sizeof bits);
                for (int b = 0; b < 8; ++b) bytes.push_back(static_cast<unsigned char>(bits >> (8 * b)));
            }
        }
    }
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"base64", detail::base64_encode(bytes)}};
}

inline Matrix matrix_from_json(const json &j) {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const auto bytes = detail::base64_decode(j.at("base64").get<std::string>());
    if (bytes.size() != static_cast<std::size_t>(rows * cols) * 16) {
        fail(ErrorKind::InvalidState, "matrix payload size does not match its shape");
    }
    Matrix m(rows, cols);
    std::size_t pos = 0;
    auto next = [&] {
        std::uint64_t bits = 0;
        for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(bytes[pos++]) << (8 * b);
        double d;
        std::memcpy(&d, &bits, sizeof d);
        return d;
    };
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index k = 0; k < cols; ++k) {
            const double re = next();
            m(i, k) = Complex(re, next());
        }
    }
    return m;
}

inline json layout_to_json(const FactorLayout &layout) {
    json out = json::array();
    for (const auto &s : layout.sites()) out.push_back({{"label", s.label}, {"dim", s.dim}});
    return out;
}

inline FactorLayout layout_from_json(const json &j) {
    std::vector<Site> sites;
    for (const auto &s : j) sites.push_back({s.at("label").get<std::string>(), s.at("dim").get<std::size_t>()});
    return FactorLayout(std::move(sites));
}

/// Density matrix container: layout header plus row-major complex pairs.
inline json density_to_json(const DensityMatrix &rho) {
    json data = json::array();
    const Matrix &m = rho.data();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index k = 0; k < m.cols(); ++k) data.push_back({m(i, k).real(), m(i, k).imag()});
    }
    return {{"layout", layout_to_json(rho.layout())}, {"data", std::move(data)}};
}

/// Validates the state on the way in.
inline DensityMatrix density_from_json(const json &j) {
    auto layout = layout_from_json(j.at("layout"));
    const auto d = static_cast<Eigen::Index>(layout.total_dim());
    const auto &data = j.at("data");
    if (data.size() != static_cast<std::size_t>(d * d)) {
        fail(ErrorKind::InvalidState, "data holds " + std::to_string(data.size()) + " entries, layout needs " +
                                          std::to_string(d * d));
    }
    Matrix m(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index k = 0; k < d; ++k) {
            const auto &e = data[static_cast<std::size_t>(i * d + k)];
            m(i, k) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
        }
    }
    return DensityMatrix(std::move(layout), m);
}

inline json decomposition_to_json(const MarkovDecomposition &dec) {
    json blocks = json::array();
    for (const auto &b : dec.blocks) {
        blocks.push_back({{"weight", b.weight},
                          {"left_dim", b.left_dim},
                          {"right_dim", b.right_dim},
                          {"isometry", matrix_to_json(b.isometry)},
                          {"left", {{"layout", layout_to_json(b.left.layout())}, {"matrix", matrix_to_json(b.left.data())}}},
                          {"right",
                           {{"layout", layout_to_json(b.right.layout())}, {"matrix", matrix_to_json(b.right.data())}}}});
    }
    return {{"A", dec.A}, {"B", dec.B}, {"C", dec.C}, {"layout", layout_to_json(dec.layout)}, {"blocks", blocks}};
}

inline MarkovDecomposition decomposition_from_json(const json &j) {
    MarkovDecomposition dec;
    dec.A = j.at("A").get<LabelSet>();
    dec.B = j.at("B").get<LabelSet>();
    dec.C = j.at("C").get<LabelSet>();
    dec.layout = layout_from_json(j.at("layout"));
    for (const auto &b : j.at("blocks")) {
        auto state = [&](const json &s) {
            return DensityMatrix(layout_from_json(s.at("layout")), matrix_from_json(s.at("matrix")), DensityMatrix::Trusted{});
        };
        dec.blocks.push_back({b.at("weight").get<double>(), b.at("left_dim").get<std::size_t>(),
                              b.at("right_dim").get<std::size_t>(), matrix_from_json(b.at("isometry")),
                              state(b.at("left")), state(b.at("right"))});
    }
    return dec;
}

}  // namespace irrcorr::io
