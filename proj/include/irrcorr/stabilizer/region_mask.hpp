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
#include <cstddef>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "irrcorr/core/errors.hpp"
#include "irrcorr/stabilizer/tableau.hpp"
#include "irrcorr/stabilizer/toric.hpp"

namespace irrcorr {

enum class Geometry { KpDisk, KpAnnulus, LwAnnulus, Trivial };

inline std::string_view to_string(Geometry g) {
    switch (g) {
        case Geometry::KpDisk: return "KP-disk";
        case Geometry::KpAnnulus: return "KP-annulus";
        case Geometry::LwAnnulus: return "LW-annulus";
        case Geometry::Trivial: return "trivial";
    }
    return "unknown";
}

inline Geometry geometry_from_string(std::string_view s) {
    if (s == "KP-disk") return Geometry::KpDisk;
    if (s == "KP-annulus") return Geometry::KpAnnulus;
    if (s == "LW-annulus") return Geometry::LwAnnulus;
    if (s == "trivial") return Geometry::Trivial;
    fail(ErrorKind::InvalidMask, "unknown geometry tag '" + std::string(s) + "'");
}

using QubitSet = std::vector<std::size_t>;

inline QubitSet qubit_union(const QubitSet &a, const QubitSet &b) {
    QubitSet out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

/// Three disjoint qubit regions with a declared geometry. Annulus masks may
/// carry the finer splits used by the merge constructions: `sub` lists the
/// pieces (A1, A2, B1, B2, C1, C2) for ring merges or (A, B1, B2, C) for the
/// Levin-Wen annulus.
struct RegionMask {
    QubitSet A, B, C;
    Geometry geometry = Geometry::KpDisk;
    std::vector<std::pair<std::string, QubitSet>> sub;

    QubitSet ABC() const { return qubit_union(qubit_union(A, B), C); }

    const QubitSet &piece(const std::string &name) const {
        for (const auto &[n, q] : sub) {
            if (n == name) return q;
        }
        fail(ErrorKind::InvalidMask, "mask has no sub-region '" + name + "'");
    }

    /// Same mask shifted by (dx, dy) lattice units.
    RegionMask translated(const ToricCodeSpec &spec, long dx, long dy) const {
        auto shift = [&](const QubitSet &qs) {
            QubitSet out;
            const std::size_t plane = spec.Lx * spec.Ly;
            for (auto q : qs) {
                const long x = static_cast<long>((q % plane) % spec.Lx) + dx;
                const long y = static_cast<long>((q % plane) / spec.Lx) + dy;
                out.push_back(q < plane ? spec.h(x, y) : spec.v(x, y));
            }
            return out;
        };
        RegionMask m{shift(A), shift(B), shift(C), geometry, {}};
        for (const auto &[n, q] : sub) m.sub.emplace_back(n, shift(q));
        return m;
    }
};

/// True when the edges form one component under "share a vertex" adjacency.
inline bool edges_connected(const ToricCodeSpec &spec, const QubitSet &edges) {
    if (edges.empty()) return false;
    std::vector<std::size_t> parent(edges.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < edges.size(); ++i) {
        auto ei = spec.endpoints(edges[i]);
        for (std::size_t j = i + 1; j < edges.size(); ++j) {
            auto ej = spec.endpoints(edges[j]);
            bool touch = ei[0] == ej[0] || ei[0] == ej[1] || ei[1] == ej[0] || ei[1] == ej[1];
            if (touch) parent[find(i)] = find(j);
        }
    }
    const auto root = find(0);
    for (std::size_t i = 1; i < edges.size(); ++i) {
        if (find(i) != root) return false;
    }
    return true;
}

inline bool edges_adjacent(const ToricCodeSpec &spec, const QubitSet &a, const QubitSet &b) {
    for (auto x : a) {
        auto ex = spec.endpoints(x);
        for (auto y : b) {
            auto ey = spec.endpoints(y);
            if (ex[0] == ey[0] || ex[0] == ey[1] || ex[1] == ey[0] || ex[1] == ey[1]) return true;
        }
    }
    return false;
}

/// Checks disjointness and the connectivity the geometry tag promises.
inline void validate_mask(const ToricCodeSpec &spec, const RegionMask &mask) {
    const std::size_t n = spec.num_qubits();
    std::vector<int> owner(n, -1);
    int idx = 0;
    for (const QubitSet *r : {&mask.A, &mask.B, &mask.C}) {
        if (r->empty()) fail(ErrorKind::InvalidMask, "regions must be nonempty");
        for (auto q : *r) {
            if (q >= n) fail(ErrorKind::InvalidMask, "qubit " + std::to_string(q) + " outside lattice");
            if (owner[q] != -1) fail(ErrorKind::InvalidMask, "qubit " + std::to_string(q) + " in two regions");
            owner[q] = idx;
        }
        ++idx;
    }
    auto require = [&](bool ok, const std::string &what) {
        if (!ok) fail(ErrorKind::InvalidMask, std::string(to_string(mask.geometry)) + ": " + what);
    };
    switch (mask.geometry) {
        case Geometry::KpDisk:
        case Geometry::KpAnnulus:
            require(edges_connected(spec, mask.A), "A must be connected");
            require(edges_connected(spec, mask.B), "B must be connected");
            require(edges_connected(spec, mask.C), "C must be connected");
            require(edges_connected(spec, mask.ABC()), "ABC must be connected");
            break;
        case Geometry::LwAnnulus:
            require(edges_connected(spec, mask.A), "A must be connected");
            require(edges_connected(spec, mask.C), "C must be connected");
            require(!edges_adjacent(spec, mask.A, mask.C), "A and C must be separated");
            require(edges_connected(spec, mask.ABC()), "ABC must be connected");
            break;
        case Geometry::Trivial:
            break;
    }
    for (const auto &[name, q] : mask.sub) {
        for (auto x : q) {
            if (x >= n || owner[x] == -1) fail(ErrorKind::InvalidMask, "sub-region '" + name + "' leaves ABC");
        }
    }
}

/// gamma = S(AB)+S(BC)+S(CA)-S(A)-S(B)-S(C)-S(ABC), in bits.
inline long tee_bits(const StabilizerTableau &tab, const RegionMask &m) {
    auto s = [&](const QubitSet &r) { return region_entropy_bits(tab, r); };
    return s(qubit_union(m.A, m.B)) + s(qubit_union(m.B, m.C)) + s(qubit_union(m.C, m.A)) - s(m.A) - s(m.B) -
           s(m.C) - s(m.ABC());
}

/// Topological entanglement entropy in nats.
inline double tee(const StabilizerTableau &tab, const RegionMask &m) {
    return static_cast<double>(tee_bits(tab, m)) * kLn2;
}

}  // namespace irrcorr
