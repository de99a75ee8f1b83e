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
#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "irrcorr/core/errors.hpp"
#include "irrcorr/stabilizer/tableau.hpp"

namespace irrcorr {

/// Kitaev toric code on an Lx x Ly periodic square lattice with qubits on
/// edges. Horizontal edge h(x,y) joins vertices (x,y)-(x+1,y) and has index
/// y*Lx + x; vertical edge v(x,y) joins (x,y)-(x,y+1) and has index
/// Lx*Ly + y*Lx + x.
struct ToricCodeSpec {
    std::size_t Lx = 4;
    std::size_t Ly = 4;

    void validate() const {
        if (Lx < 2 || Ly < 2) {
            fail(ErrorKind::InvalidLattice,
                 "toric lattice must be at least 2x2, got " + std::to_string(Lx) + "x" + std::to_string(Ly));
        }
    }

    std::size_t num_qubits() const { return 2 * Lx * Ly; }

    std::size_t wrap_x(long x) const { return static_cast<std::size_t>(((x % long(Lx)) + long(Lx)) % long(Lx)); }
    std::size_t wrap_y(long y) const { return static_cast<std::size_t>(((y % long(Ly)) + long(Ly)) % long(Ly)); }

    std::size_t h(long x, long y) const { return wrap_y(y) * Lx + wrap_x(x); }
    std::size_t v(long x, long y) const { return Lx * Ly + wrap_y(y) * Lx + wrap_x(x); }

    std::size_t vertex(long x, long y) const { return wrap_y(y) * Lx + wrap_x(x); }

    /// Vertex ids of the two endpoints of edge q.
    std::array<std::size_t, 2> endpoints(std::size_t q) const {
        const std::size_t plane = Lx * Ly;
        const long x = static_cast<long>((q % plane) % Lx);
        const long y = static_cast<long>((q % plane) / Lx);
        if (q < plane) return {vertex(x, y), vertex(x + 1, y)};
        return {vertex(x, y), vertex(x, y + 1)};
    }

    std::array<std::size_t, 4> star(long x, long y) const { return {h(x, y), h(x - 1, y), v(x, y), v(x, y - 1)}; }

    /// Plaquette with lower-left corner (x, y).
    std::array<std::size_t, 4> plaquette(long x, long y) const {
        return {h(x, y), h(x, y + 1), v(x, y), v(x + 1, y)};
    }
};

/// Ground state fixed by all stars and plaquettes (one of each dropped as
/// redundant) plus logical Z strings along row 0 and column 0; all signs +1.
inline StabilizerTableau toric_ground_state(const ToricCodeSpec &spec) {
    spec.validate();
    const std::size_t n = spec.num_qubits();
    std::vector<PauliString> gens;
    auto make = [n](const auto &qubits, bool is_x) {
        gf2::BitVector xs(n), zs(n);
        for (auto q : qubits) (is_x ? xs : zs).flip(q);
        return PauliString::hermitian(std::move(xs), std::move(zs), false);
    };
    const long Lx = static_cast<long>(spec.Lx), Ly = static_cast<long>(spec.Ly);
    for (long y = 0; y < Ly; ++y) {
        for (long x = 0; x < Lx; ++x) {
            if (x == Lx - 1 && y == Ly - 1) continue;
            gens.push_back(make(spec.star(x, y), true));
        }
    }
    for (long y = 0; y < Ly; ++y) {
        for (long x = 0; x < Lx; ++x) {
            if (x == Lx - 1 && y == Ly - 1) continue;
            gens.push_back(make(spec.plaquette(x, y), false));
        }
    }
    std::vector<std::size_t> row, col;
    for (long x = 0; x < Lx; ++x) row.push_back(spec.h(x, 0));
    for (long y = 0; y < Ly; ++y) col.push_back(spec.v(0, y));
    gens.push_back(make(row, false));
    gens.push_back(make(col, false));
    return StabilizerTableau(n, std::move(gens));
}

}  // namespace irrcorr
