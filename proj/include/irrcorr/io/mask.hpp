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

#include <array>
#include <set>
#include <string>

#include "irrcorr/io/serialize.hpp"
#include "irrcorr/maxent/report.hpp"
#include "irrcorr/stabilizer/region_mask.hpp"

namespace irrcorr::io {

struct LoadedMask {
    ToricCodeSpec lattice;
    RegionMask mask;
};

inline void reject_unknown(const json &obj, std::initializer_list<const char *> allowed, const std::string &where) {
    if (!obj.is_object()) fail(ErrorKind::ConfigError, where + " must be an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto &[key, _] : obj.items()) {
        if (!ok.count(key)) fail(ErrorKind::ConfigError, "unknown key '" + key + "' in " + where);
    }
}

/// {"lattice": {"Lx", "Ly"}, "regions": {"A", "B", "C", optional "B1", "B2"
/// or "X1".."X6"}, "geometry": tag}.
inline LoadedMask mask_from_json(const json &j) {
    reject_unknown(j, {"lattice", "regions", "geometry"}, "mask");
    LoadedMask out;
    const auto &lat = j.at("lattice");
    reject_unknown(lat, {"Lx", "Ly"}, "mask.lattice");
    out.lattice = {lat.at("Lx").get<std::size_t>(), lat.at("Ly").get<std::size_t>()};
    out.lattice.validate();
    const auto &reg = j.at("regions");
    reject_unknown(reg, {"A", "B", "C", "B1", "B2", "X1", "X2", "X3", "X4", "X5", "X6"}, "mask.regions");
    out.mask.A = reg.at("A").get<QubitSet>();
    out.mask.B = reg.at("B").get<QubitSet>();
    out.mask.C = reg.at("C").get<QubitSet>();
    out.mask.geometry = geometry_from_string(j.at("geometry").get<std::string>());
    for (const char *name : {"B1", "B2", "X1", "X2", "X3", "X4", "X5", "X6"}) {
        if (reg.contains(name)) out.mask.sub.emplace_back(name, reg.at(name).get<QubitSet>());
    }
    validate_mask(out.lattice, out.mask);
    return out;
}

inline json mask_to_json(const LoadedMask &m) {
    json regions = {{"A", m.mask.A}, {"B", m.mask.B}, {"C", m.mask.C}};
    for (const auto &[name, q] : m.mask.sub) regions[name] = q;
    return {{"lattice", {{"Lx", m.lattice.Lx}, {"Ly", m.lattice.Ly}}},
            {"regions", regions},
            {"geometry", std::string(to_string(m.mask.geometry))}};
}

/// Labelled regions for the dense path, including whichever splits the mask carries.
inline TeeRegions tee_regions(const RegionMask &m) {
    TeeRegions r{qubit_labels(m.A), qubit_labels(m.B), qubit_labels(m.C), std::nullopt, std::nullopt};
    auto has = [&](const std::string &n) {
        return std::any_of(m.sub.begin(), m.sub.end(), [&](const auto &s) { return s.first == n; });
    };
    if (has("B1") && has("B2")) r.b_split = std::make_pair(qubit_labels(m.piece("B1")), qubit_labels(m.piece("B2")));
    if (has("X1")) {
        std::array<LabelSet, 6> ring;
        for (int k = 0; k < 6; ++k) ring[static_cast<std::size_t>(k)] = qubit_labels(m.piece("X" + std::to_string(k + 1)));
        r.ring = ring;
    }
    return r;
}

}  // namespace irrcorr::io
