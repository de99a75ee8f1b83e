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

#include <cstddef>
#include <string>
#include <vector>

#include "irrcorr/core/density_matrix.hpp"
#include "irrcorr/core/entropy.hpp"
#include "irrcorr/core/errors.hpp"
#include "irrcorr/stabilizer/gf2.hpp"

namespace irrcorr {

/// i^phase * X^x Z^z on n qubits.
struct PauliString {
    gf2::BitVector x;
    gf2::BitVector z;
    unsigned phase = 0;  // mod 4

    explicit PauliString(std::size_t n = 0) : x(n), z(n) {}

    std::size_t num_qubits() const { return x.size(); }

    /// Hermitian Pauli with sign (-1)^sign; Y components carry the factor i.
    static PauliString hermitian(gf2::BitVector xs, gf2::BitVector zs, bool sign) {
        PauliString p;
        p.x = std::move(xs);
        p.z = std::move(zs);
        p.phase = static_cast<unsigned>((2 * static_cast<std::size_t>(sign) + p.y_count()) % 4);
        return p;
    }

    std::size_t y_count() const {
        std::size_t c = 0;
        for (std::size_t q = 0; q < x.size(); ++q) c += x.get(q) && z.get(q);
        return c;
    }

    bool commutes_with(const PauliString &o) const { return x.dot(o.z) == z.dot(o.x); }

    PauliString operator*(const PauliString &o) const {
        PauliString out;
        out.x = x ^ o.x;
        out.z = z ^ o.z;
        out.phase = (phase + o.phase + (z.dot(o.x) ? 2u : 0u)) % 4;
        return out;
    }

    bool supported_within(const std::vector<bool> &inside) const {
        for (std::size_t q = 0; q < x.size(); ++q) {
            if ((x.get(q) || z.get(q)) && !inside[q]) return false;
        }
        return true;
    }
};

/// Stabilizer group given by independent commuting generators. Describes the
/// state 2^{-n} prod_g (I + g), pure when the generator count equals n.
class StabilizerTableau {
  public:
    StabilizerTableau(std::size_t n_qubits, std::vector<PauliString> generators)
        : n_(n_qubits), gens_(std::move(generators)) {
        for (const auto &g : gens_) {
            if (g.num_qubits() != n_) fail(ErrorKind::InvalidState, "generator length mismatch");
            if (g.phase % 2) fail(ErrorKind::InvalidState, "generator is not Hermitian");
        }
        for (std::size_t i = 0; i < gens_.size(); ++i) {
            for (std::size_t j = i + 1; j < gens_.size(); ++j) {
                if (!gens_[i].commutes_with(gens_[j])) {
                    fail(ErrorKind::InvalidState,
                         "generators " + std::to_string(i) + " and " + std::to_string(j) + " anticommute");
                }
            }
        }
        if (gf2::rank(symplectic_rows(all_qubits())) != gens_.size()) {
            fail(ErrorKind::InvalidState, "generators are linearly dependent");
        }
    }

    std::size_t num_qubits() const { return n_; }
    std::size_t num_generators() const { return gens_.size(); }
    const std::vector<PauliString> &generators() const { return gens_; }
    bool is_pure() const { return gens_.size() == n_; }

    /// Generator rows restricted to `qubits`, laid out as (X bits | Z bits).
    gf2::BitMatrix symplectic_rows(const std::vector<std::size_t> &qubits) const {
        gf2::BitMatrix rows;
        rows.reserve(gens_.size());
        const std::size_t m = qubits.size();
        for (const auto &g : gens_) {
            gf2::BitVector row(2 * m);
            for (std::size_t k = 0; k < m; ++k) {
                if (g.x.get(qubits[k])) row.set(k);
                if (g.z.get(qubits[k])) row.set(m + k);
            }
            rows.push_back(std::move(row));
        }
        return rows;
    }

    std::vector<std::size_t> all_qubits() const {
        std::vector<std::size_t> q(n_);
        for (std::size_t i = 0; i < n_; ++i) q[i] = i;
        return q;
    }

    std::vector<std::size_t> complement(const std::vector<std::size_t> &region) const {
        auto inside = mask(region);
        std::vector<std::size_t> out;
        for (std::size_t q = 0; q < n_; ++q) {
            if (!inside[q]) out.push_back(q);
        }
        return out;
    }

    std::vector<bool> mask(const std::vector<std::size_t> &region) const {
        std::vector<bool> inside(n_, false);
        for (auto q : region) {
            if (q >= n_) fail(ErrorKind::UnknownSubsystem, "qubit " + std::to_string(q) + " out of range");
            if (inside[q]) fail(ErrorKind::DuplicateLabel, "qubit " + std::to_string(q) + " listed twice");
            inside[q] = true;
        }
        return inside;
    }

    /// Basis of the subgroup supported entirely inside `region`: the kernel of
    /// the restriction-to-complement map.
    std::vector<PauliString> subgroup_inside(const std::vector<std::size_t> &region) const {
        auto comp = complement(region);
        std::vector<PauliString> out;
        for (const auto &c : gf2::left_kernel(symplectic_rows(comp))) {
            PauliString p(n_);
            for (std::size_t i = 0; i < gens_.size(); ++i) {
                if (c.get(i)) p = p * gens_[i];
            }
            out.push_back(std::move(p));
        }
        return out;
    }

    std::size_t subgroup_dim_inside(const std::vector<std::size_t> &region) const {
        return gens_.size() - gf2::rank(symplectic_rows(complement(region)));
    }

  private:
    std::size_t n_;
    std::vector<PauliString> gens_;
};

/// Region entropy in bits; always an integer for stabilizer states.
inline long region_entropy_bits(const StabilizerTableau &tab, const std::vector<std::size_t> &region) {
    tab.mask(region);
    const long n_inside = static_cast<long>(region.size());
    // The state is maximally mixed on the n - k unconstrained directions; for
    // pure states this reduces to |R| - dim G_R.
    return n_inside - static_cast<long>(tab.subgroup_dim_inside(region));
}

/// Region entropy in nats.
inline double region_entropy(const StabilizerTableau &tab, const std::vector<std::size_t> &region) {
    return static_cast<double>(region_entropy_bits(tab, region)) * kLn2;
}

inline std::string qubit_label(std::size_t q) { return "q" + std::to_string(q); }

inline LabelSet qubit_labels(const std::vector<std::size_t> &qubits) {
    LabelSet out;
    for (auto q : qubits) out.push_back(qubit_label(q));
    return out;
}

inline constexpr std::size_t kDenseQubitLimit = 12;

/// Dense reduced state 2^{-|R|} prod_{g in basis(G_R)} (I + g) on the region,
/// factors ordered as listed, labelled q<id>.
inline DensityMatrix rdm_dense(const StabilizerTableau &tab, const std::vector<std::size_t> &region) {
    if (region.empty()) fail(ErrorKind::UnknownSubsystem, "rdm_dense needs a nonempty region");
    if (region.size() > kDenseQubitLimit) {
        fail(ErrorKind::DenseLimitExceeded, "region of " + std::to_string(region.size()) +
                                                " qubits exceeds the dense limit of " +
                                                std::to_string(kDenseQubitLimit));
    }
    tab.mask(region);
    const std::size_t m = region.size();
    const auto d = static_cast<Eigen::Index>(std::size_t{1} << m);
    Matrix rho = Matrix::Identity(d, d);

    static constexpr Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (const auto &g : tab.subgroup_inside(region)) {
        // Local bit masks; factor k of the region is bit (m - 1 - k) of the index.
        std::size_t xmask = 0, zmask = 0;
        for (std::size_t k = 0; k < m; ++k) {
            const std::size_t bit = std::size_t{1} << (m - 1 - k);
            if (g.x.get(region[k])) xmask |= bit;
            if (g.z.get(region[k])) zmask |= bit;
        }
        const Complex phase = kIPow[g.phase % 4];
        Matrix applied(d, d);
        for (Eigen::Index s = 0; s < d; ++s) {
            const auto us = static_cast<std::size_t>(s);
            const double sign = (std::popcount(us & zmask) & 1) ? -1.0 : 1.0;
            applied.row(static_cast<Eigen::Index>(us ^ xmask)) = (phase * sign) * rho.row(s);
        }
        rho += applied;
    }
    rho /= static_cast<double>(d);
    std::vector<Site> sites;
    for (auto q : region) sites.push_back({qubit_label(q), 2});
    return DensityMatrix(FactorLayout(std::move(sites)), rho, DensityMatrix::Trusted{});
}

}  // namespace irrcorr
