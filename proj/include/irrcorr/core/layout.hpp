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
#include <unordered_set>
#include <vector>

#include "irrcorr/core/errors.hpp"

namespace irrcorr {

using LabelSet = std::vector<std::string>;

struct Site {
    std::string label;
    std::size_t dim = 1;

    bool operator==(const Site &) const = default;
};

/// Ordered tensor-factor layout. Factor 0 is the most significant index of
/// the Kronecker product, matching Eigen's kroneckerProduct convention.
class FactorLayout {
  public:
    FactorLayout() = default;

    explicit FactorLayout(std::vector<Site> sites) : sites_(std::move(sites)) {
        std::unordered_set<std::string> seen;
        for (const auto &s : sites_) {
            if (s.dim == 0) {
                fail(ErrorKind::InvalidState, "site '" + s.label + "' has zero dimension");
            }
            if (!seen.insert(s.label).second) {
                fail(ErrorKind::DuplicateLabel, "label '" + s.label + "' appears twice");
            }
        }
    }

    /// n qubits labelled prefix0, prefix1, ...
    static FactorLayout qubits(std::size_t n, const std::string &prefix = "q") {
        std::vector<Site> sites;
        for (std::size_t i = 0; i < n; ++i) {
            sites.push_back({prefix + std::to_string(i), 2});
        }
        return FactorLayout(std::move(sites));
    }

    std::size_t size() const { return sites_.size(); }
    const std::vector<Site> &sites() const { return sites_; }
    const Site &operator[](std::size_t i) const { return sites_[i]; }

    std::size_t total_dim() const {
        std::size_t d = 1;
        for (const auto &s : sites_) d *= s.dim;
        return d;
    }

    std::vector<std::size_t> dims() const {
        std::vector<std::size_t> out;
        out.reserve(sites_.size());
        for (const auto &s : sites_) out.push_back(s.dim);
        return out;
    }

    LabelSet labels() const {
        LabelSet out;
        out.reserve(sites_.size());
        for (const auto &s : sites_) out.push_back(s.label);
        return out;
    }

    bool contains(const std::string &label) const {
        return std::any_of(sites_.begin(), sites_.end(),
                           [&](const Site &s) { return s.label == label; });
    }

    std::size_t index_of(const std::string &label) const {
        for (std::size_t i = 0; i < sites_.size(); ++i) {
            if (sites_[i].label == label) return i;
        }
        fail(ErrorKind::UnknownSubsystem, "no site labelled '" + label + "'");
    }

    /// Positions of `labels` in this layout, sorted by layout order.
    std::vector<std::size_t> positions(const LabelSet &labels) const {
        std::vector<std::size_t> pos;
        pos.reserve(labels.size());
        for (const auto &l : labels) pos.push_back(index_of(l));
        std::sort(pos.begin(), pos.end());
        if (std::adjacent_find(pos.begin(), pos.end()) != pos.end()) {
            fail(ErrorKind::DuplicateLabel, "label set repeats a site");
        }
        return pos;
    }

    std::size_t dim_of(const LabelSet &labels) const {
        std::size_t d = 1;
        for (auto p : positions(labels)) d *= sites_[p].dim;
        return d;
    }

    /// Sub-layout on `labels`, keeping this layout's order.
    FactorLayout restrict_to(const LabelSet &labels) const {
        std::vector<Site> sub;
        for (auto p : positions(labels)) sub.push_back(sites_[p]);
        return FactorLayout(std::move(sub));
    }

    /// Sub-layout in exactly the order given.
    FactorLayout reordered(const LabelSet &labels) const {
        std::vector<Site> sub;
        for (const auto &l : labels) sub.push_back(sites_[index_of(l)]);
        return FactorLayout(std::move(sub));
    }

    FactorLayout concat(const FactorLayout &other) const {
        std::vector<Site> all = sites_;
        all.insert(all.end(), other.sites_.begin(), other.sites_.end());
        return FactorLayout(std::move(all));
    }

    bool operator==(const FactorLayout &) const = default;

  private:
    std::vector<Site> sites_;
};

inline LabelSet set_union(const LabelSet &a, const LabelSet &b) {
    LabelSet out = a;
    for (const auto &l : b) {
        if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(l);
    }
    return out;
}

inline LabelSet set_union(std::initializer_list<LabelSet> sets) {
    LabelSet out;
    for (const auto &s : sets) out = set_union(out, s);
    return out;
}

inline bool disjoint(const LabelSet &a, const LabelSet &b) {
    return std::none_of(a.begin(), a.end(), [&](const std::string &l) {
        return std::find(b.begin(), b.end(), l) != b.end();
    });
}

inline LabelSet set_difference(const LabelSet &a, const LabelSet &b) {
    LabelSet out;
    for (const auto &l : a) {
        if (std::find(b.begin(), b.end(), l) == b.end()) out.push_back(l);
    }
    return out;
}

}  // namespace irrcorr
