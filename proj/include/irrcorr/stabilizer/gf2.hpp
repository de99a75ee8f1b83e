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

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace irrcorr::gf2 {

/// Dense bit vector packed into 64-bit words.
class BitVector {
  public:
    BitVector() = default;
    explicit BitVector(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

    std::size_t size() const { return n_; }
    bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i, bool v = true) {
        const std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (v) {
            words_[i >> 6] |= mask;
        } else {
            words_[i >> 6] &= ~mask;
        }
    }
    void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

    BitVector &operator^=(const BitVector &o) {
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= o.words_[w];
        return *this;
    }
    friend BitVector operator^(BitVector a, const BitVector &b) { return a ^= b; }

    bool any() const {
        for (auto w : words_) {
            if (w) return true;
        }
        return false;
    }
    std::size_t popcount() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }
    /// Parity of the bitwise AND with o.
    bool dot(const BitVector &o) const {
        std::uint64_t acc = 0;
        for (std::size_t w = 0; w < words_.size(); ++w) acc ^= words_[w] & o.words_[w];
        return std::popcount(acc) & 1;
    }

    bool operator==(const BitVector &) const = default;

  private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

using BitMatrix = std::vector<BitVector>;

/// Rank over GF(2). Rows are copied and reduced in place.
inline std::size_t rank(BitMatrix rows) {
    if (rows.empty()) return 0;
    const std::size_t cols = rows.front().size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
        std::size_t piv = r;
        while (piv < rows.size() && !rows[piv].get(c)) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[r], rows[piv]);
        for (std::size_t i = r + 1; i < rows.size(); ++i) {
            if (rows[i].get(c)) rows[i] ^= rows[r];
        }
        ++r;
    }
    return r;
}

/// Basis of the left kernel {c : sum_i c_i rows_i = 0}, each vector indexed by row.
inline std::vector<BitVector> left_kernel(const BitMatrix &rows) {
    const std::size_t k = rows.size();
    if (k == 0) return {};
    const std::size_t cols = rows.front().size();
    BitMatrix work = rows;
    std::vector<BitVector> track(k, BitVector(k));
    for (std::size_t i = 0; i < k; ++i) track[i].set(i);

    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < k; ++c) {
        std::size_t piv = r;
        while (piv < k && !work[piv].get(c)) ++piv;
        if (piv == k) continue;
        std::swap(work[r], work[piv]);
        std::swap(track[r], track[piv]);
        for (std::size_t i = r + 1; i < k; ++i) {
            if (work[i].get(c)) {
                work[i] ^= work[r];
                track[i] ^= track[r];
            }
        }
        ++r;
    }
    return {track.begin() + static_cast<std::ptrdiff_t>(r), track.end()};
}

}  // namespace irrcorr::gf2
