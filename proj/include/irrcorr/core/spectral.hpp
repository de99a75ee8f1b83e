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

#include <vector>

#include "irrcorr/core/density_matrix.hpp"

namespace irrcorr {

/// Eigenvalues grouped into numerically degenerate eigenspaces.
struct Spectrum {
    std::vector<double> eigenvalues;   // descending, one per group
    std::vector<Matrix> bases;         // orthonormal columns spanning each eigenspace
    std::vector<std::size_t> degeneracies;

    std::size_t distinct_count() const { return eigenvalues.size(); }

    Matrix projector(std::size_t k) const { return bases[k] * bases[k].adjoint(); }

    Matrix reconstruct() const {
        const auto d = bases.empty() ? 0 : bases.front().rows();
        Matrix out = Matrix::Zero(d, d);
        for (std::size_t k = 0; k < eigenvalues.size(); ++k) out += eigenvalues[k] * projector(k);
        return out;
    }
};

/// Groups consecutive (descending) eigenvalues whose gap is at most
/// rel_tol * lambda_max. Grouping is transitive along the sorted list.
inline Spectrum spectral(const Matrix &op, double rel_tol = tol::degeneracy) {
    auto e = eigh(op);
    const auto n = e.values.size();
    Spectrum out;
    if (n == 0) return out;
    const double scale = std::max(e.values.cwiseAbs().maxCoeff(), 1e-300);
    const double gap = rel_tol * scale;

    Eigen::Index start = n - 1;
    while (start >= 0) {
        Eigen::Index end = start;  // group covers [end, start] in ascending storage
        while (end - 1 >= 0 && e.values(end) - e.values(end - 1) <= gap) --end;
        const Eigen::Index size = start - end + 1;
        out.eigenvalues.push_back(e.values.segment(end, size).mean());
        out.bases.push_back(e.vectors.middleCols(end, size).rowwise().reverse());
        out.degeneracies.push_back(static_cast<std::size_t>(size));
        start = end - 1;
    }
    return out;
}

inline Spectrum spectral(const DensityMatrix &rho, double rel_tol = tol::degeneracy) {
    return spectral(rho.data(), rel_tol);
}

}  // namespace irrcorr
