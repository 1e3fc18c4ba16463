// Copyright 2026 The bellbound Authors
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

#include <cmath>
#include <span>
#include <vector>

#include "jacobi.hpp"
#include "matrix.hpp"
#include "state.hpp"

namespace bellbound {

inline constexpr double kPsdTol = 1e-10;

/// Covariance data of a family of Hermitian operators O_i on a state:
/// M_ij = <{O_i, O_j}>/2, V_i = <O_i>, C = M - V V^T.
struct CovarianceWitness {
    RealMatrix second_moments;  // M
    std::vector<double> means;  // V
    RealMatrix covariance;      // C

    [[nodiscard]] double min_eigenvalue() const { return symmetric_eigenvalues(covariance).front(); }
    [[nodiscard]] bool is_psd(double tol = kPsdTol) const { return bellbound::is_psd(covariance, tol); }

    /// Contraction with u = [1, (-1)^m] for a two-operator witness.
    struct ScalarReduction {
        double lhs;  // |V_0 + (-1)^m V_1|
        double rhs;  // sqrt(u^T M u)
    };

    [[nodiscard]] ScalarReduction scalar_reduction(int m) const {
        if (means.size() != 2) {
            throw std::invalid_argument("scalar_reduction: needs exactly two operators");
        }
        const double s = (m % 2 == 0) ? 1.0 : -1.0;
        const RealMatrix &mm = second_moments;
        const double quad = mm(0, 0) + mm(1, 1) + 2.0 * s * mm(0, 1);
        return {std::abs(means[0] + s * means[1]), std::sqrt(std::max(0.0, quad))};
    }
};

/// Requires Hermitian operators of the state's dimension. Uses
/// M_ij = Re <O_i O_j>, evaluated from O_i|psi> (pure) or rho O_i (mixed)
/// so each pair costs O(d^2).
inline CovarianceWitness covariance_witness(const QuantumState &state, std::span<const ComplexMatrix> ops) {
    const std::size_t k = ops.size();
    for (const auto &op : ops) {
        detail::require_state_dim(state, op, "covariance_witness");
        if (!op.is_hermitian(1e-12)) {
            throw InvariantViolation("covariance_witness: operator is not Hermitian");
        }
    }
    CovarianceWitness w{RealMatrix(k), std::vector<double>(k), RealMatrix(k)};
    const std::size_t d = state.dim();
    if (state.is_pure()) {
        const auto psi = state.amplitudes();
        std::vector<std::vector<Complex>> images;
        images.reserve(k);
        for (const auto &op : ops) {
            images.push_back(op.apply(psi));
        }
        for (std::size_t i = 0; i < k; ++i) {
            Complex mean{};
            for (std::size_t a = 0; a < d; ++a) {
                mean += std::conj(psi[a]) * images[i][a];
            }
            w.means[i] = detail::real_or_throw(mean, "covariance_witness");
            for (std::size_t j = 0; j <= i; ++j) {
                Complex inner{};
                for (std::size_t a = 0; a < d; ++a) {
                    inner += std::conj(images[i][a]) * images[j][a];
                }
                w.second_moments(i, j) = w.second_moments(j, i) = inner.real();
            }
        }
    } else {
        const ComplexMatrix rho = state.density();
        std::vector<ComplexMatrix> rho_ops;
        rho_ops.reserve(k);
        for (const auto &op : ops) {
            rho_ops.push_back(rho * op);
        }
        for (std::size_t i = 0; i < k; ++i) {
            w.means[i] = detail::real_or_throw(rho_ops[i].trace(), "covariance_witness");
            for (std::size_t j = 0; j <= i; ++j) {
                // Tr(rho O_j O_i) = Tr((rho O_j) O_i)
                const Complex inner = detail::trace_of_product(rho_ops[j], ops[i]);
                w.second_moments(i, j) = w.second_moments(j, i) = inner.real();
            }
        }
    }
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            w.covariance(i, j) = w.second_moments(i, j) - w.means[i] * w.means[j];
        }
    }
    return w;
}

}  // namespace bellbound
