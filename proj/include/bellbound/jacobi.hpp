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

#include <algorithm>
#include <cmath>
#include <vector>

#include "errors.hpp"
#include "matrix.hpp"

namespace bellbound {

/// Off-diagonal Frobenius norm at which the Jacobi sweep stops.
inline constexpr double kJacobiOffDiagonalTol = 1e-13;

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations,
/// returned in ascending order. The stopping threshold is scaled by
/// max(1, ||H||_F) so large-norm inputs still terminate.
inline std::vector<double> symmetric_eigenvalues(RealMatrix a) {
    const std::size_t n = a.size();
    if (!a.is_symmetric()) {
        throw std::invalid_argument("symmetric_eigenvalues: input is not symmetric");
    }
    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = 0; q < n; ++q) {
                if (p != q) {
                    s += a(p, q) * a(p, q);
                }
            }
        }
        return std::sqrt(s);
    };
    double frob = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = 0; q < n; ++q) {
            frob += a(p, q) * a(p, q);
        }
    }
    const double threshold = kJacobiOffDiagonalTol * std::max(1.0, std::sqrt(frob));

    constexpr int kMaxSweeps = 100;
    for (int sweep = 0; sweep < kMaxSweeps && off_norm() > threshold; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) {
                    continue;
                }
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) {
        eig[i] = a(i, i);
    }
    std::sort(eig.begin(), eig.end());
    return eig;
}

/// Eigenvalues of a complex Hermitian matrix via the real embedding
/// [[Re, -Im], [Im, Re]], whose spectrum is that of H with each value doubled.
inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix &h) {
    if (!h.is_hermitian()) {
        throw std::invalid_argument("hermitian_eigenvalues: input is not Hermitian");
    }
    const std::size_t d = h.dim();
    RealMatrix real(2 * d);
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            // Symmetrize so roundoff in the input cannot trip the symmetry check.
            const Complex z = 0.5 * (h(r, c) + std::conj(h(c, r)));
            real(r, c) = z.real();
            real(r + d, c + d) = z.real();
            real(r, c + d) = -z.imag();
            real(r + d, c) = z.imag();
        }
    }
    auto doubled = symmetric_eigenvalues(std::move(real));
    std::vector<double> eig(d);
    for (std::size_t i = 0; i < d; ++i) {
        eig[i] = 0.5 * (doubled[2 * i] + doubled[2 * i + 1]);
    }
    return eig;
}

/// True iff min eigenvalue >= -tol * max(1, ||H||_2).
inline bool is_psd(const RealMatrix &h, double tol) {
    if (!h.is_symmetric()) {
        throw std::invalid_argument("is_psd: input is not symmetric");
    }
    if (h.size() == 0) {
        return true;
    }
    const auto eig = symmetric_eigenvalues(h);
    const double spectral = std::max(std::abs(eig.front()), std::abs(eig.back()));
    return eig.front() >= -tol * std::max(1.0, spectral);
}

}  // namespace bellbound
