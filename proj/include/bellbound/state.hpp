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

#include <bit>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "jacobi.hpp"
#include "matrix.hpp"

namespace bellbound {

inline constexpr double kNormTol = 1e-12;
inline constexpr double kDensityEigenTol = 1e-10;
inline constexpr double kImagResidueTol = 1e-10;
inline constexpr int kMaxParties = 12;

enum class StateKind { pure, mixed };

/// A state on N qubits: either a normalized amplitude column or a density matrix.
class QuantumState {
   public:
    static QuantumState pure(std::vector<Complex> amplitudes) {
        const int n = parties_for_dim(amplitudes.size());
        double norm2 = 0.0;
        for (const auto &a : amplitudes) {
            norm2 += std::norm(a);
        }
        if (std::abs(norm2 - 1.0) > kNormTol) {
            throw InvariantViolation("pure state: squared norm " + std::to_string(norm2) + " != 1");
        }
        QuantumState s;
        s.kind_ = StateKind::pure;
        s.n_parties_ = n;
        s.amplitudes_ = std::move(amplitudes);
        return s;
    }

    /// Validates Hermiticity, unit trace and positivity (eigenvalues >= -1e-10).
    static QuantumState mixed(ComplexMatrix density) {
        const int n = parties_for_dim(density.dim());
        if (!density.is_hermitian(kNormTol)) {
            throw InvariantViolation("mixed state: density matrix is not Hermitian");
        }
        const Complex tr = density.trace();
        if (std::abs(tr - 1.0) > kNormTol) {
            throw InvariantViolation("mixed state: trace " + std::to_string(tr.real()) + " != 1");
        }
        const auto eig = hermitian_eigenvalues(density);
        if (eig.front() < -kDensityEigenTol) {
            throw InvariantViolation("mixed state: negative eigenvalue " + std::to_string(eig.front()));
        }
        return from_density_unchecked(n, std::move(density));
    }

    /// Convex combination of pure states; positivity holds by construction.
    static QuantumState mixture(std::span<const std::pair<double, QuantumState>> components) {
        if (components.empty()) {
            throw std::invalid_argument("mixture: no components");
        }
        const std::size_t d = components.front().second.dim();
        ComplexMatrix rho(d);
        double total = 0.0;
        for (const auto &[w, psi] : components) {
            if (!psi.is_pure() || psi.dim() != d) {
                throw std::invalid_argument("mixture: components must be pure states of equal dimension");
            }
            if (!(w >= 0.0)) {
                throw std::invalid_argument("mixture: negative weight");
            }
            total += w;
            const auto a = psi.amplitudes();
            for (std::size_t r = 0; r < d; ++r) {
                for (std::size_t c = 0; c < d; ++c) {
                    rho(r, c) += w * a[r] * std::conj(a[c]);
                }
            }
        }
        if (std::abs(total - 1.0) > kNormTol) {
            throw std::invalid_argument("mixture: weights sum to " + std::to_string(total));
        }
        return from_density_unchecked(components.front().second.n_parties(), std::move(rho));
    }

    [[nodiscard]] StateKind kind() const noexcept { return kind_; }
    [[nodiscard]] bool is_pure() const noexcept { return kind_ == StateKind::pure; }
    [[nodiscard]] int n_parties() const noexcept { return n_parties_; }
    [[nodiscard]] std::size_t dim() const noexcept { return std::size_t{1} << n_parties_; }

    /// Amplitudes of a pure state; empty for mixed states.
    [[nodiscard]] std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }

    /// Density matrix; computed as |psi><psi| for pure states.
    [[nodiscard]] ComplexMatrix density() const {
        if (!is_pure()) {
            return density_;
        }
        const std::size_t d = dim();
        ComplexMatrix rho(d);
        for (std::size_t r = 0; r < d; ++r) {
            for (std::size_t c = 0; c < d; ++c) {
                rho(r, c) = amplitudes_[r] * std::conj(amplitudes_[c]);
            }
        }
        return rho;
    }

   private:
    QuantumState() = default;

    static QuantumState from_density_unchecked(int n, ComplexMatrix density) {
        QuantumState s;
        s.kind_ = StateKind::mixed;
        s.n_parties_ = n;
        s.density_ = std::move(density);
        return s;
    }

    static int parties_for_dim(std::size_t d) {
        if (d < 2 || !std::has_single_bit(d)) {
            throw DimensionError("state dimension " + std::to_string(d) + " is not 2^N with N >= 1");
        }
        if (d > kMaxDim) {
            throw DimensionError("state dimension " + std::to_string(d) + " exceeds cap");
        }
        return std::countr_zero(d);
    }

    StateKind kind_ = StateKind::pure;
    int n_parties_ = 0;
    std::vector<Complex> amplitudes_;
    ComplexMatrix density_;
};

namespace detail {

inline double real_or_throw(Complex z, const char *what) {
    if (std::abs(z.imag()) > kImagResidueTol) {
        throw InvariantViolation(std::string(what) + ": imaginary part " + std::to_string(z.imag()) +
                                 " (operator not Hermitian?)");
    }
    return z.real();
}

inline void require_state_dim(const QuantumState &state, const ComplexMatrix &op, const char *what) {
    if (op.dim() != state.dim()) {
        throw DimensionError(std::string(what) + ": operator dim " + std::to_string(op.dim()) +
                             " vs state dim " + std::to_string(state.dim()));
    }
}

/// Tr(A B) without forming the product.
inline Complex trace_of_product(const ComplexMatrix &a, const ComplexMatrix &b) {
    const std::size_t d = a.dim();
    Complex acc{};
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            acc += a(r, c) * b(c, r);
        }
    }
    return acc;
}

}  // namespace detail

/// <psi|O|psi> for pure states, Tr(rho O) for mixed ones.
inline double expectation(const QuantumState &state, const ComplexMatrix &op) {
    detail::require_state_dim(state, op, "expectation");
    Complex value{};
    if (state.is_pure()) {
        const auto psi = state.amplitudes();
        const auto o_psi = op.apply(psi);
        for (std::size_t i = 0; i < psi.size(); ++i) {
            value += std::conj(psi[i]) * o_psi[i];
        }
    } else {
        value = detail::trace_of_product(state.density(), op);
    }
    return detail::real_or_throw(value, "expectation");
}

/// <R^dagger R>, computed as ||R psi||^2 or Tr(R rho R^dagger). Nonnegative up to
/// roundoff that scales with ||R||^2, so it stays accurate when R is nearly zero.
inline double second_moment(const QuantumState &state, const ComplexMatrix &r) {
    detail::require_state_dim(state, r, "second_moment");
    if (state.is_pure()) {
        double acc = 0.0;
        for (const auto &z : r.apply(state.amplitudes())) {
            acc += std::norm(z);
        }
        return acc;
    }
    const ComplexMatrix r_rho = r * state.density();
    const double value = detail::real_or_throw(detail::trace_of_product(r_rho, r.adjoint()), "second_moment");
    return std::max(0.0, value);
}

/// (|0...0> + |1...1>)/sqrt(2) on n qubits, 2 <= n <= 12.
inline QuantumState ghz_state(int n) {
    if (n < 2 || n > kMaxParties) {
        throw std::out_of_range("ghz_state: n = " + std::to_string(n) + " outside [2, 12]");
    }
    std::vector<Complex> amps(std::size_t{1} << n);
    amps.front() = M_SQRT1_2;
    amps.back() = M_SQRT1_2;
    return QuantumState::pure(std::move(amps));
}

/// Computational basis state |index> on n qubits.
inline QuantumState basis_state(int n, std::size_t index) {
    if (n < 1 || n > kMaxParties) {
        throw std::out_of_range("basis_state: n out of range");
    }
    std::vector<Complex> amps(std::size_t{1} << n);
    if (index >= amps.size()) {
        throw std::out_of_range("basis_state: index out of range");
    }
    amps[index] = 1.0;
    return QuantumState::pure(std::move(amps));
}

}  // namespace bellbound
