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
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace bellbound {

using Complex = std::complex<double>;

/// Largest operator dimension any construction may produce (12 qubits).
inline constexpr std::size_t kMaxDim = std::size_t{1} << 12;

/// Dense square complex matrix, row-major.
class ComplexMatrix {
   public:
    ComplexMatrix() : ComplexMatrix(1) {}

    /// Zero matrix of the given dimension.
    explicit ComplexMatrix(std::size_t dim) : dim_(dim) {
        check_dim(dim);
        entries_.assign(dim * dim, Complex{});
    }

    ComplexMatrix(std::size_t dim, std::vector<Complex> entries) : dim_(dim), entries_(std::move(entries)) {
        check_dim(dim);
        if (entries_.size() != dim * dim) {
            throw DimensionError("ComplexMatrix: expected " + std::to_string(dim * dim) + " entries, got " +
                                 std::to_string(entries_.size()));
        }
    }

    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) : dim_(rows.size()) {
        check_dim(dim_);
        entries_.reserve(dim_ * dim_);
        for (const auto &row : rows) {
            if (row.size() != dim_) {
                throw DimensionError("ComplexMatrix: ragged initializer");
            }
            entries_.insert(entries_.end(), row.begin(), row.end());
        }
    }

    static ComplexMatrix identity(std::size_t dim) {
        ComplexMatrix m(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            m(i, i) = 1.0;
        }
        return m;
    }

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }

    Complex &operator()(std::size_t row, std::size_t col) noexcept { return entries_[row * dim_ + col]; }
    const Complex &operator()(std::size_t row, std::size_t col) const noexcept {
        return entries_[row * dim_ + col];
    }

    [[nodiscard]] std::span<const Complex> entries() const noexcept { return entries_; }

    [[nodiscard]] ComplexMatrix adjoint() const {
        ComplexMatrix out(dim_);
        for (std::size_t r = 0; r < dim_; ++r) {
            for (std::size_t c = 0; c < dim_; ++c) {
                out(c, r) = std::conj((*this)(r, c));
            }
        }
        return out;
    }

    [[nodiscard]] Complex trace() const noexcept {
        Complex t{};
        for (std::size_t i = 0; i < dim_; ++i) {
            t += (*this)(i, i);
        }
        return t;
    }

    /// Largest entry magnitude.
    [[nodiscard]] double max_abs() const noexcept {
        double m = 0.0;
        for (const auto &z : entries_) {
            m = std::max(m, std::abs(z));
        }
        return m;
    }

    [[nodiscard]] bool is_hermitian(double tol = 1e-12) const noexcept { return hermitian_residual() <= tol; }

    /// max_ij |M_ij - conj(M_ji)|
    [[nodiscard]] double hermitian_residual() const noexcept {
        double worst = 0.0;
        for (std::size_t r = 0; r < dim_; ++r) {
            for (std::size_t c = r; c < dim_; ++c) {
                worst = std::max(worst, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
            }
        }
        return worst;
    }

    ComplexMatrix &operator+=(const ComplexMatrix &rhs) {
        require_same_dim(rhs, "+=");
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            entries_[i] += rhs.entries_[i];
        }
        return *this;
    }

    ComplexMatrix &operator-=(const ComplexMatrix &rhs) {
        require_same_dim(rhs, "-=");
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            entries_[i] -= rhs.entries_[i];
        }
        return *this;
    }

    ComplexMatrix &operator*=(Complex s) noexcept {
        for (auto &z : entries_) {
            z *= s;
        }
        return *this;
    }

    /// this += s * rhs
    ComplexMatrix &add_scaled(const ComplexMatrix &rhs, Complex s) {
        require_same_dim(rhs, "add_scaled");
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            entries_[i] += s * rhs.entries_[i];
        }
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix &rhs) { return lhs += rhs; }
    friend ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix &rhs) { return lhs -= rhs; }
    friend ComplexMatrix operator*(ComplexMatrix lhs, Complex s) { return lhs *= s; }
    friend ComplexMatrix operator*(Complex s, ComplexMatrix rhs) { return rhs *= s; }
    friend ComplexMatrix operator-(ComplexMatrix m) { return m *= -1.0; }

    friend ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b) {
        a.require_same_dim(b, "*");
        const std::size_t n = a.dim_;
        ComplexMatrix out(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < n; ++k) {
                const Complex aik = a(i, k);
                if (aik == Complex{}) {
                    continue;
                }
                const Complex *brow = &b.entries_[k * n];
                Complex *orow = &out.entries_[i * n];
                for (std::size_t j = 0; j < n; ++j) {
                    orow[j] += aik * brow[j];
                }
            }
        }
        return out;
    }

    /// Matrix-vector product.
    [[nodiscard]] std::vector<Complex> apply(std::span<const Complex> v) const {
        if (v.size() != dim_) {
            throw DimensionError("ComplexMatrix::apply: vector length " + std::to_string(v.size()) +
                                 " vs dim " + std::to_string(dim_));
        }
        std::vector<Complex> out(dim_);
        for (std::size_t r = 0; r < dim_; ++r) {
            Complex acc{};
            const Complex *row = &entries_[r * dim_];
            for (std::size_t c = 0; c < dim_; ++c) {
                acc += row[c] * v[c];
            }
            out[r] = acc;
        }
        return out;
    }

    friend bool operator==(const ComplexMatrix &, const ComplexMatrix &) = default;

   private:
    static void check_dim(std::size_t dim) {
        if (dim == 0) {
            throw DimensionError("ComplexMatrix: dimension must be >= 1");
        }
        if (dim > kMaxDim) {
            throw DimensionError("ComplexMatrix: dimension " + std::to_string(dim) + " exceeds cap " +
                                 std::to_string(kMaxDim));
        }
    }

    void require_same_dim(const ComplexMatrix &other, const char *op) const {
        if (other.dim_ != dim_) {
            throw DimensionError(std::string("ComplexMatrix ") + op + ": dimension mismatch " +
                                 std::to_string(dim_) + " vs " + std::to_string(other.dim_));
        }
    }

    std::size_t dim_;
    std::vector<Complex> entries_;
};

/// max_ij |A_ij - B_ij|
inline double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.dim() != b.dim()) {
        throw DimensionError("max_abs_diff: dimension mismatch");
    }
    double worst = 0.0;
    auto ea = a.entries();
    auto eb = b.entries();
    for (std::size_t i = 0; i < ea.size(); ++i) {
        worst = std::max(worst, std::abs(ea[i] - eb[i]));
    }
    return worst;
}

/// Kronecker product A (x) B.
inline ComplexMatrix tensor_product(const ComplexMatrix &a, const ComplexMatrix &b) {
    const std::size_t da = a.dim();
    const std::size_t db = b.dim();
    if (da * db > kMaxDim) {
        throw DimensionError("tensor_product: result dimension " + std::to_string(da * db) + " exceeds cap " +
                             std::to_string(kMaxDim));
    }
    const std::size_t d = da * db;
    std::vector<Complex> out(d * d);
    for (std::size_t ar = 0; ar < da; ++ar) {
        for (std::size_t ac = 0; ac < da; ++ac) {
            const Complex s = a(ar, ac);
            if (s == Complex{}) {
                continue;
            }
            for (std::size_t br = 0; br < db; ++br) {
                Complex *row = &out[(ar * db + br) * d + ac * db];
                for (std::size_t bc = 0; bc < db; ++bc) {
                    row[bc] = s * b(br, bc);
                }
            }
        }
    }
    return ComplexMatrix(d, std::move(out));
}

/// AB + BA
inline ComplexMatrix anticommutator(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.dim() != b.dim()) {
        throw DimensionError("anticommutator: dimension mismatch");
    }
    return a * b + b * a;
}

/// AB - BA
inline ComplexMatrix commutator(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.dim() != b.dim()) {
        throw DimensionError("commutator: dimension mismatch");
    }
    return a * b - b * a;
}

inline ComplexMatrix pauli_x() { return ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}}; }
inline ComplexMatrix pauli_y() { return ComplexMatrix{{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}}; }
inline ComplexMatrix pauli_z() { return ComplexMatrix{{1.0, 0.0}, {0.0, -1.0}}; }

/// Dense real square matrix; used for covariance matrices.
class RealMatrix {
   public:
    explicit RealMatrix(std::size_t n = 0) : n_(n), entries_(n * n, 0.0) {}

    RealMatrix(std::initializer_list<std::initializer_list<double>> rows) : n_(rows.size()) {
        entries_.reserve(n_ * n_);
        for (const auto &row : rows) {
            if (row.size() != n_) {
                throw DimensionError("RealMatrix: ragged initializer");
            }
            entries_.insert(entries_.end(), row.begin(), row.end());
        }
    }

    static RealMatrix identity(std::size_t n) {
        RealMatrix m(n);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = 1.0;
        }
        return m;
    }

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    double &operator()(std::size_t r, std::size_t c) noexcept { return entries_[r * n_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return entries_[r * n_ + c]; }

    [[nodiscard]] double symmetry_residual() const noexcept {
        double worst = 0.0;
        for (std::size_t r = 0; r < n_; ++r) {
            for (std::size_t c = r + 1; c < n_; ++c) {
                worst = std::max(worst, std::abs((*this)(r, c) - (*this)(c, r)));
            }
        }
        return worst;
    }

    [[nodiscard]] bool is_symmetric(double tol = 1e-12) const noexcept { return symmetry_residual() <= tol; }

    friend bool operator==(const RealMatrix &, const RealMatrix &) = default;

   private:
    std::size_t n_;
    std::vector<double> entries_;
};

}  // namespace bellbound
