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

#include <compare>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

#include "errors.hpp"
#include "text.hpp"

namespace bellbound {

/// Exact rational numerator / 2^exponent, kept reduced (numerator odd or
/// exponent zero). Negative exponents are folded into the numerator.
class Dyadic {
   public:
    constexpr Dyadic() = default;
    constexpr Dyadic(std::int64_t numerator, int exponent = 0) : num_(numerator), exp_(exponent) { normalize(); }

    [[nodiscard]] constexpr std::int64_t numerator() const noexcept { return num_; }
    [[nodiscard]] constexpr int exponent() const noexcept { return exp_; }
    [[nodiscard]] constexpr std::int64_t denominator() const noexcept { return std::int64_t{1} << exp_; }
    [[nodiscard]] constexpr bool is_zero() const noexcept { return num_ == 0; }
    [[nodiscard]] constexpr bool is_unit() const noexcept { return exp_ == 0 && (num_ == 1 || num_ == -1); }

    [[nodiscard]] double to_double() const noexcept {
        return static_cast<double>(num_) / static_cast<double>(denominator());
    }

    /// this * 2^k
    [[nodiscard]] constexpr Dyadic times_pow2(int k) const { return Dyadic(num_, exp_ - k); }

    constexpr Dyadic operator-() const { return Dyadic(-num_, exp_); }

    friend constexpr Dyadic operator+(Dyadic a, Dyadic b) {
        const int e = a.exp_ > b.exp_ ? a.exp_ : b.exp_;
        return Dyadic(shift(a.num_, e - a.exp_) + shift(b.num_, e - b.exp_), e);
    }
    friend constexpr Dyadic operator-(Dyadic a, Dyadic b) { return a + (-b); }
    friend constexpr Dyadic operator*(Dyadic a, Dyadic b) { return Dyadic(a.num_ * b.num_, a.exp_ + b.exp_); }

    friend constexpr bool operator==(Dyadic, Dyadic) = default;

    /// "1", "-1", "3/4", "-1/2"
    [[nodiscard]] std::string to_string() const {
        std::string s = std::to_string(num_);
        if (exp_ > 0) {
            s += "/" + std::to_string(denominator());
        }
        return s;
    }

    /// Inverse of to_string; a leading '+' is accepted.
    static Dyadic parse(std::string_view text) {
        const auto slash = text.find('/');
        const std::int64_t num = parse_integer(text.substr(0, slash));
        if (slash == std::string_view::npos) {
            return Dyadic(num);
        }
        const std::int64_t den = parse_integer(text.substr(slash + 1));
        if (den <= 0 || (den & (den - 1)) != 0) {
            throw ParseError("dyadic coefficient '" + std::string(text) + "': denominator is not a power of two");
        }
        int e = 0;
        while ((std::int64_t{1} << e) != den) {
            ++e;
        }
        return Dyadic(num, e);
    }

   private:
    static constexpr std::int64_t shift(std::int64_t v, int k) {
        if (k >= 62 || (v != 0 && (v > (std::numeric_limits<std::int64_t>::max() >> k) ||
                                   v < (std::numeric_limits<std::int64_t>::min() >> k)))) {
            throw std::overflow_error("Dyadic: overflow");
        }
        return v * (std::int64_t{1} << k);
    }

    constexpr void normalize() {
        if (num_ == 0) {
            exp_ = 0;
            return;
        }
        while (exp_ > 0 && num_ % 2 == 0) {
            num_ /= 2;
            --exp_;
        }
        if (exp_ < 0) {
            num_ = shift(num_, -exp_);
            exp_ = 0;
        }
        if (exp_ >= 62) {
            throw std::overflow_error("Dyadic: exponent too large");
        }
    }

    std::int64_t num_ = 0;
    int exp_ = 0;
};

}  // namespace bellbound
