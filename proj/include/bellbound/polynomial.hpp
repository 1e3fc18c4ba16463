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
#include <cstdint>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dyadic.hpp"
#include "errors.hpp"
#include "matrix.hpp"
#include "observables.hpp"
#include "text.hpp"

namespace bellbound {

/// Setting tuple (i_1, ..., i_N) packed with party 1 in the most significant
/// of the N low bits, so numeric order equals lexicographic bitstring order.
using Settings = std::uint32_t;

enum class Parity { plus, minus };
enum class PolynomialLabel { svetlichny_plus, svetlichny_minus, mk, mk_primed, custom };

inline Parity opposite(Parity p) noexcept { return p == Parity::plus ? Parity::minus : Parity::plus; }
inline char parity_char(Parity p) noexcept { return p == Parity::plus ? '+' : '-'; }

/// Setting of `party` (1-based) within a packed tuple of n parties.
inline int setting_of(Settings s, int party, int n_parties) noexcept { return (s >> (n_parties - party)) & 1U; }

inline std::string settings_string(Settings s, int n_parties) {
    std::string out(static_cast<std::size_t>(n_parties), '0');
    for (int p = 1; p <= n_parties; ++p) {
        out[p - 1] = static_cast<char>('0' + setting_of(s, p, n_parties));
    }
    return out;
}

inline Settings parse_settings(std::string_view bits) {
    if (bits.empty() || bits.size() > static_cast<std::size_t>(kMaxParties)) {
        throw ParseError("settings '" + std::string(bits) + "': length must be in [1, 12]");
    }
    Settings s = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') {
            throw ParseError("settings '" + std::string(bits) + "': only 0/1 allowed");
        }
        s = (s << 1) | static_cast<Settings>(c - '0');
    }
    return s;
}

/// Signed sum of correlation terms, one per distinct setting tuple.
/// Coefficients are exact; zero terms never appear.
class BellPolynomial {
   public:
    using Terms = std::map<Settings, Dyadic>;

    explicit BellPolynomial(int n_parties, PolynomialLabel label = PolynomialLabel::custom)
        : n_parties_(n_parties), label_(label) {
        if (n_parties < 1 || n_parties > kMaxParties) {
            throw std::out_of_range("BellPolynomial: n_parties outside [1, 12]");
        }
    }

    /// Builds from (settings, coefficient) pairs, merging equal settings.
    static BellPolynomial from_terms(int n_parties, std::span<const std::pair<Settings, Dyadic>> terms,
                                     PolynomialLabel label = PolynomialLabel::custom) {
        BellPolynomial p(n_parties, label);
        for (const auto &[s, c] : terms) {
            p.accumulate(s, c);
        }
        return p;
    }

    [[nodiscard]] int n_parties() const noexcept { return n_parties_; }
    [[nodiscard]] PolynomialLabel label() const noexcept { return label_; }
    [[nodiscard]] const Terms &terms() const noexcept { return terms_; }
    [[nodiscard]] std::size_t size() const noexcept { return terms_.size(); }

    [[nodiscard]] Dyadic coefficient(Settings s) const {
        const auto it = terms_.find(s);
        return it == terms_.end() ? Dyadic{} : it->second;
    }

    [[nodiscard]] bool all_unit_coefficients() const {
        return std::all_of(terms_.begin(), terms_.end(), [](const auto &t) { return t.second.is_unit(); });
    }

    [[nodiscard]] BellPolynomial scaled(Dyadic factor, PolynomialLabel label) const {
        BellPolynomial out(n_parties_, label);
        for (const auto &[s, c] : terms_) {
            out.accumulate(s, c * factor);
        }
        return out;
    }

    [[nodiscard]] BellPolynomial negated() const { return scaled(Dyadic(-1), PolynomialLabel::custom); }

    /// Appends party N+1 with the given setting: terms become (settings, bit).
    [[nodiscard]] BellPolynomial extended(int bit, Dyadic factor) const {
        BellPolynomial out(n_parties_ + 1);
        for (const auto &[s, c] : terms_) {
            out.accumulate((s << 1) | static_cast<Settings>(bit), c * factor);
        }
        return out;
    }

    BellPolynomial &operator+=(const BellPolynomial &rhs) {
        if (rhs.n_parties_ != n_parties_) {
            throw std::invalid_argument("BellPolynomial +=: party count mismatch");
        }
        for (const auto &[s, c] : rhs.terms_) {
            accumulate(s, c);
        }
        label_ = PolynomialLabel::custom;
        return *this;
    }

    [[nodiscard]] BellPolynomial with_label(PolynomialLabel label) const {
        BellPolynomial out = *this;
        out.label_ = label;
        return out;
    }

    /// Term-for-term equality; labels are ignored.
    friend bool operator==(const BellPolynomial &a, const BellPolynomial &b) {
        return a.n_parties_ == b.n_parties_ && a.terms_ == b.terms_;
    }

   private:
    void accumulate(Settings s, Dyadic c) {
        if (n_parties_ < 32 && (s >> n_parties_) != 0) {
            throw std::out_of_range("BellPolynomial: settings tuple wider than party count");
        }
        if (c.is_zero()) {
            return;
        }
        auto [it, inserted] = terms_.try_emplace(s, c);
        if (!inserted) {
            it->second = it->second + c;
            if (it->second.is_zero()) {
                terms_.erase(it);
            }
        }
    }

    int n_parties_;
    PolynomialLabel label_;
    Terms terms_;
};

/// Exchanges setting labels 0 <-> 1 at every party; coefficients unchanged.
inline BellPolynomial relabel(const BellPolynomial &p) {
    const int n = p.n_parties();
    const Settings mask = (Settings{1} << n) - 1;
    std::vector<std::pair<Settings, Dyadic>> flipped;
    flipped.reserve(p.size());
    for (const auto &[s, c] : p.terms()) {
        flipped.emplace_back(s ^ mask, c);
    }
    PolynomialLabel label = PolynomialLabel::custom;
    if (p.label() == PolynomialLabel::mk) {
        label = PolynomialLabel::mk_primed;
    } else if (p.label() == PolynomialLabel::mk_primed) {
        label = PolynomialLabel::mk;
    }
    return BellPolynomial::from_terms(n, flipped, label);
}

/// The CHSH expression A0B0 + A0B1 + A1B0 - A1B1.
inline BellPolynomial chsh() {
    const std::pair<Settings, Dyadic> terms[] = {{0b00, 1}, {0b01, 1}, {0b10, 1}, {0b11, -1}};
    return BellPolynomial::from_terms(2, terms, PolynomialLabel::svetlichny_minus);
}

/// Svetlichny operator S_n^parity.
///
/// S_2^- is CHSH and S_2^+ = -(S_2^-)'. Higher orders follow
/// S_n^(+-) = S_{n-1}^(+-) A_0^(n) -+ S_{n-1}^(-+) A_1^(n).
///
/// The base case S_2^+ = -(S_2^-)' is the sign choice for which the
/// planar GHZ settings (-pi/4, 0, 0) / (pi/4, pi/2, pi/2) give the
/// value 4 sqrt(2) for S_3^-; the alternative S_2^+ = (S_2^-)' does not.
inline BellPolynomial svetlichny(int n, Parity parity) {
    if (n < 2 || n > kMaxParties) {
        throw std::out_of_range("svetlichny: n = " + std::to_string(n) + " outside [2, 12]");
    }
    BellPolynomial minus = chsh();
    BellPolynomial plus = relabel(minus).negated();
    for (int k = 3; k <= n; ++k) {
        // S^+ = S^+ A0 - S^- A1,  S^- = S^- A0 + S^+ A1
        BellPolynomial next_plus = plus.extended(0, 1);
        next_plus += minus.extended(1, -1);
        BellPolynomial next_minus = minus.extended(0, 1);
        next_minus += plus.extended(1, 1);
        plus = std::move(next_plus);
        minus = std::move(next_minus);
    }
    return parity == Parity::plus ? plus.with_label(PolynomialLabel::svetlichny_plus)
                                  : minus.with_label(PolynomialLabel::svetlichny_minus);
}

/// Mermin-Klyshko operator M_n normalized to unit coefficients.
///
/// Runs M_1 = A_0, M_n = M_{n-1}(A_0 + A_1)/2 + M'_{n-1}(A_0 - A_1)/2 exactly,
/// then multiplies by 2^floor(n/2). Odd n keeps 2^(n-1) terms, even n 2^n.
inline BellPolynomial mk(int n) {
    if (n < 1 || n > kMaxParties) {
        throw std::out_of_range("mk: n = " + std::to_string(n) + " outside [1, 12]");
    }
    const Dyadic half(1, 1);
    const std::pair<Settings, Dyadic> base[] = {{0, 1}};
    BellPolynomial m = BellPolynomial::from_terms(1, base);
    for (int k = 2; k <= n; ++k) {
        const BellPolynomial primed = relabel(m);
        BellPolynomial next = m.extended(0, half);
        next += m.extended(1, half);
        next += primed.extended(0, half);
        next += primed.extended(1, -half);
        m = std::move(next);
    }
    BellPolynomial normalized = m.scaled(Dyadic(1).times_pow2(n / 2), PolynomialLabel::mk);
    if (!normalized.all_unit_coefficients()) {
        throw InvariantViolation("mk: normalized coefficients are not all +-1");
    }
    return normalized;
}

namespace detail {

// Sum_t c_t (x)_k A^{(k)}_{t_k} built by peeling off the last party:
// R = R_0 (x) A_0^(N) + R_1 (x) A_1^(N).
inline ComplexMatrix realize_terms(std::span<const std::pair<Settings, double>> terms, int n,
                                   const MeasurementScenario &sc) {
    if (n == 1) {
        ComplexMatrix out(sc.local(1, 0).dim());
        for (const auto &[s, c] : terms) {
            out.add_scaled(sc.local(1, static_cast<int>(s & 1U)), c);
        }
        return out;
    }
    std::vector<std::pair<Settings, double>> split[2];
    for (const auto &[s, c] : terms) {
        split[s & 1U].emplace_back(s >> 1, c);
    }
    std::optional<ComplexMatrix> out;
    for (int bit = 0; bit < 2; ++bit) {
        if (split[bit].empty()) {
            continue;
        }
        ComplexMatrix part = tensor_product(realize_terms(split[bit], n - 1, sc), sc.local(n, bit));
        if (out) {
            *out += part;
        } else {
            out = std::move(part);
        }
    }
    return out ? std::move(*out) : ComplexMatrix(sc.dim());
}

}  // namespace detail

/// The operator sum_t c_t A^{(1)}_{t_1} ... A^{(N)}_{t_N} on the full space.
inline ComplexMatrix realize(const BellPolynomial &p, const MeasurementScenario &sc) {
    if (p.n_parties() != sc.n_parties()) {
        throw std::invalid_argument("realize: polynomial has " + std::to_string(p.n_parties()) +
                                    " parties, scenario has " + std::to_string(sc.n_parties()));
    }
    if (sc.dim() > kMaxDim) {
        throw DimensionError("realize: scenario dimension exceeds cap");
    }
    std::vector<std::pair<Settings, double>> terms;
    terms.reserve(p.size());
    for (const auto &[s, c] : p.terms()) {
        terms.emplace_back(s, c.to_double());
    }
    ComplexMatrix out = detail::realize_terms(terms, p.n_parties(), sc);
    if (!out.is_hermitian(1e-12)) {
        throw InvariantViolation("realize: result is not Hermitian");
    }
    return out;
}

/// mk(n) = sign * svetlichny(n, parity), plus the relation
/// svetlichny(n, +) = relabel_sign * relabel(svetlichny(n, -)).
struct EvenEquivalence {
    Parity parity;
    int sign;
    int relabel_sign;
};

inline EvenEquivalence check_equivalence_even(int n) {
    if (n < 2 || n > 10 || n % 2 != 0) {
        throw std::out_of_range("check_equivalence_even: n must be even in [2, 10]");
    }
    const BellPolynomial m = mk(n);
    const BellPolynomial plus = svetlichny(n, Parity::plus);
    const BellPolynomial minus = svetlichny(n, Parity::minus);
    const BellPolynomial minus_primed = relabel(minus);

    int relabel_sign = 0;
    if (plus == minus_primed) {
        relabel_sign = 1;
    } else if (plus == minus_primed.negated()) {
        relabel_sign = -1;
    } else {
        throw InvariantViolation("check_equivalence_even: S+ and (S-)' are not related by a sign");
    }
    for (Parity parity : {Parity::plus, Parity::minus}) {
        const BellPolynomial &s = parity == Parity::plus ? plus : minus;
        if (m == s) {
            return {parity, 1, relabel_sign};
        }
        if (m == s.negated()) {
            return {parity, -1, relabel_sign};
        }
    }
    throw InvariantViolation("check_equivalence_even: no Svetlichny operator matches mk(" + std::to_string(n) + ")");
}

/// Applies a slot permutation: party k's setting moves to party perm[k-1]+1.
inline BellPolynomial permute_parties(const BellPolynomial &p, std::span<const int> perm) {
    const int n = p.n_parties();
    if (perm.size() != static_cast<std::size_t>(n)) {
        throw std::invalid_argument("permute_parties: permutation length mismatch");
    }
    std::vector<bool> hit(perm.size(), false);
    for (int target : perm) {
        if (target < 0 || target >= n || hit[target]) {
            throw std::invalid_argument("permute_parties: not a permutation of 0..N-1");
        }
        hit[target] = true;
    }
    std::vector<std::pair<Settings, Dyadic>> moved;
    moved.reserve(p.size());
    for (const auto &[s, c] : p.terms()) {
        Settings t = 0;
        for (int k = 1; k <= n; ++k) {
            if (setting_of(s, k, n) != 0) {
                t |= Settings{1} << (n - (perm[k - 1] + 1));
            }
        }
        moved.emplace_back(t, c);
    }
    return BellPolynomial::from_terms(n, moved);
}

/// Exhaustive over all N! slot permutations for N <= 6, otherwise 100 random
/// permutations from a fixed seed.
inline bool is_permutation_invariant(const BellPolynomial &p) {
    const int n = p.n_parties();
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    if (n <= 6) {
        do {
            if (!(permute_parties(p, perm) == p)) {
                return false;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        return true;
    }
    std::mt19937_64 rng(0x5eed);
    for (int trial = 0; trial < 100; ++trial) {
        for (int i = n - 1; i > 0; --i) {
            const auto j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
            std::swap(perm[i], perm[j]);
        }
        if (!(permute_parties(p, perm) == p)) {
            return false;
        }
    }
    return true;
}

// Fixture format: one term per line, "<coefficient> <bits>", e.g. "+1 011"
// or "-1 111", sorted by bitstring. Non-unit coefficients are written as
// "+3/4".

inline void dump_polynomial(std::ostream &out, const BellPolynomial &p) {
    for (const auto &[s, c] : p.terms()) {
        out << (c.numerator() > 0 ? "+" : "") << c.to_string() << ' ' << settings_string(s, p.n_parties()) << '\n';
    }
}

inline BellPolynomial parse_polynomial(std::istream &in) {
    std::string line;
    std::vector<std::pair<Settings, Dyadic>> terms;
    std::optional<std::size_t> width;
    std::map<Settings, bool> seen;
    while (next_content_line(in, line)) {
        const auto tok = split_whitespace(line);
        if (tok.size() != 2) {
            throw ParseError("polynomial: expected '<coefficient> <bits>', got '" + line + "'");
        }
        if (width && tok[1].size() != *width) {
            throw ParseError("polynomial: inconsistent party count in '" + line + "'");
        }
        width = tok[1].size();
        const Settings s = parse_settings(tok[1]);
        if (!seen.emplace(s, true).second) {
            throw ParseError("polynomial: duplicate settings " + tok[1]);
        }
        const Dyadic c = Dyadic::parse(tok[0]);
        if (c.is_zero()) {
            throw ParseError("polynomial: zero coefficient in '" + line + "'");
        }
        terms.emplace_back(s, c);
    }
    if (!width) {
        throw ParseError("polynomial: no terms");
    }
    return BellPolynomial::from_terms(static_cast<int>(*width), terms);
}

}  // namespace bellbound
