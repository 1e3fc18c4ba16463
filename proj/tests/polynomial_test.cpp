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

#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bellbound/polynomial.hpp"
#include "bellbound/random.hpp"
#include "gtest/gtest.h"
#include "oracles.hpp"

using namespace bellbound;

namespace {

constexpr double kPi = std::numbers::pi;

BellPolynomial terms_of(int n, std::initializer_list<std::pair<const char *, int>> list) {
    std::vector<std::pair<Settings, Dyadic>> terms;
    for (const auto &[bits, c] : list) {
        terms.emplace_back(parse_settings(bits), Dyadic(c));
    }
    return BellPolynomial::from_terms(n, terms);
}

std::string dump(const BellPolynomial &p) {
    std::ostringstream out;
    dump_polynomial(out, p);
    return out.str();
}

/// Sum of coeff * <GHZ| prod A |GHZ> using the cos-sum identity.
double ghz_value_oracle(const BellPolynomial &p, const std::vector<double> &t0, const std::vector<double> &t1) {
    const int n = p.n_parties();
    double v = 0.0;
    for (const auto &[s, c] : p.terms()) {
        std::vector<double> angles;
        for (int party = 1; party <= n; ++party) {
            angles.push_back(setting_of(s, party, n) ? t1[party - 1] : t0[party - 1]);
        }
        v += c.to_double() * oracle::ghz_planar_correlator(angles);
    }
    return v;
}

}  // namespace

TEST(Dyadic, ArithmeticAndFormatting) {
    const Dyadic half(1, 1);
    EXPECT_EQ(half.to_string(), "1/2");
    EXPECT_EQ((half + half).to_string(), "1");
    EXPECT_TRUE((half + half).is_unit());
    EXPECT_TRUE((half - half).is_zero());
    EXPECT_EQ((Dyadic(3, 2) * Dyadic(-2)).to_string(), "-3/2");
    EXPECT_EQ(Dyadic(6, 3), Dyadic(3, 2));
    EXPECT_EQ(Dyadic(1, 2).times_pow2(2), Dyadic(1));
    EXPECT_DOUBLE_EQ(Dyadic(3, 2).to_double(), 0.75);
    EXPECT_EQ(Dyadic::parse("+3/4"), Dyadic(3, 2));
    EXPECT_EQ(Dyadic::parse("-1"), Dyadic(-1));
    EXPECT_THROW(Dyadic::parse("1/3"), ParseError);
    EXPECT_THROW(Dyadic::parse("x"), ParseError);
}

TEST(Settings, BitOrderIsPartyOrder) {
    EXPECT_EQ(parse_settings("011"), 0b011U);
    EXPECT_EQ(settings_string(0b001, 3), "001");
    EXPECT_EQ(setting_of(0b100, 1, 3), 1);
    EXPECT_EQ(setting_of(0b100, 3, 3), 0);
    EXPECT_THROW(parse_settings("012"), ParseError);
    EXPECT_THROW(parse_settings(""), ParseError);
}

TEST(Svetlichny, TwoPartyMinusIsChsh) {
    EXPECT_EQ(svetlichny(2, Parity::minus), terms_of(2, {{"00", 1}, {"01", 1}, {"10", 1}, {"11", -1}}));
    EXPECT_EQ(svetlichny(2, Parity::minus), chsh());
}

TEST(Svetlichny, TwoPartyPlusIsNegatedRelabel) {
    EXPECT_EQ(svetlichny(2, Parity::plus), relabel(svetlichny(2, Parity::minus)).negated());
    EXPECT_EQ(svetlichny(2, Parity::plus), terms_of(2, {{"00", 1}, {"01", -1}, {"10", -1}, {"11", -1}}));
}

TEST(Svetlichny, ThreePartyMinusTermSet) {
    EXPECT_EQ(svetlichny(3, Parity::minus), terms_of(3, {{"000", 1},
                                                         {"010", 1},
                                                         {"100", 1},
                                                         {"110", -1},
                                                         {"001", 1},
                                                         {"011", -1},
                                                         {"101", -1},
                                                         {"111", -1}}));
}

TEST(Svetlichny, MatchesGeneratingIdentityOracle) {
    for (int n = 2; n <= 12; ++n) {
        for (Parity parity : {Parity::plus, Parity::minus}) {
            const auto p = svetlichny(n, parity);
            ASSERT_EQ(p.size(), std::size_t{1} << n) << n;
            for (Settings s = 0; s < (Settings{1} << n); ++s) {
                EXPECT_EQ(p.coefficient(s), Dyadic(oracle::svetlichny_coefficient(parity == Parity::plus, std::popcount(s))))
                    << "n=" << n << " s=" << settings_string(s, n);
            }
        }
    }
}

TEST(Svetlichny, FivePartiesHave32UnitTerms) {
    for (Parity parity : {Parity::plus, Parity::minus}) {
        const auto p = svetlichny(5, parity);
        EXPECT_EQ(p.size(), 32U);
        EXPECT_TRUE(p.all_unit_coefficients());
    }
}

TEST(Svetlichny, RejectsOutOfRange) {
    EXPECT_THROW(svetlichny(1, Parity::minus), std::out_of_range);
    EXPECT_THROW(svetlichny(13, Parity::plus), std::out_of_range);
}

TEST(Mk, ThreePartyTermSet) {
    EXPECT_EQ(mk(3), terms_of(3, {{"001", 1}, {"010", 1}, {"100", 1}, {"111", -1}}));
    EXPECT_EQ(mk(3).label(), PolynomialLabel::mk);
}

TEST(Mk, TwoPartyIsChsh) { EXPECT_EQ(mk(2), terms_of(2, {{"00", 1}, {"01", 1}, {"10", 1}, {"11", -1}})); }

TEST(Mk, OnePartyIsFirstSetting) { EXPECT_EQ(mk(1), terms_of(1, {{"0", 1}})); }

TEST(Mk, MatchesGeneratingIdentityOracle) {
    for (int n = 1; n <= 12; ++n) {
        const auto p = mk(n);
        std::size_t nonzero = 0;
        for (Settings s = 0; s < (Settings{1} << n); ++s) {
            const int expected = oracle::mk_coefficient(n, std::popcount(s));
            nonzero += expected != 0;
            EXPECT_EQ(p.coefficient(s), Dyadic(expected)) << "n=" << n << " s=" << settings_string(s, n);
        }
        EXPECT_EQ(p.size(), nonzero);
    }
}

TEST(Mk, TermCounts) {
    for (int n = 2; n <= 10; ++n) {
        const auto p = mk(n);
        EXPECT_EQ(p.size(), std::size_t{1} << (n % 2 ? n - 1 : n)) << n;
        EXPECT_TRUE(p.all_unit_coefficients());
    }
    EXPECT_EQ(mk(5).size(), 16U);
    EXPECT_THROW(mk(0), std::out_of_range);
    EXPECT_THROW(mk(13), std::out_of_range);
}

TEST(Relabel, FlipsEveryBit) {
    const auto p = terms_of(3, {{"010", 1}});
    EXPECT_EQ(relabel(p), terms_of(3, {{"101", 1}}));
    EXPECT_EQ(relabel(mk(3)), terms_of(3, {{"110", 1}, {"101", 1}, {"011", 1}, {"000", -1}}));
    EXPECT_EQ(relabel(mk(3)).label(), PolynomialLabel::mk_primed);
    for (int n = 2; n <= 6; ++n) {
        EXPECT_EQ(relabel(relabel(svetlichny(n, Parity::minus))), svetlichny(n, Parity::minus));
        EXPECT_EQ(relabel(relabel(mk(n))), mk(n));
    }
}

TEST(Realize, TsirelsonSaturationOnGhz3) {
    const std::vector<double> t0{-kPi / 4, 0, 0};
    const std::vector<double> t1{kPi / 4, kPi / 2, kPi / 2};
    const auto sc = MeasurementScenario::planar(t0, t1);
    const double v = expectation(ghz_state(3), realize(svetlichny(3, Parity::minus), sc));
    EXPECT_NEAR(v, 4 * std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(v, ghz_value_oracle(svetlichny(3, Parity::minus), t0, t1), 1e-12);
}

TEST(Realize, MkFigureThreeCurve) {
    Rng rng(201);
    for (int trial = 0; trial < 50; ++trial) {
        const double alpha = rng.uniform(-kPi, kPi);
        const std::vector<double> t0{alpha, 0, 0};
        const std::vector<double> t1{-kPi / 4, kPi / 2, kPi / 2};
        const auto sc = MeasurementScenario::planar(t0, t1);
        const double v = expectation(ghz_state(3), realize(mk(3), sc));
        EXPECT_NEAR(v, std::sqrt(2.0) - 2 * std::sin(alpha), 1e-12);
    }
    const auto sc = MeasurementScenario::planar(std::vector<double>{kPi / 4, 0, 0},
                                                std::vector<double>{-kPi / 4, kPi / 2, kPi / 2});
    EXPECT_NEAR(expectation(ghz_state(3), realize(mk(3), sc)), 0.0, 1e-12);
}

TEST(Realize, SvetlichnyFigureTwoCurve) {
    for (int k = 0; k <= 40; ++k) {
        const double alpha = -kPi + 2 * kPi * k / 40;
        const auto sc = MeasurementScenario::planar(std::vector<double>{0, 0, 0}, std::vector<double>{alpha, alpha, alpha});
        const double v = expectation(ghz_state(3), realize(svetlichny(3, Parity::minus), sc));
        EXPECT_NEAR(v, 1 + 3 * std::cos(alpha) - 3 * std::cos(2 * alpha) - std::cos(3 * alpha), 1e-12);
    }
    const auto sc = MeasurementScenario::planar(std::vector<double>{0, 0, 0}, std::vector<double>{kPi, kPi, kPi});
    EXPECT_NEAR(expectation(ghz_state(3), realize(svetlichny(3, Parity::minus), sc)), -4.0, 1e-12);
}

TEST(Realize, MatchesCosSumOracleOnRandomAngles) {
    Rng rng(203);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 2 + trial % 5;
        const auto sc = random_scenario(rng, n, ObservableFamily::planar);
        const auto &a = *sc.angles();
        for (const auto &p : {svetlichny(n, Parity::minus), svetlichny(n, Parity::plus), mk(n)}) {
            EXPECT_NEAR(expectation(ghz_state(n), realize(p, sc)), ghz_value_oracle(p, a.theta0, a.theta1), 1e-11);
        }
    }
}

TEST(Realize, MatchesTermByTermEmbedding) {
    Rng rng(205);
    const auto sc = random_scenario(rng, 3, ObservableFamily::bloch);
    const auto p = terms_of(3, {{"000", 1}, {"011", -1}, {"101", 3}});
    ComplexMatrix expected(8);
    for (const auto &[s, c] : p.terms()) {
        std::vector<SlotFactor> f;
        for (int party = 1; party <= 3; ++party) {
            f.push_back({party, sc.local(party, setting_of(s, party, 3))});
        }
        expected.add_scaled(sc.product(f), c.to_double());
    }
    EXPECT_LE(max_abs_diff(realize(p, sc), expected), 1e-14);
}

TEST(Realize, RelabelEqualsSwappedScenario) {
    Rng rng(207);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + trial % 4;
        const auto sc = random_scenario(rng, n, trial % 2 ? ObservableFamily::planar : ObservableFamily::bloch);
        for (const auto &p : {svetlichny(n, Parity::minus), mk(n)}) {
            EXPECT_EQ(realize(relabel(p), sc), realize(p, sc.swapped_settings()));
        }
    }
}

TEST(Realize, RejectsPartyMismatch) {
    const auto sc = random_scenario(std::uint64_t{1}, 3, ObservableFamily::planar);
    EXPECT_THROW(realize(mk(2), sc), std::invalid_argument);
}

TEST(Realize, SvetlichnyNeverExceedsTsirelson) {
    // 1000 random states and scenarios over N = 2..6, both parities, pure and mixed.
    Rng rng(209);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 2 + trial % 5;
        const auto sc = random_scenario(rng, n, trial % 2 ? ObservableFamily::planar : ObservableFamily::bloch);
        const QuantumState s = trial % 4 == 3 ? random_rank2_mixture(rng, n) : haar_state(rng, n);
        const double limit = std::ldexp(std::sqrt(2.0), n - 1) + 1e-9;
        for (Parity parity : {Parity::plus, Parity::minus}) {
            EXPECT_LE(std::abs(expectation(s, realize(svetlichny(n, parity), sc))), limit);
        }
    }
}

TEST(EvenEquivalence, KnownSigns) {
    const auto e2 = check_equivalence_even(2);
    EXPECT_EQ(e2.parity, Parity::minus);
    EXPECT_EQ(e2.sign, 1);
    EXPECT_EQ(mk(2), svetlichny(2, Parity::minus));

    const auto e4 = check_equivalence_even(4);
    EXPECT_EQ(e4.parity, Parity::plus);
    EXPECT_EQ(e4.sign, -1);
    EXPECT_EQ(mk(4), svetlichny(4, Parity::plus).negated());

    const auto e6 = check_equivalence_even(6);
    EXPECT_EQ(e6.parity, Parity::minus);
    EXPECT_EQ(e6.sign, -1);
}

TEST(EvenEquivalence, AgreesWithOracleAndAlternates) {
    std::optional<EvenEquivalence> prev;
    for (int n = 2; n <= 10; n += 2) {
        const auto e = check_equivalence_even(n);
        const bool plus = e.parity == Parity::plus;
        for (int k = 0; k <= n; ++k) {
            EXPECT_EQ(oracle::mk_coefficient(n, k), e.sign * oracle::svetlichny_coefficient(plus, k)) << n;
            EXPECT_EQ(oracle::svetlichny_coefficient(true, k),
                      e.relabel_sign * oracle::svetlichny_coefficient(false, n - k))
                << n;
        }
        if (prev) {
            EXPECT_NE(e.parity, prev->parity) << n;
            EXPECT_EQ(e.relabel_sign, -prev->relabel_sign) << n;
        }
        prev = e;
    }
    EXPECT_THROW(check_equivalence_even(3), std::out_of_range);
    EXPECT_THROW(check_equivalence_even(12), std::out_of_range);
}

TEST(PermutationInvariance, SvetlichnyAndMk) {
    for (int n = 2; n <= 8; ++n) {
        EXPECT_TRUE(is_permutation_invariant(svetlichny(n, Parity::minus))) << n;
        EXPECT_TRUE(is_permutation_invariant(svetlichny(n, Parity::plus))) << n;
        EXPECT_TRUE(is_permutation_invariant(mk(n))) << n;
    }
}

TEST(PermutationInvariance, SingleTerms) {
    EXPECT_TRUE(is_permutation_invariant(terms_of(2, {{"00", 1}})));
    EXPECT_FALSE(is_permutation_invariant(terms_of(2, {{"01", 1}})));
    EXPECT_FALSE(is_permutation_invariant(terms_of(3, {{"001", 1}, {"010", 1}, {"100", -1}})));
}

TEST(PermuteParties, MovesSlots) {
    const int perm[] = {2, 0, 1};  // party 1 -> slot 3, party 2 -> slot 1, party 3 -> slot 2
    EXPECT_EQ(permute_parties(terms_of(3, {{"100", 1}}), perm), terms_of(3, {{"001", 1}}));
    const int bad[] = {0, 0, 1};
    EXPECT_THROW(permute_parties(terms_of(3, {{"100", 1}}), bad), std::invalid_argument);
}

TEST(Dump, FixtureFormat) {
    EXPECT_EQ(dump(mk(3)), "+1 001\n+1 010\n+1 100\n-1 111\n");
    EXPECT_EQ(dump(terms_of(2, {{"11", 3}}).scaled(Dyadic(1, 1), PolynomialLabel::custom)), "+3/2 11\n");
}

TEST(Dump, RoundTrips) {
    for (int n = 2; n <= 8; ++n) {
        for (const auto &p : {svetlichny(n, Parity::minus), svetlichny(n, Parity::plus), mk(n)}) {
            std::istringstream in(dump(p));
            EXPECT_EQ(parse_polynomial(in), p);
        }
    }
}

TEST(Parse, RejectsMalformed) {
    for (const char *text : {"", "+1\n", "+1 01\n+1 01\n", "+1 01\n+1 011\n", "0 01\n", "+1 0a\n", "+1/3 01\n"}) {
        std::istringstream in(text);
        EXPECT_THROW(parse_polynomial(in), ParseError) << text;
    }
}

TEST(BellPolynomial, MergesAndDropsZeros) {
    const auto p = terms_of(2, {{"01", 1}, {"01", -1}, {"10", 1}, {"10", 1}});
    EXPECT_EQ(p.size(), 1U);
    EXPECT_EQ(p.coefficient(parse_settings("10")), Dyadic(2));
    EXPECT_THROW(terms_of(2, {{"100", 1}}), std::out_of_range);
}
