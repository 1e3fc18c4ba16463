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

#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

#include "bellbound/observables.hpp"
#include "bellbound/random.hpp"
#include "bellbound/scenario_io.hpp"
#include "bellbound/state.hpp"
#include "gtest/gtest.h"
#include "oracles.hpp"

using namespace bellbound;

namespace {

constexpr double kPi = std::numbers::pi;

double square_residual(const ComplexMatrix &m) {
    return max_abs_diff(m * m, ComplexMatrix::identity(m.dim()));
}

}  // namespace

TEST(PlanarObservable, EndpointsArePaulis) {
    EXPECT_LE(max_abs_diff(planar_observable(0.0), pauli_x()), 1e-16);
    EXPECT_LE(max_abs_diff(planar_observable(kPi / 2), pauli_y()), 1e-16);
    EXPECT_LE(max_abs_diff(planar_observable(kPi), -pauli_x()), 1e-15);
}

TEST(PlanarObservable, MatchesOracleAndSquaresToIdentity) {
    Rng rng(101);
    for (int trial = 0; trial < 100; ++trial) {
        const double t = rng.uniform(-10, 10);
        const auto a = planar_observable(t);
        const auto o = oracle::planar(t);
        for (std::size_t i = 0; i < 2; ++i) {
            for (std::size_t j = 0; j < 2; ++j) {
                EXPECT_NEAR(std::abs(a(i, j) - o[i][j]), 0.0, 1e-15);
            }
        }
        EXPECT_LE(square_residual(a), 1e-14);
        EXPECT_TRUE(validate_dichotomic(a).ok);
    }
}

TEST(PlanarObservable, RejectsNonFinite) {
    EXPECT_THROW(planar_observable(std::nan("")), std::invalid_argument);
    EXPECT_THROW(planar_observable(INFINITY), std::invalid_argument);
}

TEST(PlanarObservable, AnticommutatorIdentity) {
    Rng rng(103);
    for (int trial = 0; trial < 100; ++trial) {
        const double a = rng.uniform(-7, 7);
        const double b = rng.uniform(-7, 7);
        const auto pa = planar_observable(a);
        const auto pb = planar_observable(b);
        EXPECT_LE(max_abs_diff(pa * pb + pb * pa, ComplexMatrix::identity(2) * Complex(2 * std::cos(a - b))), 1e-14);
    }
}

TEST(BlochObservable, AxesAndNormalization) {
    EXPECT_LE(max_abs_diff(bloch_observable(1, 0, 0), pauli_x()), 1e-16);
    EXPECT_LE(max_abs_diff(bloch_observable(0, 0, 1), pauli_z()), 1e-16);
    EXPECT_LE(max_abs_diff(bloch_observable(0, 3, 0), pauli_y()), 1e-16);
    const auto d = bloch_observable(1, 1, 0);
    EXPECT_LE(max_abs_diff(d, (pauli_x() + pauli_y()) * Complex(M_SQRT1_2)), 1e-15);
    EXPECT_LE(square_residual(d), 1e-15);
    EXPECT_THROW(bloch_observable(0, 0, 0), std::invalid_argument);
}

TEST(ValidateDichotomic, ReportsFailedCheck) {
    EXPECT_TRUE(validate_dichotomic(pauli_x()).ok);
    const auto half = validate_dichotomic(pauli_x() * Complex(0.5));
    EXPECT_FALSE(half.ok);
    EXPECT_EQ(half.failed_check, "involution");
    EXPECT_NEAR(half.residual, 0.75, 1e-15);

    const ComplexMatrix upper{{1.0, 1.0}, {0.0, -1.0}};
    const auto r = validate_dichotomic(upper);
    EXPECT_FALSE(r.ok);
    EXPECT_EQ(r.failed_check, "hermitian");
    EXPECT_GT(r.residual, 0.5);
}

TEST(ValidateDichotomic, ToleranceBoundary) {
    // diag(1, -1 + d): Hermitian, squares to diag(1, 1 - 2d + d^2).
    const ComplexMatrix ok{{1.0, 0.0}, {0.0, -1.0 + 4e-13}};
    const ComplexMatrix bad{{1.0, 0.0}, {0.0, -1.0 + 1e-11}};
    EXPECT_TRUE(validate_dichotomic(ok).ok);
    EXPECT_FALSE(validate_dichotomic(bad).ok);
}

TEST(ValidateDichotomic, AcceptsHigherDimensionalInvolution) {
    EXPECT_TRUE(validate_dichotomic(tensor_product(pauli_x(), pauli_z())).ok);
    EXPECT_NO_THROW(DichotomicObservable(tensor_product(pauli_x(), pauli_z()), 1, 0));
}

TEST(DichotomicObservable, RejectsInvalid) {
    EXPECT_THROW(DichotomicObservable(pauli_x() * Complex(0.5), 1, 0), InvariantViolation);
    EXPECT_THROW(DichotomicObservable(pauli_x(), 0, 0), std::out_of_range);
    EXPECT_THROW(DichotomicObservable(pauli_x(), 1, 2), std::out_of_range);
}

TEST(Embed, ZOnFirstPartyOfTwo) {
    const DichotomicObservable z(pauli_z(), 1, 0);
    const auto op = embed(z, 2);
    const auto out = op.apply(basis_state(2, 0b01).amplitudes());
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_EQ(out[i], Complex(i == 0b01 ? 1.0 : 0.0));
    }
    // Party 2 acts on the low bit.
    const auto op2 = embed(DichotomicObservable(pauli_z(), 2, 0), 2);
    EXPECT_EQ(op2.apply(basis_state(2, 0b01).amplitudes())[0b01], Complex(-1.0));
}

TEST(Embed, DifferentPartiesCommute) {
    const auto x1 = embed(DichotomicObservable(pauli_x(), 1, 0), 2);
    const auto y2 = embed(DichotomicObservable(pauli_y(), 2, 0), 2);
    EXPECT_LE(commutator(x1, y2).max_abs(), 1e-14);
    Rng rng(107);
    for (int trial = 0; trial < 20; ++trial) {
        const auto sc = random_scenario(rng, 4, ObservableFamily::bloch);
        for (int p = 1; p <= 4; ++p) {
            for (int q = 1; q <= 4; ++q) {
                if (p != q) {
                    EXPECT_LE(commutator(*sc.embedded(p, 0), *sc.embedded(q, 1)).max_abs(), 1e-14);
                }
            }
        }
    }
}

TEST(Embed, XOnThirdPartyOfGhzHasZeroMean) {
    EXPECT_NEAR(expectation(ghz_state(3), embed(DichotomicObservable(pauli_x(), 3, 0), 3)), 0.0, 1e-15);
}

TEST(Embed, ErrorsOnBadPartyAndCap) {
    EXPECT_THROW(embed(DichotomicObservable(pauli_x(), 4, 0), 3), std::out_of_range);
    EXPECT_THROW(embed_local(pauli_x(), 1, 13), std::out_of_range);
    const std::size_t dims[] = {64, 64, 2};
    const SlotFactor f{1, ComplexMatrix::identity(64)};
    EXPECT_THROW(embed_product(std::span<const std::size_t>(dims), std::span(&f, 1)), DimensionError);
    const SlotFactor twice[] = {{1, pauli_x()}, {1, pauli_y()}};
    EXPECT_THROW(embed_product(2, twice), std::invalid_argument);
}

TEST(Embed, ProductMatchesKron) {
    const SlotFactor factors[] = {{3, pauli_z()}, {1, pauli_x()}};
    const auto op = embed_product(3, factors);
    const auto expected = tensor_product(tensor_product(pauli_x(), ComplexMatrix::identity(2)), pauli_z());
    EXPECT_EQ(op, expected);
}

TEST(MeasurementScenario, PlanarFactoryRecordsAngles) {
    const double t0[] = {0.1, 0.2};
    const double t1[] = {0.3, 0.4};
    const auto sc = MeasurementScenario::planar(t0, t1);
    EXPECT_EQ(sc.n_parties(), 2);
    EXPECT_EQ(sc.dim(), 4U);
    EXPECT_EQ(sc.family(), ObservableFamily::planar);
    ASSERT_TRUE(sc.angles().has_value());
    EXPECT_EQ(sc.angles()->theta1[1], 0.4);
    EXPECT_LE(max_abs_diff(sc.local(2, 1), planar_observable(0.4)), 0.0);
}

TEST(MeasurementScenario, ValidatesCompleteness) {
    std::vector<DichotomicObservable> missing{{pauli_x(), 1, 0}, {pauli_y(), 1, 0}};
    EXPECT_THROW(MeasurementScenario(std::move(missing)), std::invalid_argument);
    std::vector<DichotomicObservable> beyond{{pauli_x(), 1, 0}, {pauli_y(), 2, 1}};
    EXPECT_THROW(MeasurementScenario(std::move(beyond)), std::invalid_argument);
    std::vector<DichotomicObservable> odd{{pauli_x(), 1, 0}};
    EXPECT_THROW(MeasurementScenario(std::move(odd)), std::invalid_argument);
    std::vector<DichotomicObservable> mixed_dims{{pauli_x(), 1, 0}, {tensor_product(pauli_x(), pauli_x()), 1, 1}};
    EXPECT_THROW(MeasurementScenario(std::move(mixed_dims)), DimensionError);
    const auto sc = MeasurementScenario::planar(std::vector<double>{0.0}, std::vector<double>{1.0});
    EXPECT_THROW((void)sc.observable(2, 0), std::out_of_range);
    EXPECT_THROW((void)sc.observable(1, 2), std::out_of_range);
}

TEST(MeasurementScenario, EmbeddingIsCachedAndShared) {
    const auto sc = random_scenario(std::uint64_t{5}, 3, ObservableFamily::planar);
    EXPECT_EQ(sc.cached_embeddings(), 0U);
    const auto a = sc.embedded(2, 1);
    const auto b = sc.embedded(2, 1);
    EXPECT_EQ(a.get(), b.get());
    EXPECT_EQ(sc.cached_embeddings(), 1U);
    EXPECT_EQ(*a, embed(sc.observable(2, 1), 3));
}

TEST(MeasurementScenario, ConcurrentEmbeddingReturnsOneInstance) {
    const auto sc = random_scenario(std::uint64_t{9}, 5, ObservableFamily::bloch);
    std::vector<std::shared_ptr<const ComplexMatrix>> got(8);
    std::vector<std::thread> threads;
    for (std::size_t t = 0; t < got.size(); ++t) {
        threads.emplace_back([&, t] {
            for (int p = 1; p <= 5; ++p) {
                auto e = sc.embedded(p, static_cast<int>(t % 2));
                if (p == 3 && t % 2 == 0) {
                    got[t] = e;
                }
            }
        });
    }
    for (auto &th : threads) {
        th.join();
    }
    for (std::size_t t = 2; t < got.size(); t += 2) {
        EXPECT_EQ(got[t].get(), got[0].get());
    }
    EXPECT_EQ(sc.cached_embeddings(), 10U);
}

TEST(MeasurementScenario, SwappedSettings) {
    const double t0[] = {0.1, 0.2};
    const double t1[] = {0.3, 0.4};
    const auto sc = MeasurementScenario::planar(t0, t1).swapped_settings();
    EXPECT_EQ(sc.angles()->theta0[0], 0.3);
    EXPECT_EQ(sc.local(1, 1), planar_observable(0.1));
}

TEST(RandomScenario, DeterministicAndValid) {
    const auto a = random_scenario(std::uint64_t{1234}, 4, ObservableFamily::planar);
    const auto b = random_scenario(std::uint64_t{1234}, 4, ObservableFamily::planar);
    const auto c = random_scenario(std::uint64_t{1235}, 4, ObservableFamily::planar);
    EXPECT_EQ(a.angles()->theta0, b.angles()->theta0);
    EXPECT_EQ(a.angles()->theta1, b.angles()->theta1);
    EXPECT_NE(a.angles()->theta0, c.angles()->theta0);
    for (int p = 1; p <= 4; ++p) {
        for (int s = 0; s < 2; ++s) {
            EXPECT_TRUE(validate_dichotomic(a.local(p, s)).ok);
        }
    }
    const auto bl = random_scenario(std::uint64_t{77}, 3, ObservableFamily::bloch);
    EXPECT_EQ(bl.local(2, 0), random_scenario(std::uint64_t{77}, 3, ObservableFamily::bloch).local(2, 0));
    EXPECT_THROW(random_scenario(std::uint64_t{1}, 2, ObservableFamily::custom), std::invalid_argument);
}

TEST(RandomScenario, PlanarAnglesAreUniform) {
    // Mean of U[0, 2pi) is pi with standard deviation pi/sqrt(3) per draw.
    double sum = 0.0;
    int count = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const auto sc = random_scenario(seed, 1, ObservableFamily::planar);
        for (double t : {sc.angles()->theta0[0], sc.angles()->theta1[0]}) {
            EXPECT_GE(t, 0.0);
            EXPECT_LT(t, 2 * kPi);
            sum += t;
            ++count;
        }
    }
    const double sigma = kPi / std::sqrt(3.0) / std::sqrt(static_cast<double>(count));
    EXPECT_NEAR(sum / count, kPi, 3 * sigma);
}

TEST(RandomDirection, UnitLengthAndCentered) {
    Rng rng(109);
    std::array<double, 3> mean{};
    const int n = 4000;
    for (int i = 0; i < n; ++i) {
        const auto d = random_direction(rng);
        EXPECT_NEAR(std::hypot(d[0], d[1], d[2]), 1.0, 1e-14);
        for (int k = 0; k < 3; ++k) {
            mean[k] += d[k] / n;
        }
    }
    // Each coordinate of a uniform unit vector has variance 1/3.
    for (double m : mean) {
        EXPECT_NEAR(m, 0.0, 3 * std::sqrt(1.0 / 3.0 / n));
    }
}

TEST(ParseAngle, FractionalPiSyntax) {
    EXPECT_DOUBLE_EQ(parse_angle("pi"), kPi);
    EXPECT_DOUBLE_EQ(parse_angle("-pi"), -kPi);
    EXPECT_DOUBLE_EQ(parse_angle("pi/4"), kPi / 4);
    EXPECT_DOUBLE_EQ(parse_angle("-3pi/4"), -3 * kPi / 4);
    EXPECT_DOUBLE_EQ(parse_angle("3*pi/2"), 3 * kPi / 2);
    EXPECT_DOUBLE_EQ(parse_angle("0.5pi"), kPi / 2);
    EXPECT_DOUBLE_EQ(parse_angle("0.25"), 0.25);
    EXPECT_DOUBLE_EQ(parse_angle("-1e-3"), -1e-3);
    for (const char *bad : {"", "p", "pi/0", "pi/", "2pi4", "abc", "1.0x"}) {
        EXPECT_THROW(parse_angle(bad), ParseError) << bad;
    }
}

TEST(ScenarioIo, PlanarFile) {
    std::istringstream in("# fig preset\nparties 3 family planar\n-pi/4 pi/4\n0 pi/2\n0 pi/2\n");
    const auto sc = read_scenario(in);
    EXPECT_EQ(sc.n_parties(), 3);
    EXPECT_DOUBLE_EQ(sc.angles()->theta0[0], -kPi / 4);
    EXPECT_DOUBLE_EQ(sc.angles()->theta1[2], kPi / 2);
}

TEST(ScenarioIo, BlochFile) {
    std::istringstream in("parties 2 family bloch\n1 0 0 0 1 0\n0 0 1 1 1 0\n");
    const auto sc = read_scenario(in);
    EXPECT_EQ(sc.family(), ObservableFamily::bloch);
    EXPECT_LE(max_abs_diff(sc.local(1, 1), pauli_y()), 1e-16);
    EXPECT_LE(max_abs_diff(sc.local(2, 0), pauli_z()), 1e-16);
}

TEST(ScenarioIo, RoundTripPlanar) {
    const auto sc = random_scenario(std::uint64_t{3}, 3, ObservableFamily::planar);
    std::stringstream buf;
    write_planar_scenario(buf, *sc.angles());
    const auto back = read_scenario(buf);
    EXPECT_EQ(back.angles()->theta0, sc.angles()->theta0);
    EXPECT_EQ(back.angles()->theta1, sc.angles()->theta1);
}

TEST(ScenarioIo, RejectsMalformed) {
    for (const char *text :
         {"", "parties 2 family planar\n0 0\n", "parties 2 family planar\n0 0\n0\n", "parties 1 family qutrit\n0 0\n",
          "parties 0 family planar\n", "parties 1 family bloch\n0 0 0 1 0 0\n", "parties x family planar\n0 0\n",
          "parties 1 family planar\n0 0\n1 1\n", "parties 1 family planar\n0 0 0\n"}) {
        std::istringstream in(text);
        EXPECT_THROW(read_scenario(in), ParseError) << text;
    }
    EXPECT_THROW(load_scenario_file("/nonexistent/file.scenario"), ParseError);
}
