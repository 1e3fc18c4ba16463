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
#include <optional>
#include <sstream>
#include <string>
#include <variant>

#include "errors.hpp"
#include "matrix.hpp"
#include "observables.hpp"
#include "polynomial.hpp"
#include "state.hpp"
#include "text.hpp"

namespace bellbound {

/// Roundoff allowance beyond the analytic range of eta, chi and quad_corr.
inline constexpr double kOvershootTol = 1e-10;
/// Commutator max-entry norm below which two blocks count as commuting.
inline constexpr double kCommuteTol = 1e-10;

namespace detail {

inline double clamp_checked(double value, double lo, double hi, const char *what) {
    if (!(value >= lo - kOvershootTol && value <= hi + kOvershootTol)) {
        throw InvariantViolation(std::string(what) + " = " + std::to_string(value) + " outside [" +
                                 std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return std::clamp(value, lo, hi);
}

inline double pow2(int k) { return std::ldexp(1.0, k); }

// sqrt(1 - q^2) with the factored form, accurate near |q| = 1.
inline double sqrt_one_minus_square(double q) { return std::sqrt(std::max(0.0, (1.0 - q) * (1.0 + q))); }

}  // namespace detail

// ---------------------------------------------------------------------------
// Closed-form bounds.

/// 2^(N-1) sqrt(1 + sqrt(1 - eta)); eta in [0, 1].
inline double svetlichny_bound(int n_parties, double eta_value) {
    if (n_parties < 2) {
        throw std::out_of_range("svetlichny_bound: N must be >= 2");
    }
    const double eta_c = detail::clamp_checked(eta_value, 0.0, 1.0, "eta");
    return detail::pow2(n_parties - 1) * std::sqrt(1.0 + std::sqrt(1.0 - eta_c));
}

/// 2^(N-3) (sqrt(2 + chi_plus) + sqrt(2 - chi_minus)) for odd N >= 3.
inline double mk_bound_odd(int n_parties, double chi_plus, double chi_minus) {
    if (n_parties < 3 || n_parties % 2 == 0) {
        throw std::out_of_range("mk_bound_odd: N must be odd and >= 3");
    }
    const double cp = detail::clamp_checked(chi_plus, -2.0, 2.0, "chi_plus");
    const double cm = detail::clamp_checked(chi_minus, -2.0, 2.0, "chi_minus");
    return detail::pow2(n_parties - 3) * (std::sqrt(2.0 + cp) + std::sqrt(2.0 - cm));
}

/// 2^(N-2) sqrt(1 + sqrt(1 - q^2)) for a classically correlated pair with
/// q = <A0^(n) A1^(n) A0^(m) A1^(m)> in [-1, 1].
inline double mk_bound_classical_pair(int n_parties, double quad_corr) {
    if (n_parties < 3 || n_parties % 2 == 0) {
        throw std::out_of_range("mk_bound_classical_pair: N must be odd and >= 3");
    }
    const double q = detail::clamp_checked(quad_corr, -1.0, 1.0, "quad_corr");
    return detail::pow2(n_parties - 2) * std::sqrt(1.0 + detail::sqrt_one_minus_square(q));
}

/// sqrt(2 + c) + sqrt(2 - c): the two-term bound before simplification.
inline double split_pair_bound(double c) {
    const double cc = detail::clamp_checked(c, -2.0, 2.0, "anticommutator expectation");
    return std::sqrt(2.0 + cc) + std::sqrt(2.0 - cc);
}

/// 2 sqrt(1 + sqrt(1 - (c/2)^2)): the simplified form of split_pair_bound.
inline double merged_pair_bound(double c) {
    const double cc = detail::clamp_checked(c, -2.0, 2.0, "anticommutator expectation");
    return 2.0 * std::sqrt(1.0 + detail::sqrt_one_minus_square(0.5 * cc));
}

// ---------------------------------------------------------------------------
// Correlation quantities.

/// eta^(n) and the bound ingredient sqrt(1 - eta^(n)) for one party.
///
/// sqrt(1 - eta) is evaluated as sqrt(<(A0 + A1)^2> <(A0 - A1)^2>) / 2, which
/// keeps full relative accuracy when eta is close to 1.
struct LocalCorrelation {
    int party = 0;
    double anticommutator = 0.0;  // <{A0, A1}>
    double eta = 0.0;
    double sqrt_one_minus_eta = 1.0;
};

inline LocalCorrelation local_correlation(const MeasurementScenario &sc, const QuantumState &state, int party) {
    const auto &a0 = sc.local(party, 0);
    const auto &a1 = sc.local(party, 1);
    if (sc.dim() != state.dim()) {
        throw DimensionError("local_correlation: scenario and state dimensions differ");
    }
    const SlotFactor anti{party, anticommutator(a0, a1)};
    const SlotFactor sum{party, a0 + a1};
    const SlotFactor diff{party, a0 - a1};

    LocalCorrelation out;
    out.party = party;
    out.anticommutator = detail::clamp_checked(expectation(state, sc.product(std::span(&anti, 1))), -2.0, 2.0,
                                               "<{A0, A1}>");
    out.eta = detail::clamp_checked(0.25 * out.anticommutator * out.anticommutator, 0.0, 1.0, "eta");
    const double plus = detail::clamp_checked(second_moment(state, sc.product(std::span(&sum, 1))), 0.0, 4.0,
                                              "<(A0 + A1)^2>");
    const double minus = detail::clamp_checked(second_moment(state, sc.product(std::span(&diff, 1))), 0.0, 4.0,
                                               "<(A0 - A1)^2>");
    out.sqrt_one_minus_eta = std::min(1.0, 0.5 * std::sqrt(plus * minus));
    return out;
}

/// (<{A0^(n), A1^(n)}>/2)^2
inline double eta(const MeasurementScenario &sc, const QuantumState &state, int party) {
    return local_correlation(sc, state, party).eta;
}

/// chi_+ and chi_- for an ordered pair of distinct parties, together with the
/// nonnegative moments 2 + chi_+ = <(P + Q)^2> and 2 - chi_- = <(P' - Q')^2>
/// used to evaluate the bound without cancellation.
struct BipartiteCorrelation {
    int n = 0;
    int m = 0;
    double chi_plus = 0.0;
    double chi_minus = 0.0;
    double plus_moment = 2.0;
    double minus_moment = 2.0;
};

inline BipartiteCorrelation bipartite_correlation(const MeasurementScenario &sc, const QuantumState &state, int n,
                                                  int m) {
    if (n == m) {
        throw std::invalid_argument("chi: parties must differ");
    }
    if (sc.dim() != state.dim()) {
        throw DimensionError("chi: scenario and state dimensions differ");
    }
    const auto &a0n = sc.local(n, 0);
    const auto &a1n = sc.local(n, 1);
    const auto &a0m = sc.local(m, 0);
    const auto &a1m = sc.local(m, 1);
    auto pair_op = [&](const ComplexMatrix &on_n, const ComplexMatrix &on_m) {
        const SlotFactor f[] = {{n, on_n}, {m, on_m}};
        return sc.product(f);
    };
    const ComplexMatrix a0a1_n = a0n * a1n;
    const ComplexMatrix a1a0_n = a1n * a0n;
    const ComplexMatrix a0a1_m = a0m * a1m;
    const ComplexMatrix a1a0_m = a1m * a0m;

    BipartiteCorrelation out;
    out.n = n;
    out.m = m;
    // {A0n A1m, A1n A0m} = (A0n A1n)(A1m A0m) + (A1n A0n)(A0m A1m)
    out.chi_plus = detail::clamp_checked(
        expectation(state, pair_op(a0a1_n, a1a0_m) + pair_op(a1a0_n, a0a1_m)), -2.0, 2.0, "chi_plus");
    // {A0n A0m, A1n A1m} = (A0n A1n)(A0m A1m) + (A1n A0n)(A1m A0m)
    out.chi_minus = detail::clamp_checked(
        expectation(state, pair_op(a0a1_n, a0a1_m) + pair_op(a1a0_n, a1a0_m)), -2.0, 2.0, "chi_minus");
    out.plus_moment = detail::clamp_checked(second_moment(state, pair_op(a0n, a1m) + pair_op(a1n, a0m)), 0.0, 4.0,
                                            "2 + chi_plus");
    out.minus_moment = detail::clamp_checked(second_moment(state, pair_op(a0n, a0m) - pair_op(a1n, a1m)), 0.0,
                                             4.0, "2 - chi_minus");
    return out;
}

/// chi_+^(n,m) (sign plus) or chi_-^(n,m) (sign minus).
inline double chi(const MeasurementScenario &sc, const QuantumState &state, int n, int m, Parity sign) {
    const auto c = bipartite_correlation(sc, state, n, m);
    return sign == Parity::plus ? c.chi_plus : c.chi_minus;
}

// ---------------------------------------------------------------------------
// Reports.

enum class BoundKind { svetlichny, mk_odd, mk_classical_pair };

inline const char *bound_kind_name(BoundKind k) {
    switch (k) {
        case BoundKind::svetlichny:
            return "svetlichny";
        case BoundKind::mk_odd:
            return "mk-odd";
        case BoundKind::mk_classical_pair:
            return "mk-classical-pair";
    }
    return "?";
}

struct PartyWitness {
    int party;
    double eta;
};

struct PairWitness {
    int n;
    int m;
    double chi_plus;
    double chi_minus;
};

struct ClassicalPairWitness {
    int n;
    int m;
    double quad_corr;
};

/// A refined bound, what produced it, and the fixed reference bounds of the
/// same operator family for comparison.
struct BoundReport {
    BoundKind kind;
    int n_parties;
    double value;
    std::variant<PartyWitness, PairWitness, ClassicalPairWitness> witness;
    double known_tsirelson;
    double classical;
    double algebraic;
};

/// Reference values for the normalized Svetlichny operator of N parties.
inline BoundReport svetlichny_reference(int n_parties) {
    return {BoundKind::svetlichny,
            n_parties,
            0.0,
            PartyWitness{0, 0.0},
            detail::pow2(n_parties - 1) * std::sqrt(2.0),
            detail::pow2(n_parties - 1),
            detail::pow2(n_parties)};
}

/// Reference values for the normalized MK operator of odd N parties. The
/// quantum maximum coincides with the algebraic one, 2^(N-1); the
/// fully-separable classical value is 2^((N-1)/2).
inline BoundReport mk_odd_reference(int n_parties) {
    return {BoundKind::mk_odd,
            n_parties,
            0.0,
            PairWitness{0, 0, 0.0, 0.0},
            detail::pow2(n_parties - 1),
            detail::pow2((n_parties - 1) / 2),
            detail::pow2(n_parties - 1)};
}

namespace detail {

inline bool strictly_below(double candidate, double best) {
    return candidate < best - 1e-12 * std::max(1.0, std::abs(best));
}

}  // namespace detail

/// Minimum over parties of 2^(N-1) sqrt(1 + sqrt(1 - eta^(n))); ties go to
/// the lowest party index.
inline BoundReport best_svetlichny_bound(const MeasurementScenario &sc, const QuantumState &state) {
    const int n = sc.n_parties();
    if (n < 2) {
        throw std::out_of_range("best_svetlichny_bound: N must be >= 2");
    }
    BoundReport report = svetlichny_reference(n);
    std::optional<double> best;
    for (int party = 1; party <= n; ++party) {
        const auto lc = local_correlation(sc, state, party);
        const double value = detail::pow2(n - 1) * std::sqrt(1.0 + lc.sqrt_one_minus_eta);
        if (!best || detail::strictly_below(value, *best)) {
            best = value;
            report.witness = PartyWitness{party, lc.eta};
        }
    }
    report.value = *best;
    return report;
}

/// Minimum over all ordered pairs (n, m), n != m, of the odd-N MK bound;
/// ties go to the lexicographically first pair.
inline BoundReport best_mk_bound(const MeasurementScenario &sc, const QuantumState &state) {
    const int n_parties = sc.n_parties();
    if (n_parties < 3 || n_parties % 2 == 0) {
        throw std::invalid_argument(
            "best_mk_bound: N must be odd and >= 3 (even N reduces to the Svetlichny bound)");
    }
    BoundReport report = mk_odd_reference(n_parties);
    std::optional<double> best;
    for (int n = 1; n <= n_parties; ++n) {
        for (int m = 1; m <= n_parties; ++m) {
            if (n == m) {
                continue;
            }
            const auto bc = bipartite_correlation(sc, state, n, m);
            const double value =
                detail::pow2(n_parties - 3) * (std::sqrt(bc.plus_moment) + std::sqrt(bc.minus_moment));
            if (!best || detail::strictly_below(value, *best)) {
                best = value;
                report.witness = PairWitness{n, m, bc.chi_plus, bc.chi_minus};
            }
        }
    }
    report.value = *best;
    return report;
}

/// Classical-pair MK bound for parties n, m whose two observables commute.
inline BoundReport mk_classical_pair_report(const MeasurementScenario &sc, const QuantumState &state, int n, int m) {
    const int n_parties = sc.n_parties();
    if (n == m) {
        throw std::invalid_argument("mk_classical_pair_report: parties must differ");
    }
    for (int p : {n, m}) {
        if (commutator(sc.local(p, 0), sc.local(p, 1)).max_abs() > kCommuteTol) {
            throw InvariantViolation("mk_classical_pair_report: observables of party " + std::to_string(p) +
                                     " do not commute");
        }
    }
    const SlotFactor f[] = {{n, sc.local(n, 0) * sc.local(n, 1)}, {m, sc.local(m, 0) * sc.local(m, 1)}};
    const double q = detail::clamp_checked(expectation(state, sc.product(f)), -1.0, 1.0, "quad_corr");
    BoundReport report = mk_odd_reference(n_parties);
    report.kind = BoundKind::mk_classical_pair;
    report.value = mk_bound_classical_pair(n_parties, q);
    report.witness = ClassicalPairWitness{n, m, q};
    return report;
}

/// Flat key=value block, one pair per line.
inline std::string to_key_value(const BoundReport &r) {
    std::ostringstream out;
    auto num = [](double v) { return format_double(v, 15); };
    out << "kind=" << bound_kind_name(r.kind) << '\n';
    out << "n_parties=" << r.n_parties << '\n';
    out << "value=" << num(r.value) << '\n';
    if (const auto *w = std::get_if<PartyWitness>(&r.witness)) {
        out << "witness_party=" << w->party << '\n' << "eta=" << num(w->eta) << '\n';
    } else if (const auto *w = std::get_if<PairWitness>(&r.witness)) {
        out << "witness_pair=" << w->n << ',' << w->m << '\n'
            << "chi_plus=" << num(w->chi_plus) << '\n'
            << "chi_minus=" << num(w->chi_minus) << '\n';
    } else if (const auto *w = std::get_if<ClassicalPairWitness>(&r.witness)) {
        out << "witness_pair=" << w->n << ',' << w->m << '\n' << "quad_corr=" << num(w->quad_corr) << '\n';
    }
    out << "known_tsirelson=" << num(r.known_tsirelson) << '\n';
    out << "classical=" << num(r.classical) << '\n';
    out << "algebraic=" << num(r.algebraic) << '\n';
    return out.str();
}

// ---------------------------------------------------------------------------
// Raw covariance inequalities on a bipartition.

enum class BlockSide { x, y };

struct CovarianceCheck {
    double lhs;             // |<O_i Z> + (-1)^m <O_j Z>|
    double rhs;             // sqrt(2 + (-1)^m <{O_i, O_j}>)
    double slack;           // rhs - lhs
    double anticommutator;  // <{O_i, O_j}>
};

/// |<O_i Z> + (-1)^m <O_j Z>| <= sqrt(2 + (-1)^m <{O_i, O_j}>).
///
/// For side x, (first, second) are X_i, X_j on block X and `other` is Y_k;
/// for side y they are Y_i, Y_j and `other` is X_k. All operators act on the
/// full space, must be dichotomic, and `other` must commute with both.
inline CovarianceCheck covariance_inequality(const QuantumState &state, const ComplexMatrix &first,
                                             const ComplexMatrix &second, const ComplexMatrix &other, int m_parity,
                                             BlockSide side = BlockSide::x) {
    (void)side;  // the inequality has the same form on both sides
    for (const ComplexMatrix *op : {&first, &second, &other}) {
        detail::require_state_dim(state, *op, "covariance_inequality");
        if (const auto rep = validate_dichotomic(*op); !rep.ok) {
            throw InvariantViolation("covariance_inequality: operator fails " + rep.failed_check + " check");
        }
    }
    if (commutator(first, other).max_abs() > kCommuteTol || commutator(second, other).max_abs() > kCommuteTol) {
        throw InvariantViolation("covariance_inequality: blocks do not commute");
    }
    const double s = (m_parity % 2 == 0) ? 1.0 : -1.0;
    const double lhs = std::abs(expectation(state, first * other) + s * expectation(state, second * other));
    const double anti = expectation(state, anticommutator(first, second));
    ComplexMatrix combo = first;
    combo.add_scaled(second, s);
    const double rhs = std::sqrt(std::max(0.0, second_moment(state, combo)));
    return {lhs, rhs, rhs - lhs, anti};
}

}  // namespace bellbound
