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
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "bounds.hpp"
#include "covariance.hpp"
#include "errors.hpp"
#include "observables.hpp"
#include "parallel.hpp"
#include "polynomial.hpp"
#include "random.hpp"
#include "state.hpp"
#include "text.hpp"

namespace bellbound {

/// Slack below which a bound counts as violated.
inline constexpr double kViolationSlack = -1e-9;

// ---------------------------------------------------------------------------
// Figure sweeps.

enum class Figure { fig1, fig2, fig3, custom };

enum class OperatorChoice { svetlichny_plus, svetlichny_minus, mk };

inline BellPolynomial operator_polynomial(OperatorChoice op, int n) {
    switch (op) {
        case OperatorChoice::svetlichny_plus:
            return svetlichny(n, Parity::plus);
        case OperatorChoice::svetlichny_minus:
            return svetlichny(n, Parity::minus);
        case OperatorChoice::mk:
            return mk(n);
    }
    throw std::invalid_argument("unknown operator");
}

struct SweepConfig {
    Figure figure = Figure::fig1;
    double alpha_start = -std::numbers::pi;
    double alpha_end = std::numbers::pi;
    int samples = 201;
    /// Defaults to the GHZ state on the scenario's party count.
    std::optional<QuantumState> state;
    /// Required for Figure::custom only.
    std::function<MeasurementScenario(double)> custom_scenario;
    OperatorChoice custom_operator = OperatorChoice::svetlichny_minus;
};

struct SweepRow {
    double alpha;
    double operator_value;
    double refined_bound;
    double known_tsirelson;
    double classical_bound;
    double algebraic_bound;
};

/// Three-party planar settings of the built-in figures at phase alpha:
///   fig1: theta_0 = (alpha, 0, 0),  theta_1 = (pi/4, pi/2, pi/2)
///   fig2: theta_0 = (0, 0, 0),      theta_1 = (alpha, alpha, alpha)
///   fig3: theta_0 = (alpha, 0, 0),  theta_1 = (-pi/4, pi/2, pi/2)
inline MeasurementScenario preset_scenario(Figure figure, double alpha) {
    constexpr double pi = std::numbers::pi;
    switch (figure) {
        case Figure::fig1: {
            const double t0[] = {alpha, 0.0, 0.0};
            const double t1[] = {pi / 4, pi / 2, pi / 2};
            return MeasurementScenario::planar(t0, t1);
        }
        case Figure::fig2: {
            const double t0[] = {0.0, 0.0, 0.0};
            const double t1[] = {alpha, alpha, alpha};
            return MeasurementScenario::planar(t0, t1);
        }
        case Figure::fig3: {
            const double t0[] = {alpha, 0.0, 0.0};
            const double t1[] = {-pi / 4, pi / 2, pi / 2};
            return MeasurementScenario::planar(t0, t1);
        }
        case Figure::custom:
            break;
    }
    throw std::invalid_argument("preset_scenario: no preset for a custom figure");
}

inline OperatorChoice preset_operator(Figure figure) {
    return figure == Figure::fig3 ? OperatorChoice::mk : OperatorChoice::svetlichny_minus;
}

/// Operator value and refined bound of one scenario. MK with odd N uses the
/// pair bound; every other case uses the local (Svetlichny) bound.
inline SweepRow evaluate_point(const BellPolynomial &poly, bool mk_operator, const MeasurementScenario &sc,
                               const QuantumState &state, double alpha) {
    const double value = expectation(state, realize(poly, sc));
    const int n = sc.n_parties();
    const BoundReport report = (mk_operator && n % 2 == 1) ? best_mk_bound(sc, state) : best_svetlichny_bound(sc, state);
    return {alpha, value, report.value, report.known_tsirelson, report.classical, report.algebraic};
}

/// Uniform alpha grid including both endpoints; rows ordered by sample index.
inline std::vector<SweepRow> figure_sweep(const SweepConfig &cfg) {
    if (cfg.samples < 2 || cfg.samples > 1'000'000) {
        throw std::invalid_argument("figure_sweep: samples must be in [2, 1e6]");
    }
    if (!(cfg.alpha_start < cfg.alpha_end)) {
        throw std::invalid_argument("figure_sweep: alpha_start must be < alpha_end");
    }
    if (cfg.figure == Figure::custom && !cfg.custom_scenario) {
        throw std::invalid_argument("figure_sweep: custom figure needs a scenario builder");
    }
    auto scenario_at = [&](double alpha) {
        return cfg.figure == Figure::custom ? cfg.custom_scenario(alpha) : preset_scenario(cfg.figure, alpha);
    };
    const OperatorChoice op = cfg.figure == Figure::custom ? cfg.custom_operator : preset_operator(cfg.figure);
    const int n = scenario_at(cfg.alpha_start).n_parties();
    const QuantumState state = cfg.state ? *cfg.state : ghz_state(n);
    if (state.n_parties() != n) {
        throw DimensionError("figure_sweep: state has " + std::to_string(state.n_parties()) + " qubits, scenario " +
                             std::to_string(n));
    }
    const BellPolynomial poly = operator_polynomial(op, n);

    std::vector<SweepRow> rows(static_cast<std::size_t>(cfg.samples));
    const double step = (cfg.alpha_end - cfg.alpha_start) / (cfg.samples - 1);
    parallel_for(rows.size(), [&](std::size_t k) {
        const double alpha = (k + 1 == rows.size()) ? cfg.alpha_end : cfg.alpha_start + step * static_cast<double>(k);
        rows[k] = evaluate_point(poly, op == OperatorChoice::mk, scenario_at(alpha), state, alpha);
    });
    for (const auto &row : rows) {
        if (std::abs(row.operator_value) > row.refined_bound + 1e-9) {
            throw InvariantViolation("figure_sweep: |operator| " + format_double(std::abs(row.operator_value)) +
                                     " exceeds refined bound " + format_double(row.refined_bound) + " at alpha " +
                                     format_double(row.alpha));
        }
    }
    return rows;
}

inline void write_sweep_csv(std::ostream &out, const std::vector<SweepRow> &rows) {
    out << "alpha,operator_value,refined_bound,known_tsirelson,classical_bound,algebraic_bound\n";
    auto num = [](double v) { return format_double(v, 15); };
    for (const auto &r : rows) {
        out << num(r.alpha) << ',' << num(r.operator_value) << ',' << num(r.refined_bound) << ','
            << num(r.known_tsirelson) << ',' << num(r.classical_bound) << ',' << num(r.algebraic_bound) << '\n';
    }
}

// ---------------------------------------------------------------------------
// Randomized verification harness.

struct HarnessReport {
    int trials = 0;
    int mixed_trials = 0;
    double worst_slack_svetlichny = std::numeric_limits<double>::infinity();
    double worst_slack_mk = std::numeric_limits<double>::infinity();
    double worst_slack_covariance = std::numeric_limits<double>::infinity();
    double worst_psd_eigen = std::numeric_limits<double>::infinity();
    int violations = 0;
};

namespace detail {

struct TrialOutcome {
    bool mixed = false;
    double slack_svetlichny = std::numeric_limits<double>::infinity();
    double slack_mk = std::numeric_limits<double>::infinity();
    double slack_covariance = std::numeric_limits<double>::infinity();
    double psd_eigen = std::numeric_limits<double>::infinity();
    int violations = 0;
};

struct PolynomialSet {
    BellPolynomial plus;
    BellPolynomial minus;
    BellPolynomial mk;
};

inline ComplexMatrix random_block_product(Rng &rng, const MeasurementScenario &sc, const std::vector<int> &block) {
    std::vector<SlotFactor> factors;
    factors.reserve(block.size());
    for (int party : block) {
        factors.push_back({party, sc.local(party, rng.uniform() < 0.5 ? 0 : 1)});
    }
    return sc.product(factors);
}

inline TrialOutcome run_trial(std::uint64_t seed, int n, const PolynomialSet &polys) {
    Rng rng(seed);
    TrialOutcome out;
    const ObservableFamily family = rng.uniform() < 0.5 ? ObservableFamily::planar : ObservableFamily::bloch;
    out.mixed = rng.uniform() < 0.25;
    const QuantumState state = out.mixed ? random_rank2_mixture(rng, n) : haar_state(rng, n);
    const MeasurementScenario sc = random_scenario(rng, n, family);

    auto note = [&](double &worst, double slack) {
        worst = std::min(worst, slack);
        if (slack < kViolationSlack) {
            ++out.violations;
        }
    };

    const BoundReport svet = best_svetlichny_bound(sc, state);
    for (const BellPolynomial *p : {&polys.plus, &polys.minus}) {
        note(out.slack_svetlichny, svet.value - std::abs(expectation(state, realize(*p, sc))));
    }
    const double mk_value = std::abs(expectation(state, realize(polys.mk, sc)));
    const double mk_bound = (n % 2 == 1) ? best_mk_bound(sc, state).value : svet.value;
    note(out.slack_mk, mk_bound - mk_value);

    // Random bipartition X | Y, both blocks nonempty.
    std::vector<int> xs;
    std::vector<int> ys;
    do {
        xs.clear();
        ys.clear();
        for (int p = 1; p <= n; ++p) {
            (rng.uniform() < 0.5 ? xs : ys).push_back(p);
        }
    } while (xs.empty() || ys.empty());
    const int m_parity = rng.uniform() < 0.5 ? 0 : 1;
    const ComplexMatrix xi = random_block_product(rng, sc, xs);
    const ComplexMatrix xj = random_block_product(rng, sc, xs);
    const ComplexMatrix yk = random_block_product(rng, sc, ys);
    const ComplexMatrix yi = random_block_product(rng, sc, ys);
    const ComplexMatrix yj = random_block_product(rng, sc, ys);
    const ComplexMatrix xk = random_block_product(rng, sc, xs);
    note(out.slack_covariance, covariance_inequality(state, xi, xj, yk, m_parity, BlockSide::x).slack);
    note(out.slack_covariance, covariance_inequality(state, yi, yj, xk, m_parity, BlockSide::y).slack);

    std::vector<ComplexMatrix> ops = {xi, xj, yk, xi * yk, xj * yk};
    for (int p = 1; p <= n; ++p) {
        ops.push_back(*sc.embedded(p, 0));
        ops.push_back(*sc.embedded(p, 1));
    }
    out.psd_eigen = covariance_witness(state, ops).min_eigenvalue();
    if (out.psd_eigen < -kPsdTol) {
        ++out.violations;
    }
    return out;
}

}  // namespace detail

/// Draws `trials` random (state, scenario) pairs with N cycling through
/// [n_min, n_max] and checks the refined Svetlichny and MK bounds, the two
/// covariance inequalities on a random bipartition, and covariance positivity.
///
/// Trial t uses Rng(stream_seed(seed, t)): family planar/bloch with
/// probability 1/2 each, a rank-2 mixture with probability 1/4 (else a Haar
/// pure state), then the scenario. Results do not depend on thread count.
inline HarnessReport verify_bounds_random(std::uint64_t seed, int trials, int n_min, int n_max) {
    if (n_min < 2 || n_max > 6 || n_min > n_max) {
        throw std::out_of_range("verify_bounds_random: need 2 <= n_min <= n_max <= 6");
    }
    if (trials < 0) {
        throw std::invalid_argument("verify_bounds_random: negative trial count");
    }
    std::vector<detail::PolynomialSet> polys;
    for (int n = n_min; n <= n_max; ++n) {
        polys.push_back({svetlichny(n, Parity::plus), svetlichny(n, Parity::minus), mk(n)});
    }
    const int span = n_max - n_min + 1;
    std::vector<detail::TrialOutcome> outcomes(static_cast<std::size_t>(trials));
    parallel_for(outcomes.size(), [&](std::size_t t) {
        const int k = static_cast<int>(t % static_cast<std::size_t>(span));
        outcomes[t] = detail::run_trial(stream_seed(seed, t), n_min + k, polys[k]);
    });

    HarnessReport report;
    report.trials = trials;
    for (const auto &o : outcomes) {
        report.mixed_trials += o.mixed ? 1 : 0;
        report.worst_slack_svetlichny = std::min(report.worst_slack_svetlichny, o.slack_svetlichny);
        report.worst_slack_mk = std::min(report.worst_slack_mk, o.slack_mk);
        report.worst_slack_covariance = std::min(report.worst_slack_covariance, o.slack_covariance);
        report.worst_psd_eigen = std::min(report.worst_psd_eigen, o.psd_eigen);
        report.violations += o.violations;
    }
    return report;
}

inline std::string to_key_value(const HarnessReport &r) {
    auto num = [](double v) { return format_double(v, 15); };
    std::string out;
    out += "trials=" + std::to_string(r.trials) + '\n';
    out += "mixed_trials=" + std::to_string(r.mixed_trials) + '\n';
    out += "worst_slack_svetlichny=" + num(r.worst_slack_svetlichny) + '\n';
    out += "worst_slack_mk=" + num(r.worst_slack_mk) + '\n';
    out += "worst_slack_covariance=" + num(r.worst_slack_covariance) + '\n';
    out += "worst_psd_eigen=" + num(r.worst_psd_eigen) + '\n';
    out += "violations=" + std::to_string(r.violations) + '\n';
    return out;
}

}  // namespace bellbound
