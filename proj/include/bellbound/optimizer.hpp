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
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "bounds.hpp"
#include "observables.hpp"
#include "polynomial.hpp"
#include "random.hpp"
#include "state.hpp"

namespace bellbound {

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;  // minimum found
    int evals = 0;
    bool converged = false;  // simplex diameter fell below tol
};

/// Derivative-free minimization with reflection 1, expansion 2, contraction
/// 0.5 and shrink 0.5. Stops when every vertex lies within `tol` (max-norm)
/// of the best one, or after `max_evals` objective evaluations.
inline NelderMeadResult nelder_mead(const std::function<double(const std::vector<double> &)> &f,
                                    std::vector<double> x0, double step, double tol, int max_evals) {
    const std::size_t dim = x0.size();
    std::vector<std::vector<double>> simplex(dim + 1, x0);
    for (std::size_t i = 0; i < dim; ++i) {
        simplex[i + 1][i] += step;
    }
    std::vector<double> fx(dim + 1);
    int evals = 0;
    auto eval = [&](const std::vector<double> &x) {
        ++evals;
        return f(x);
    };
    for (std::size_t i = 0; i <= dim; ++i) {
        fx[i] = eval(simplex[i]);
    }
    std::vector<std::size_t> order(dim + 1);
    auto diameter = [&] {
        double d = 0.0;
        for (std::size_t i = 1; i <= dim; ++i) {
            for (std::size_t k = 0; k < dim; ++k) {
                d = std::max(d, std::abs(simplex[order[i]][k] - simplex[order[0]][k]));
            }
        }
        return d;
    };
    auto along = [&](const std::vector<double> &centroid, const std::vector<double> &worst, double coef) {
        std::vector<double> x(dim);
        for (std::size_t k = 0; k < dim; ++k) {
            x[k] = centroid[k] + coef * (centroid[k] - worst[k]);
        }
        return x;
    };

    bool converged = false;
    for (;;) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fx[a] < fx[b]; });
        if (diameter() < tol) {
            converged = true;
            break;
        }
        if (evals >= max_evals) {
            break;
        }
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second_worst = order[dim - 1];
        std::vector<double> centroid(dim, 0.0);
        for (std::size_t i = 0; i < dim; ++i) {
            for (std::size_t k = 0; k < dim; ++k) {
                centroid[k] += simplex[order[i]][k] / static_cast<double>(dim);
            }
        }
        const auto reflected = along(centroid, simplex[worst], 1.0);
        const double f_reflected = eval(reflected);
        if (f_reflected < fx[best]) {
            const auto expanded = along(centroid, simplex[worst], 2.0);
            const double f_expanded = eval(expanded);
            if (f_expanded < f_reflected) {
                simplex[worst] = expanded;
                fx[worst] = f_expanded;
            } else {
                simplex[worst] = reflected;
                fx[worst] = f_reflected;
            }
            continue;
        }
        if (f_reflected < fx[second_worst]) {
            simplex[worst] = reflected;
            fx[worst] = f_reflected;
            continue;
        }
        const bool outside = f_reflected < fx[worst];
        const auto contracted = along(centroid, simplex[worst], outside ? 0.5 : -0.5);
        const double f_contracted = eval(contracted);
        if (f_contracted < (outside ? f_reflected : fx[worst])) {
            simplex[worst] = contracted;
            fx[worst] = f_contracted;
            continue;
        }
        for (std::size_t i = 1; i <= dim; ++i) {
            auto &v = simplex[order[i]];
            for (std::size_t k = 0; k < dim; ++k) {
                v[k] = simplex[best][k] + 0.5 * (v[k] - simplex[best][k]);
            }
            fx[order[i]] = eval(v);
        }
    }
    return {simplex[order.front()], fx[order.front()], evals, converged};
}

enum class Objective { max_svetlichny, max_mk, max_gap };

struct OptimizerConfig {
    int n_parties = 3;
    Objective objective = Objective::max_svetlichny;
    ObservableFamily family = ObservableFamily::planar;
    int multistarts = 8;
    int max_evals = 20000;  // per start
    double tol = 1e-9;
    std::uint64_t seed = 1;
};

struct OptimizerResult {
    std::vector<double> params;
    double value = 0.0;
    int evals = 0;
    bool converged = false;
};

/// Parameter vector -> scenario. Planar: (theta_0, theta_1) per party.
/// Bloch: (polar, azimuth) for setting 0 then setting 1, per party.
inline MeasurementScenario scenario_from_params(ObservableFamily family, int n_parties,
                                                const std::vector<double> &params) {
    if (family == ObservableFamily::planar) {
        std::vector<double> t0(n_parties);
        std::vector<double> t1(n_parties);
        for (int k = 0; k < n_parties; ++k) {
            t0[k] = params[2 * k];
            t1[k] = params[2 * k + 1];
        }
        return MeasurementScenario::planar(t0, t1);
    }
    std::vector<std::array<std::array<double, 3>, 2>> dirs(n_parties);
    for (int k = 0; k < n_parties; ++k) {
        for (int i = 0; i < 2; ++i) {
            const double polar = params[4 * k + 2 * i];
            const double azimuth = params[4 * k + 2 * i + 1];
            dirs[k][i] = {std::sin(polar) * std::cos(azimuth), std::sin(polar) * std::sin(azimuth), std::cos(polar)};
        }
    }
    return MeasurementScenario::bloch(dirs);
}

inline int parameter_count(ObservableFamily family, int n_parties) {
    return family == ObservableFamily::planar ? 2 * n_parties : 4 * n_parties;
}

/// Objective value at a parameter point on GHZ_N: |<S_N^->|, |<M_N>|, or
/// 2^(N-1) sqrt(2) minus the best refined Svetlichny bound.
inline double objective_value(const OptimizerConfig &cfg, const BellPolynomial &poly, const QuantumState &ghz,
                              const std::vector<double> &params) {
    const MeasurementScenario sc = scenario_from_params(cfg.family, cfg.n_parties, params);
    if (cfg.objective == Objective::max_gap) {
        const BoundReport r = best_svetlichny_bound(sc, ghz);
        return r.known_tsirelson - r.value;
    }
    return std::abs(expectation(ghz, realize(poly, sc)));
}

/// Multistart simplex search: each start is uniform on [0, 2 pi)^dim from
/// Rng(stream_seed(seed, start)); the best refined point over all starts wins.
inline OptimizerResult maximize_violation(const OptimizerConfig &cfg) {
    if (cfg.n_parties < 2 || cfg.n_parties > 8) {
        throw std::out_of_range("maximize_violation: n_parties outside [2, 8]");
    }
    if (cfg.multistarts < 1 || !(cfg.tol > 0.0) || cfg.max_evals < 1) {
        throw std::invalid_argument("maximize_violation: need multistarts >= 1, tol > 0, max_evals >= 1");
    }
    if (cfg.family != ObservableFamily::planar && cfg.family != ObservableFamily::bloch) {
        throw std::invalid_argument("maximize_violation: family must be planar or bloch");
    }
    const QuantumState ghz = ghz_state(cfg.n_parties);
    const BellPolynomial poly =
        cfg.objective == Objective::max_mk ? mk(cfg.n_parties) : svetlichny(cfg.n_parties, Parity::minus);
    const auto dim = static_cast<std::size_t>(parameter_count(cfg.family, cfg.n_parties));
    auto negated = [&](const std::vector<double> &x) { return -objective_value(cfg, poly, ghz, x); };

    OptimizerResult best;
    bool have = false;
    for (int start = 0; start < cfg.multistarts; ++start) {
        Rng rng(stream_seed(cfg.seed, static_cast<std::uint64_t>(start)));
        std::vector<double> x0(dim);
        for (auto &x : x0) {
            x = rng.uniform(0.0, 2.0 * std::numbers::pi);
        }
        const auto run = nelder_mead(negated, x0, 0.5, cfg.tol, cfg.max_evals);
        best.evals += run.evals;
        if (!have || -run.value > best.value) {
            have = true;
            best.params = run.x;
            best.value = -run.value;
            best.converged = run.converged;
        }
    }
    return best;
}

}  // namespace bellbound
