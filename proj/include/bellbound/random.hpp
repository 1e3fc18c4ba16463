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

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "matrix.hpp"
#include "observables.hpp"
#include "state.hpp"

namespace bellbound {

/// Portable pseudo-random source.
///
/// Engine: std::mt19937_64, whose state transition and output are fixed by
/// the C++ standard. Derived draws avoid std::*_distribution (whose output
/// is implementation-defined):
///   uniform()  = (engine() >> 11) * 2^-53                        in [0, 1)
///   normal()   = sqrt(-2 ln(1 - u1)) * cos(2 pi u2)              (Box-Muller,
///                two uniforms per call, the sine branch is discarded)
class Rng {
   public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal() {
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

   private:
    std::mt19937_64 engine_;
};

/// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed of sub-stream `index` of a run seeded with `seed`.
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) { return mix64(seed ^ mix64(index)); }

/// Haar-random pure state: i.i.d. standard complex Gaussian amplitudes, normalized.
inline QuantumState haar_state(Rng &rng, int n_qubits) {
    std::vector<Complex> amps(std::size_t{1} << n_qubits);
    double norm2 = 0.0;
    for (auto &a : amps) {
        const double re = rng.normal();
        const double im = rng.normal();
        a = {re, im};
        norm2 += re * re + im * im;
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto &a : amps) {
        a *= inv;
    }
    return QuantumState::pure(std::move(amps));
}

/// w |psi1><psi1| + (1 - w) |psi2><psi2| with w uniform on [0, 1) and Haar psi1, psi2.
inline QuantumState random_rank2_mixture(Rng &rng, int n_qubits) {
    const double w = rng.uniform();
    const std::pair<double, QuantumState> parts[] = {{w, haar_state(rng, n_qubits)},
                                                     {1.0 - w, haar_state(rng, n_qubits)}};
    return QuantumState::mixture(parts);
}

/// Unit vector uniform on the sphere (normalized Gaussian triple).
inline std::array<double, 3> random_direction(Rng &rng) {
    for (;;) {
        std::array<double, 3> v{rng.normal(), rng.normal(), rng.normal()};
        const double norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
        if (norm > 1e-12) {
            return {v[0] / norm, v[1] / norm, v[2] / norm};
        }
    }
}

/// Deterministic random scenario. Planar: per party, theta_0 then theta_1,
/// each uniform on [0, 2 pi). Bloch: per party, direction of setting 0 then 1.
inline MeasurementScenario random_scenario(Rng &rng, int n, ObservableFamily family) {
    if (n < 1 || n > kMaxParties) {
        throw std::out_of_range("random_scenario: n outside [1, 12]");
    }
    if (family == ObservableFamily::planar) {
        std::vector<double> t0(n);
        std::vector<double> t1(n);
        for (int k = 0; k < n; ++k) {
            t0[k] = rng.uniform(0.0, 2.0 * std::numbers::pi);
            t1[k] = rng.uniform(0.0, 2.0 * std::numbers::pi);
        }
        return MeasurementScenario::planar(t0, t1);
    }
    if (family != ObservableFamily::bloch) {
        throw std::invalid_argument("random_scenario: family must be planar or bloch");
    }
    std::vector<std::array<std::array<double, 3>, 2>> dirs(n);
    for (auto &d : dirs) {
        d[0] = random_direction(rng);
        d[1] = random_direction(rng);
    }
    return MeasurementScenario::bloch(dirs);
}

inline MeasurementScenario random_scenario(std::uint64_t seed, int n, ObservableFamily family) {
    Rng rng(seed);
    return random_scenario(rng, n, family);
}

}  // namespace bellbound
