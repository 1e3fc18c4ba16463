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

// Evaluates S_N^- and the Svetlichny bound on GHZ states with the
// standard planar settings, and the MK bound for odd N.

#include <iostream>
#include <numbers>
#include <vector>

#include "bellbound/bellbound.hpp"

int main() {
    using namespace bellbound;
    const double pi = std::numbers::pi;
    for (int n = 2; n <= 7; ++n) {
        std::vector<double> t0(n, 0.0);
        std::vector<double> t1(n, pi / 2);
        t0[0] = -pi / 4;
        t1[0] = pi / 4;
        const auto sc = MeasurementScenario::planar(t0, t1);
        const auto ghz = ghz_state(n);
        const double value = expectation(ghz, realize(svetlichny(n, Parity::minus), sc));
        const auto report = best_svetlichny_bound(sc, ghz);
        std::cout << "n=" << n << " svetlichny_value=" << format_double(value, 12)
                  << " bound=" << format_double(report.value, 12)
                  << " tsirelson=" << format_double(report.known_tsirelson, 12) << '\n';
    }
    return 0;
}
