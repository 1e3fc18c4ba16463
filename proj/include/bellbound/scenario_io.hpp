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
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "observables.hpp"
#include "text.hpp"

namespace bellbound {

/// Parses a radian value. Accepts plain decimals ("0.785") and fractional-pi
/// forms: "pi", "-pi", "pi/4", "-3pi/4", "3*pi/2", "0.5pi".
inline double parse_angle(std::string_view text) {
    const auto pos = text.find("pi");
    if (pos == std::string_view::npos) {
        return parse_double(text);
    }
    std::string_view coef = text.substr(0, pos);
    std::string_view rest = text.substr(pos + 2);
    if (!coef.empty() && coef.back() == '*') {
        coef.remove_suffix(1);
    }
    double factor = 1.0;
    if (coef == "-") {
        factor = -1.0;
    } else if (!coef.empty() && coef != "+") {
        factor = parse_double(coef);
    }
    double denom = 1.0;
    if (!rest.empty()) {
        if (rest.front() != '/') {
            throw ParseError("bad angle '" + std::string(text) + "'");
        }
        denom = parse_double(rest.substr(1));
        if (denom == 0.0) {
            throw ParseError("bad angle '" + std::string(text) + "': zero denominator");
        }
    }
    return factor * std::numbers::pi / denom;
}

// Scenario files:
//
//   parties N family planar      parties N family bloch
//   theta0 theta1                nx0 ny0 nz0 nx1 ny1 nz1
//   ... (N lines)                ... (N lines)
//
// Angles may use the fractional-pi syntax of parse_angle.

inline MeasurementScenario read_scenario(std::istream &in) {
    std::string line;
    if (!next_content_line(in, line)) {
        throw ParseError("scenario file: empty");
    }
    const auto header = split_whitespace(line);
    if (header.size() != 4 || header[0] != "parties" || header[2] != "family" ||
        (header[3] != "planar" && header[3] != "bloch")) {
        throw ParseError("scenario file: expected 'parties N family planar|bloch', got '" + line + "'");
    }
    const long long n = parse_integer(header[1]);
    if (n < 1 || n > kMaxParties) {
        throw ParseError("scenario file: party count " + header[1] + " outside [1, 12]");
    }
    const bool planar = header[3] == "planar";
    std::vector<double> theta0;
    std::vector<double> theta1;
    std::vector<std::array<std::array<double, 3>, 2>> dirs;
    for (long long k = 0; k < n; ++k) {
        if (!next_content_line(in, line)) {
            throw ParseError("scenario file: expected " + std::to_string(n) + " party lines");
        }
        const auto tok = split_whitespace(line);
        if (planar) {
            if (tok.size() != 2) {
                throw ParseError("scenario file: planar line needs 'theta0 theta1', got '" + line + "'");
            }
            theta0.push_back(parse_angle(tok[0]));
            theta1.push_back(parse_angle(tok[1]));
        } else {
            if (tok.size() != 6) {
                throw ParseError("scenario file: bloch line needs six reals, got '" + line + "'");
            }
            std::array<std::array<double, 3>, 2> d{};
            for (int i = 0; i < 6; ++i) {
                d[i / 3][i % 3] = parse_double(tok[i]);
            }
            dirs.push_back(d);
        }
    }
    if (next_content_line(in, line)) {
        throw ParseError("scenario file: unexpected trailing line '" + line + "'");
    }
    try {
        return planar ? MeasurementScenario::planar(theta0, theta1) : MeasurementScenario::bloch(dirs);
    } catch (const std::invalid_argument &e) {
        throw ParseError(std::string("scenario file rejected: ") + e.what());
    }
}

inline MeasurementScenario load_scenario_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open scenario file '" + path + "'");
    }
    return read_scenario(in);
}

/// Writes a planar scenario in the file format above (shortest round-trip decimals).
inline void write_planar_scenario(std::ostream &out, const PlanarAngles &angles) {
    out << "parties " << angles.theta0.size() << " family planar\n";
    for (std::size_t k = 0; k < angles.theta0.size(); ++k) {
        out << format_double(angles.theta0[k]) << ' ' << format_double(angles.theta1[k]) << '\n';
    }
}

}  // namespace bellbound
