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

#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "state.hpp"
#include "text.hpp"

namespace bellbound {

// Plain-text state files:
//
//   pure N            mixed N
//   re im             re,im re,im ... (2^N pairs per row)
//   ... (2^N lines)   ... (2^N rows)
//
// Blank lines and '#' comments are skipped.

inline QuantumState read_state(std::istream &in) {
    std::string line;
    if (!next_content_line(in, line)) {
        throw ParseError("state file: empty");
    }
    const auto header = split_whitespace(line);
    if (header.size() != 2 || (header[0] != "pure" && header[0] != "mixed")) {
        throw ParseError("state file: expected 'pure N' or 'mixed N', got '" + line + "'");
    }
    const long long n = parse_integer(header[1]);
    if (n < 1 || n > kMaxParties) {
        throw ParseError("state file: N = " + header[1] + " outside [1, 12]");
    }
    const std::size_t d = std::size_t{1} << n;
    auto finish = [&](QuantumState state) {
        if (next_content_line(in, line)) {
            throw ParseError("state file: unexpected trailing line '" + line + "'");
        }
        return state;
    };
    auto want_line = [&](std::size_t row) {
        if (!next_content_line(in, line)) {
            throw ParseError("state file: expected " + std::to_string(d) + " data lines, got " + std::to_string(row));
        }
        return split_whitespace(line);
    };
    try {
        if (header[0] == "pure") {
            std::vector<Complex> amps(d);
            for (std::size_t r = 0; r < d; ++r) {
                const auto tok = want_line(r);
                if (tok.size() != 2) {
                    throw ParseError("state file: amplitude line needs 're im', got '" + line + "'");
                }
                amps[r] = {parse_double(tok[0]), parse_double(tok[1])};
            }
            return finish(QuantumState::pure(std::move(amps)));
        }
        ComplexMatrix rho(d);
        for (std::size_t r = 0; r < d; ++r) {
            const auto tok = want_line(r);
            if (tok.size() != d) {
                throw ParseError("state file: density row " + std::to_string(r) + " has " + std::to_string(tok.size()) +
                                 " entries, expected " + std::to_string(d));
            }
            for (std::size_t c = 0; c < d; ++c) {
                const auto comma = tok[c].find(',');
                if (comma == std::string::npos) {
                    throw ParseError("state file: density entry must be 're,im', got '" + tok[c] + "'");
                }
                rho(r, c) = {parse_double(std::string_view(tok[c]).substr(0, comma)),
                             parse_double(std::string_view(tok[c]).substr(comma + 1))};
            }
        }
        return finish(QuantumState::mixed(std::move(rho)));
    } catch (const InvariantViolation &e) {
        throw ParseError(std::string("state file rejected: ") + e.what());
    }
}

inline void write_state(std::ostream &out, const QuantumState &state) {
    const std::size_t d = state.dim();
    if (state.is_pure()) {
        out << "pure " << state.n_parties() << '\n';
        for (const auto &a : state.amplitudes()) {
            out << format_double(a.real()) << ' ' << format_double(a.imag()) << '\n';
        }
        return;
    }
    out << "mixed " << state.n_parties() << '\n';
    const ComplexMatrix rho = state.density();
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            out << (c ? " " : "") << format_double(rho(r, c).real()) << ',' << format_double(rho(r, c).imag());
        }
        out << '\n';
    }
}

inline QuantumState load_state_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open state file '" + path + "'");
    }
    return read_state(in);
}

}  // namespace bellbound
