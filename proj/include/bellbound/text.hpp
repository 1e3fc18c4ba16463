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

#include <charconv>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "errors.hpp"

namespace bellbound {

/// Locale-independent decimal rendering. With no precision the shortest
/// representation that round-trips is produced.
inline std::string format_double(double value, std::optional<int> significant = std::nullopt) {
    char buf[64];
    const auto res = significant ? std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, *significant)
                                 : std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

/// Parses the whole token as a decimal double ('.' separator, no locale).
inline double parse_double(std::string_view token) {
    if (!token.empty() && token.front() == '+') {
        token.remove_prefix(1);
    }
    double value = 0.0;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
    if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
        throw ParseError("not a number: '" + std::string(token) + "'");
    }
    return value;
}

inline long long parse_integer(std::string_view token) {
    if (!token.empty() && token.front() == '+') {
        token.remove_prefix(1);
    }
    long long value = 0;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
    if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
        throw ParseError("not an integer: '" + std::string(token) + "'");
    }
    return value;
}

/// Whitespace-separated tokens of one line.
inline std::vector<std::string> split_whitespace(const std::string &line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    for (std::string tok; in >> tok;) {
        out.push_back(std::move(tok));
    }
    return out;
}

/// Next line that is not blank and does not start with '#'.
inline bool next_content_line(std::istream &in, std::string &line) {
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        const auto first = line.find_first_not_of(" \t");
        if (first != std::string::npos && line[first] != '#') {
            return true;
        }
    }
    return false;
}

}  // namespace bellbound
