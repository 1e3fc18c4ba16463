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

#include <stdexcept>
#include <string>

namespace bellbound {

/// Operand dimensions disagree, or a result would exceed the 2^12 cap.
class DimensionError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical or algebraic invariant failed at runtime (non-Hermitian
/// operator, correlation overshoot, non-commuting blocks, ...).
class InvariantViolation : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Malformed text input (state, scenario, polynomial files).
class ParseError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

}  // namespace bellbound
