// Copyright 2026 The qbound authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QBOUND_ERRORS_HPP
#define QBOUND_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qbound {

/// Malformed caller input: dimension mismatches, out-of-range indices,
/// unparseable instance files.
class InputError : public std::invalid_argument {
 public:
    using std::invalid_argument::invalid_argument;
};

/// A floating-point computation failed in a way the caller cannot repair
/// (eigenvalue iteration stagnated, a ray that must hit the feasible
/// boundary did not, a pushed point failed its interiority check).
class NumericError : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

/// Instance-file parse failure; remembers the 1-based offending line.
class ParseError : public InputError {
 public:
    ParseError(int line, const std::string& what)
        : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

 private:
    int line_;
};

}  // namespace qbound

#endif  // QBOUND_ERRORS_HPP
