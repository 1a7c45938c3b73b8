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

#ifndef QBOUND_IO_HPP
#define QBOUND_IO_HPP

#include <string>
#include <string_view>

#include <json.hpp>

#include "qbound/bnb.hpp"
#include "qbound/descent.hpp"
#include "qbound/qubo.hpp"

namespace qbound {

/// Sparse-triplet QUBO format. Line-oriented UTF-8 text; '#' starts a
/// comment; blank lines allowed. First content line is "n m", followed by
/// exactly m records "i j v" with 1-based indices and i <= j. A diagonal
/// record adds v to the linear term (x^2 = x on binaries); an off-diagonal
/// record gives the product x_i x_j the coefficient v (stored as v/2 on
/// both sides of Q). Duplicate (i, j) pairs are rejected.
QuboProblem parse_triplet(std::string_view text);

/// Weighted edge-list MaxCut format: "n m" header then m records "i j w"
/// with i != j, duplicate edges rejected. Converted so that
/// evaluate_qubo(x) is the cut value of the partition induced by x:
/// c_i = sum of incident weights, Q_ij = Q_ji = -w_ij.
QuboProblem parse_maxcut(std::string_view text);

/// Inverse of parse_triplet for offset-free problems: nonzero diagonal and
/// upper-triangle entries in deterministic order. Numbers are printed with
/// just enough digits to reparse bit-exactly.
std::string serialize_triplet(const QuboProblem& p);

enum class InstanceFormat { Triplet, MaxCut };

/// Reads and parses a whole instance file. Throws InputError when the file
/// cannot be read, ParseError on malformed content.
QuboProblem load_instance(const std::string& path, InstanceFormat format);

// --- result serialization -------------------------------------------------
//
// All run outcomes share one JSON schema: the keys below are always
// present, null where a field does not apply to the subcommand.
// Subcommand-specific extras (e.g. the bound run's u_hat) follow them.

nlohmann::ordered_json solve_result_json(const BnbResult& res, std::uint64_t seed,
                                         nlohmann::ordered_json params);
nlohmann::ordered_json bound_result_json(const DescentResult& res, double bound_with_offset,
                                         std::uint64_t seed, nlohmann::ordered_json params,
                                         double wall_time_s);
nlohmann::ordered_json brute_result_json(const BruteForceResult& res, std::uint64_t seed,
                                         nlohmann::ordered_json params, double wall_time_s);
nlohmann::ordered_json convert_result_json(const std::string& output_path, std::uint64_t seed,
                                           nlohmann::ordered_json params, double wall_time_s);

/// One line of the structured progress stream.
nlohmann::ordered_json progress_json(const BnbProgress& p);

}  // namespace qbound

#endif  // QBOUND_IO_HPP
