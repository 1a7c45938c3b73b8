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

#ifndef QBOUND_BNB_HPP
#define QBOUND_BNB_HPP

#include <cstdint>
#include <functional>
#include <optional>

#include "qbound/descent.hpp"
#include "qbound/qubo.hpp"

namespace qbound {

enum class BnbStatus { Optimal, TimeLimit, NodeLimit, MemoryAbort };

const char* to_string(BnbStatus s);

struct BnbProgress {
    std::uint64_t nodes = 0;
    std::optional<double> incumbent;
    double bound = 0.0;
    double gap_percent = 0.0;
    double time_s = 0.0;
};

struct BnbConfig {
    /// Per-node descent budget; a handful of warmstarted iterations per
    /// node trades bound tightness for node throughput.
    DescentParams node_params{.max_outer = 5};
    /// Root coldstart gets a larger budget since everything below inherits
    /// its shift; a weaker root bound only costs nodes, never correctness.
    DescentParams root_params{.max_outer = 2000, .bisection_iters = 10};
    double time_limit_s = 3600.0;
    std::uint64_t node_limit = 0;  // 0 = unlimited
    /// Known feasible objective value injected as the starting incumbent
    /// (no assignment attached); must be attained by some binary point.
    std::optional<double> injected_primal;
    /// Project parent shifts onto children; disabling forces a trivial
    /// coldstart at every node.
    bool use_warmstart = true;
    /// Prune on bound < incumbent + 1; defaults to on iff the instance
    /// data is integer-valued.
    std::optional<bool> integer_rule;
    std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
    std::function<void(const BnbProgress&)> on_progress;
    std::uint64_t progress_interval = 256;
};

struct BnbResult {
    BnbStatus status = BnbStatus::Optimal;
    std::optional<double> incumbent_value;
    std::optional<Assignment> incumbent_x;
    double global_bound = 0.0;
    double rel_gap_percent = 0.0;
    std::uint64_t nodes = 0;
    double wall_time_s = 0.0;
    // run statistics
    std::uint64_t total_descent_iterations = 0;
    std::uint64_t child_coldstarts = 0;  // children whose warmstart fell through
};

/// 100 * (upper - lower) / max(|lower|, 1e-10), clamped to [0, 1e6] for
/// display sanity. Requires upper >= lower up to roundoff.
double relative_gap(double upper, double lower);

enum class ChildStartKind { Warm, Bumped, Cold };

struct ChildStart {
    PlanePoint point;
    ChildStartKind kind = ChildStartKind::Warm;
};

/// Projects a parent shift onto a child subproblem (coordinate k deleted;
/// principal submatrices preserve semidefiniteness) and rebuilds a plane
/// point via the feasible-point construction. If strict feasibility fails
/// it bumps the shift once by the strictness margin, then falls back to the
/// child's trivial shift; it never fails as long as the coldstart works.
ChildStart warmstart_child(const Eigen::VectorXd& parent_shift, Eigen::Index k,
                           const LmiSystem& child_sys,
                           std::uint64_t seed = 0x9e3779b97f4a7c15ULL);

/// Best-bound branch-and-bound maximization with plane-projection dual
/// bounds at every node. Branches on the free variable with the smallest
/// original index; leaves are evaluated exactly. Exhaustive-correct: with
/// no limits configured the result is the global maximum.
BnbResult solve(const QuboProblem& p, const BnbConfig& cfg = {});

}  // namespace qbound

#endif  // QBOUND_BNB_HPP
