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

#ifndef QBOUND_DESCENT_HPP
#define QBOUND_DESCENT_HPP

#include <cstdint>
#include <vector>

#include "qbound/lmi.hpp"

namespace qbound {

struct DescentParams {
    int max_outer = 50000;       // N: outer iteration limit
    int bisection_iters = 5;     // k1: line-search bisection steps
    int boundary_limit = 2;      // k2: consecutive boundary-confined iterations before stopping
    double g_tol = 1e-10;        // stationarity: ||g|| <= g_tol * (1 + ||z||^2)
    double step_tol = 1e-12;     // boundary stall: t* <= step_tol * (1 + ||u||)
    std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
    bool keep_trace = false;
};

enum class Termination {
    IterLimit,        // ran all N outer iterations
    BoundaryStall,    // k2 consecutive iterations confined to the boundary
    StationaryPoint,  // gradient direction vanished
    Degenerate,       // oracle hit a degenerate direction; bound from the last good iterate
};

const char* to_string(Termination t);

struct DescentTracePoint {
    double f = 0.0;     // depth value at the iterate
    double step = 0.0;  // distance moved in this outer iteration
};

struct DescentResult {
    Eigen::VectorXd u_hat;  // final shift
    double bound = 0.0;     // r_hat + f(u_hat): valid QUBO upper bound
    int outer_iters = 0;
    Termination termination = Termination::IterLimit;
    std::vector<DescentTracePoint> trace;  // populated when params.keep_trace
};

/// Plane-projection descent: shoot a ray along the negative gradient
/// direction to the slice boundary, bisect the segment with gradient sign
/// tests, and move to the best interior endpoint. Every iterate's
/// r_hat + f(u) is a valid QUBO upper bound, so stopping anywhere is safe.
/// The start point must be interior (see initial_feasible_point).
DescentResult descend(const LmiSystem& sys, const PlanePoint& start, const DescentParams& params);

}  // namespace qbound

#endif  // QBOUND_DESCENT_HPP
