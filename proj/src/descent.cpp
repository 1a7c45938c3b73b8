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

#include "qbound/descent.hpp"

#include <cmath>
#include <optional>
#include <utility>

namespace qbound {

const char* to_string(Termination t) {
    switch (t) {
        case Termination::IterLimit: return "IterLimit";
        case Termination::BoundaryStall: return "BoundaryStall";
        case Termination::StationaryPoint: return "StationaryPoint";
        case Termination::Degenerate: return "Degenerate";
    }
    return "Unknown";
}

DescentResult descend(const LmiSystem& sys, const PlanePoint& start, const DescentParams& params) {
    if (params.max_outer < 0) throw InputError("descend: negative iteration limit");
    if (params.bisection_iters < 1 || params.boundary_limit < 1)
        throw InputError("descend: bisection and boundary limits must be >= 1");

    auto cache = OracleCache::build(sys, start);
    if (!cache) throw NumericError("descend: start point is not interior");

    const double r_hat = start.r_hat;
    DescentResult res;

    // f <= 0 everywhere, so r_hat alone is a valid (if crude) bound; it
    // backs the case where even the first evaluation is degenerate.
    if (cache->degenerate()) {
        res.u_hat = start.u;
        res.bound = r_hat;
        res.termination = Termination::Degenerate;
        return res;
    }

    double bound = r_hat + cache->value();
    if (params.keep_trace) res.trace.push_back({cache->value(), 0.0});

    Termination term = Termination::IterLimit;
    int completed = 0;
    int boundary_streak = 0;

    while (completed < params.max_outer) {
        const Eigen::VectorXd g = cache->gradient_direction();
        const double g_norm = g.norm();
        if (g_norm <= params.g_tol * cache->tolerance_scale()) {
            term = Termination::StationaryPoint;
            break;
        }
        const Eigen::VectorXd dir = g / g_norm;

        double t_star;
        try {
            t_star = cache->boundary_ray(-dir, params.seed);
        } catch (const NumericError&) {
            term = Termination::Degenerate;
            break;
        }

        if (t_star <= params.step_tol * (1.0 + cache->point().u.norm())) {
            // No room to move along this ray: a boundary-confined iteration.
            ++completed;
            if (++boundary_streak >= params.boundary_limit) {
                term = Termination::BoundaryStall;
                break;
            }
            continue;
        }

        Eigen::VectorXd u_minus = cache->point().u;
        Eigen::VectorXd u_plus = u_minus - t_star * dir;
        std::optional<OracleCache> minus_cache;  // set once u_minus leaves the iterate
        bool boundary = true;
        bool abort_degenerate = false;
        bool abort_stall = false;

        for (int q = 0; q < params.bisection_iters; ++q) {
            Eigen::VectorXd mid = 0.5 * (u_plus + u_minus);
            auto mid_cache = OracleCache::build(sys, PlanePoint{mid, r_hat});
            if (!mid_cache) {
                // Numerical boundary contact: retract toward the evaluable
                // endpoint once, then give up on the whole run.
                mid += 1e-6 * (u_minus - mid);
                mid_cache = OracleCache::build(sys, PlanePoint{mid, r_hat});
                if (!mid_cache) {
                    abort_stall = true;
                    break;
                }
            }
            if (mid_cache->degenerate()) {
                abort_degenerate = true;
                break;
            }
            if (mid_cache->gradient_direction().dot(u_plus - u_minus) > 0.0) {
                u_plus = std::move(mid);
                boundary = false;
            } else {
                u_minus = std::move(mid);
                minus_cache = std::move(mid_cache);
            }
        }
        if (abort_degenerate) {
            term = Termination::Degenerate;
            break;
        }
        if (abort_stall) {
            term = Termination::BoundaryStall;
            break;
        }

        // The new iterate is the bisection's argmin approximation: the
        // midpoint of the final bracket, accepted only when it is evaluable
        // and does not sit above the u_minus chain (whose f never increases).
        // Falling back to u_minus keeps the iterate oracle-evaluable; taking
        // the midpoint when possible is what makes tiny brackets progress
        // instead of repeating the identical iteration forever.
        const double f_minus = minus_cache ? minus_cache->value() : cache->value();
        auto cand_cache =
            OracleCache::build(sys, PlanePoint{0.5 * (u_minus + u_plus), r_hat});
        const bool take_cand =
            cand_cache && !cand_cache->degenerate() && cand_cache->value() <= f_minus;

        double step = 0.0;
        if (take_cand) {
            step = (cand_cache->point().u - cache->point().u).norm();
            cache = std::move(cand_cache);
            bound = r_hat + cache->value();
        } else if (minus_cache) {
            step = (minus_cache->point().u - cache->point().u).norm();
            cache = std::move(minus_cache);
            bound = r_hat + cache->value();
        }
        ++completed;
        if (params.keep_trace) res.trace.push_back({cache->value(), step});

        if (boundary) {
            if (++boundary_streak >= params.boundary_limit) {
                term = Termination::BoundaryStall;
                break;
            }
        } else {
            boundary_streak = 0;
        }
    }

    res.u_hat = cache->point().u;
    res.bound = bound;
    res.outer_iters = completed;
    res.termination = term;
    return res;
}

}  // namespace qbound
