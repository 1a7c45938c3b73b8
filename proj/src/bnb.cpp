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

#include "qbound/bnb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

#include "qbound/lmi.hpp"

namespace qbound {

const char* to_string(BnbStatus s) {
    switch (s) {
        case BnbStatus::Optimal: return "Optimal";
        case BnbStatus::TimeLimit: return "TimeLimit";
        case BnbStatus::NodeLimit: return "NodeLimit";
        case BnbStatus::MemoryAbort: return "MemoryAbort";
    }
    return "Unknown";
}

double relative_gap(double upper, double lower) {
    const double scale = std::max(std::abs(lower), 1e-10);
    if (upper < lower - 1e-9 * (1.0 + std::abs(lower)))
        throw InputError("relative_gap: upper bound below lower bound");
    const double gap = 100.0 * (upper - lower) / scale;
    return std::clamp(gap, 0.0, 1e6);
}

ChildStart warmstart_child(const Eigen::VectorXd& parent_shift, Eigen::Index k,
                           const LmiSystem& child_sys, std::uint64_t seed) {
    const Eigen::Index n_parent = parent_shift.size();
    if (k < 0 || k >= n_parent) throw InputError("warmstart_child: index out of range");
    if (child_sys.n() != n_parent - 1)
        throw InputError("warmstart_child: child dimension mismatch");

    Eigen::VectorXd u_child(n_parent - 1);
    u_child.head(k) = parent_shift.head(k);
    u_child.tail(n_parent - 1 - k) = parent_shift.tail(n_parent - 1 - k);

    try {
        return ChildStart{initial_feasible_point(child_sys, QcrShift{u_child}),
                          ChildStartKind::Warm};
    } catch (const NumericError&) {
    }

    // The projected shift sits on (or numerically past) the PSD boundary;
    // bump it by the strictness margin and retry once.
    try {
        const double lam =
            linalg::largest_eigenvalue(child_sys.problem().quadratic(), seed);
        const double margin = std::max(1.0, 0.01 * std::abs(lam));
        Eigen::VectorXd bumped = u_child.array() + margin;
        return ChildStart{initial_feasible_point(child_sys, QcrShift{std::move(bumped)}),
                          ChildStartKind::Bumped};
    } catch (const NumericError&) {
    }

    QcrShift cold = trivial_shift(child_sys.problem(), seed);
    return ChildStart{initial_feasible_point(child_sys, cold), ChildStartKind::Cold};
}

namespace {

struct BnbNode {
    std::vector<std::int8_t> fixed;  // -1 free, else the fixed bit; indexed by original variable
    Eigen::VectorXd shift;           // post-descent shift of this node's subproblem
    double bound = 0.0;
    int depth = 0;
    std::uint64_t seq = 0;
};

struct WeakestBoundFirst {
    bool operator()(const BnbNode& a, const BnbNode& b) const {
        if (a.bound != b.bound) return a.bound < b.bound;
        if (a.depth != b.depth) return a.depth < b.depth;
        return a.seq > b.seq;  // earlier insertion wins remaining ties
    }
};

QuboProblem reduce_to_node(const QuboProblem& root, const std::vector<std::int8_t>& fixed) {
    QuboProblem sub = root;
    Eigen::Index removed = 0;
    for (std::size_t orig = 0; orig < fixed.size(); ++orig) {
        if (fixed[orig] < 0) continue;
        sub = fix_variable(sub, static_cast<Eigen::Index>(orig) - removed, fixed[orig]);
        ++removed;
    }
    return sub;
}

class Clock {
 public:
    Clock() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

 private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace

BnbResult solve(const QuboProblem& root, const BnbConfig& cfg) {
    if (cfg.time_limit_s <= 0.0) throw InputError("solve: time limit must be positive");

    const Clock clock;
    const Eigen::Index n = root.size();
    const bool integer_rule = cfg.integer_rule.value_or(root.integer_valued());

    DescentParams node_params = cfg.node_params;
    DescentParams root_params = cfg.root_params;
    node_params.seed = cfg.seed;
    root_params.seed = cfg.seed;

    BnbResult res;
    if (cfg.injected_primal) res.incumbent_value = *cfg.injected_primal;

    auto try_update_incumbent = [&](double value, Assignment x) {
        if (!res.incumbent_value || value > *res.incumbent_value) {
            res.incumbent_value = value;
            res.incumbent_x = std::move(x);
        }
    };

    auto prunable = [&](double bound) {
        if (!res.incumbent_value) return false;
        const double inc = *res.incumbent_value;
        const double slack = 1e-9 * (1.0 + std::abs(inc));
        if (bound <= inc + slack) return true;
        // With integral data any improvement is >= 1, but only an integral
        // incumbent (a real leaf, not an arbitrary injection) licenses it.
        return integer_rule && inc == std::floor(inc) && bound < inc + 1.0 - slack;
    };

    // Root bound from a coldstart with the larger budget.
    const LmiSystem root_sys(root);
    const QcrShift root_shift = trivial_shift(root, cfg.seed);
    const PlanePoint root_point = initial_feasible_point(root_sys, root_shift);
    const DescentResult root_descent = descend(root_sys, root_point, root_params);
    res.total_descent_iterations += static_cast<std::uint64_t>(root_descent.outer_iters);

    std::priority_queue<BnbNode, std::vector<BnbNode>, WeakestBoundFirst> heap;
    std::uint64_t next_seq = 0;
    heap.push(BnbNode{std::vector<std::int8_t>(static_cast<std::size_t>(n), -1),
                      root_descent.u_hat, root.offset() + root_descent.bound, 0, next_seq++});

    double global_bound = heap.top().bound;
    res.status = BnbStatus::Optimal;

    auto emit_progress = [&]() {
        if (!cfg.on_progress) return;
        BnbProgress p;
        p.nodes = res.nodes;
        p.incumbent = res.incumbent_value;
        p.bound = global_bound;
        p.gap_percent = res.incumbent_value ? relative_gap(global_bound, *res.incumbent_value) : 1e6;
        p.time_s = clock.seconds();
        cfg.on_progress(p);
    };

    try {
        while (!heap.empty()) {
            if (clock.seconds() > cfg.time_limit_s) {
                res.status = BnbStatus::TimeLimit;
                break;
            }
            if (cfg.node_limit > 0 && res.nodes >= cfg.node_limit) {
                res.status = BnbStatus::NodeLimit;
                break;
            }

            BnbNode node = heap.top();
            // The heap top carries the weakest open bound, so it is the
            // current global bound; child capping keeps this nonincreasing.
            global_bound = std::min(global_bound, node.bound);

            if (prunable(node.bound)) break;  // everything else is weaker

            heap.pop();
            ++res.nodes;
            if (cfg.progress_interval > 0 && res.nodes % cfg.progress_interval == 0)
                emit_progress();

            const QuboProblem sub = reduce_to_node(root, node.fixed);
            Eigen::Index branch_orig = -1;
            for (std::size_t i = 0; i < node.fixed.size(); ++i) {
                if (node.fixed[i] < 0) {
                    branch_orig = static_cast<Eigen::Index>(i);
                    break;
                }
            }

            if (sub.size() == 1) {
                // Both completions are leaves; evaluate them exactly.
                for (int b = 0; b <= 1; ++b) {
                    Assignment full;
                    full.bits.resize(static_cast<std::size_t>(n));
                    for (std::size_t i = 0; i < node.fixed.size(); ++i)
                        full.bits[i] = node.fixed[i] < 0 ? static_cast<std::uint8_t>(b)
                                                         : static_cast<std::uint8_t>(node.fixed[i]);
                    const double leaf_value = evaluate_qubo(root, full);
                    try_update_incumbent(leaf_value, std::move(full));
                }
                continue;
            }

            // Branch on the free variable with the smallest original index;
            // it is position 0 of the reduced problem.
            for (int b = 0; b <= 1; ++b) {
                const QuboProblem child_sub = fix_variable(sub, 0, b);
                std::vector<std::int8_t> child_fixed = node.fixed;
                child_fixed[static_cast<std::size_t>(branch_orig)] = static_cast<std::int8_t>(b);

                const LmiSystem child_sys(child_sub);
                double child_bound;
                Eigen::VectorXd child_shift;
                try {
                    ChildStart start =
                        cfg.use_warmstart
                            ? warmstart_child(node.shift, 0, child_sys, cfg.seed)
                            : ChildStart{initial_feasible_point(
                                             child_sys, trivial_shift(child_sub, cfg.seed)),
                                         ChildStartKind::Cold};
                    if (start.kind == ChildStartKind::Cold) ++res.child_coldstarts;
                    const DescentResult dr = descend(child_sys, start.point, node_params);
                    res.total_descent_iterations += static_cast<std::uint64_t>(dr.outer_iters);
                    child_bound = std::min(node.bound, child_sub.offset() + dr.bound);
                    child_shift = dr.u_hat;
                } catch (const NumericError&) {
                    // Bounding failed outright; the parent bound is still
                    // valid for the child, so the node survives with it.
                    child_bound = node.bound;
                    child_shift = node.shift.tail(node.shift.size() - 1);
                }

                if (prunable(child_bound)) continue;
                heap.push(BnbNode{std::move(child_fixed), std::move(child_shift), child_bound,
                                  node.depth + 1, next_seq++});
            }
        }
    } catch (const std::bad_alloc&) {
        res.status = BnbStatus::MemoryAbort;
    }

    if (res.status == BnbStatus::Optimal) {
        // Heap exhausted or the weakest open bound was prunable: the
        // incumbent is the global maximum.
        global_bound = res.incumbent_value.value_or(global_bound);
    } else if (!heap.empty()) {
        global_bound = std::min(global_bound,
                                std::max(heap.top().bound,
                                         res.incumbent_value.value_or(heap.top().bound)));
    }
    if (res.incumbent_value) global_bound = std::max(global_bound, *res.incumbent_value);

    res.global_bound = global_bound;
    res.rel_gap_percent =
        res.incumbent_value ? relative_gap(global_bound, *res.incumbent_value) : 1e6;
    res.wall_time_s = clock.seconds();
    emit_progress();
    return res;
}

}  // namespace qbound
