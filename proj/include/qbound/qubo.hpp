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

#ifndef QBOUND_QUBO_HPP
#define QBOUND_QUBO_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "qbound/errors.hpp"

namespace qbound {

/// A binary point in {0,1}^n.
struct Assignment {
    std::vector<std::uint8_t> bits;

    Assignment() = default;
    explicit Assignment(std::vector<std::uint8_t> b) : bits(std::move(b)) {}

    Eigen::Index size() const { return static_cast<Eigen::Index>(bits.size()); }
    std::uint8_t operator[](Eigen::Index i) const { return bits[static_cast<std::size_t>(i)]; }

    /// Dense real copy, used when feeding binary points into continuous objectives.
    Eigen::VectorXd to_vector() const;

    bool operator==(const Assignment&) const = default;
};

/// Maximize x^T Q x + c^T x + offset over x in {0,1}^n.
///
/// Q is stored dense and exactly symmetric; construction rejects anything
/// else. The offset carries constants produced by variable fixing, so a
/// reduced subproblem evaluates like its parent.
class QuboProblem {
 public:
    QuboProblem(Eigen::MatrixXd q, Eigen::VectorXd linear, double offset = 0.0);

    Eigen::Index size() const { return q_.rows(); }
    const Eigen::MatrixXd& quadratic() const { return q_; }
    const Eigen::VectorXd& linear() const { return c_; }
    double offset() const { return offset_; }

    /// True when every coefficient (and the offset) is an exact integer;
    /// enables the integral bound-rounding rule in branch-and-bound.
    bool integer_valued() const;

    bool operator==(const QuboProblem& other) const;

 private:
    Eigen::MatrixXd q_;
    Eigen::VectorXd c_;
    double offset_;
};

/// Diagonal perturbation u for the shifted objective
/// x^T (Q - diag(u)) x + (c + u)^T x; convexifying once
/// diag(u) - Q is positive semidefinite.
struct QcrShift {
    Eigen::VectorXd u;
};

/// Objective value x^T Q x + c^T x + offset at a binary point.
double evaluate_qubo(const QuboProblem& p, const Assignment& x);

/// Shifted objective x^T (Q - diag(u)) x + (c + u)^T x + offset at a real
/// point x (the continuous-relaxation objective). Coincides with
/// evaluate_qubo on binary x for every u.
double qcr_objective(const QuboProblem& p, const QcrShift& shift, const Eigen::VectorXd& x);

/// Substitutes x_k = b and returns the reduced (n-1)-variable problem:
/// row/column k of Q deleted, c_i += 2 Q(i,k) b, offset += (Q(k,k) + c_k) b.
/// k is 0-based. Throws InputError for k out of range or n == 1 (the caller
/// evaluates the two remaining leaves directly instead of reducing).
QuboProblem fix_variable(const QuboProblem& p, Eigen::Index k, int b);

/// Shift with every entry lambda_max(Q) + max(1, 0.01 |lambda_max(Q)|).
/// The margin keeps diag(u) - Q strictly positive definite, which the
/// feasible-point construction requires.
QcrShift trivial_shift(const QuboProblem& p, std::uint64_t seed = 0x9e3779b97f4a7c15ULL);

struct BruteForceResult {
    double value;
    Assignment x;
};

/// Exact maximum by gray-code enumeration of all 2^n assignments.
/// Refuses n > 30 (the CLI applies a stricter cap).
BruteForceResult brute_force_max(const QuboProblem& p);

}  // namespace qbound

#endif  // QBOUND_QUBO_HPP
