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

#include "qbound/qubo.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "qbound/linalg.hpp"

namespace qbound {

Eigen::VectorXd Assignment::to_vector() const {
    Eigen::VectorXd v(size());
    for (Eigen::Index i = 0; i < size(); ++i) v(i) = static_cast<double>(bits[i]);
    return v;
}

QuboProblem::QuboProblem(Eigen::MatrixXd q, Eigen::VectorXd linear, double offset)
    : q_(std::move(q)), c_(std::move(linear)), offset_(offset) {
    const Eigen::Index n = q_.rows();
    if (n < 1) throw InputError("QuboProblem: need at least one variable");
    if (q_.cols() != n) throw InputError("QuboProblem: Q must be square");
    if (c_.size() != n) throw InputError("QuboProblem: linear term dimension mismatch");
    if (q_ != q_.transpose()) throw InputError("QuboProblem: Q must be exactly symmetric");
    if (!q_.allFinite() || !c_.allFinite() || !std::isfinite(offset_))
        throw InputError("QuboProblem: coefficients must be finite");
}

bool QuboProblem::integer_valued() const {
    auto integral = [](double v) { return v == std::floor(v); };
    if (!integral(offset_)) return false;
    for (Eigen::Index i = 0; i < c_.size(); ++i)
        if (!integral(c_(i))) return false;
    for (Eigen::Index j = 0; j < q_.cols(); ++j)
        for (Eigen::Index i = 0; i < q_.rows(); ++i)
            if (!integral(q_(i, j))) return false;
    return true;
}

bool QuboProblem::operator==(const QuboProblem& other) const {
    return q_ == other.q_ && c_ == other.c_ && offset_ == other.offset_;
}

namespace {

void check_binary(const QuboProblem& p, const Assignment& x) {
    if (x.size() != p.size()) throw InputError("assignment dimension mismatch");
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (x[i] > 1) throw InputError("assignment entries must be 0 or 1");
}

}  // namespace

double evaluate_qubo(const QuboProblem& p, const Assignment& x) {
    check_binary(p, x);
    const Eigen::Index n = p.size();
    const auto& q = p.quadratic();
    double quad = 0.0, lin = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!x[i]) continue;
        lin += p.linear()(i);
        quad += q(i, i);
        for (Eigen::Index j = i + 1; j < n; ++j)
            if (x[j]) quad += 2.0 * q(i, j);
    }
    return quad + lin + p.offset();
}

double qcr_objective(const QuboProblem& p, const QcrShift& shift, const Eigen::VectorXd& x) {
    const Eigen::Index n = p.size();
    if (shift.u.size() != n) throw InputError("qcr_objective: shift dimension mismatch");
    if (x.size() != n) throw InputError("qcr_objective: point dimension mismatch");
    const double quad = x.dot(p.quadratic() * x) - shift.u.dot(x.cwiseProduct(x));
    const double lin = (p.linear() + shift.u).dot(x);
    return quad + lin + p.offset();
}

QuboProblem fix_variable(const QuboProblem& p, Eigen::Index k, int b) {
    const Eigen::Index n = p.size();
    if (k < 0 || k >= n) throw InputError("fix_variable: index out of range");
    if (b != 0 && b != 1) throw InputError("fix_variable: value must be 0 or 1");
    if (n == 1) throw InputError("fix_variable: would produce empty problem");

    const auto& q = p.quadratic();
    Eigen::MatrixXd q_child(n - 1, n - 1);
    Eigen::VectorXd c_child(n - 1);
    for (Eigen::Index i = 0, ii = 0; i < n; ++i) {
        if (i == k) continue;
        c_child(ii) = p.linear()(i) + 2.0 * q(i, k) * b;
        for (Eigen::Index j = 0, jj = 0; j < n; ++j) {
            if (j == k) continue;
            q_child(ii, jj) = q(i, j);
            ++jj;
        }
        ++ii;
    }
    const double offset_child = p.offset() + (q(k, k) + p.linear()(k)) * b;
    return QuboProblem(std::move(q_child), std::move(c_child), offset_child);
}

QcrShift trivial_shift(const QuboProblem& p, std::uint64_t seed) {
    double lambda_max;
    try {
        lambda_max = linalg::largest_eigenvalue(p.quadratic(), seed);
    } catch (const NumericError& e) {
        throw NumericError(std::string("trivial_shift: ") + e.what());
    }
    const double margin = std::max(1.0, 0.01 * std::abs(lambda_max));
    return QcrShift{Eigen::VectorXd::Constant(p.size(), lambda_max + margin)};
}

BruteForceResult brute_force_max(const QuboProblem& p) {
    const Eigen::Index n = p.size();
    if (n > 30) throw InputError("brute_force_max: instance too large to enumerate");

    const auto& q = p.quadratic();
    const auto& c = p.linear();

    std::vector<std::uint8_t> x(static_cast<std::size_t>(n), 0);
    double value = p.offset();
    double best = value;
    std::uint64_t best_code = 0;  // gray code of the best assignment

    // Gray-code walk: one bit flip per step, O(n) incremental update.
    const std::uint64_t total = 1ULL << n;
    for (std::uint64_t step = 1; step < total; ++step) {
        const int k = std::countr_zero(step);
        double cross = 0.0;
        for (Eigen::Index j = 0; j < n; ++j)
            if (x[static_cast<std::size_t>(j)] && j != k) cross += q(k, j);
        const double delta = q(k, k) + c(k) + 2.0 * cross;
        if (x[static_cast<std::size_t>(k)]) {
            value -= delta;
            x[static_cast<std::size_t>(k)] = 0;
        } else {
            value += delta;
            x[static_cast<std::size_t>(k)] = 1;
        }
        if (value > best) {
            best = value;
            best_code = step ^ (step >> 1);
        }
    }

    Assignment best_x;
    best_x.bits.assign(static_cast<std::size_t>(n), 0);
    for (Eigen::Index i = 0; i < n; ++i)
        best_x.bits[static_cast<std::size_t>(i)] = (best_code >> i) & 1ULL;
    return BruteForceResult{best, std::move(best_x)};
}

}  // namespace qbound
