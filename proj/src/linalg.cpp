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

#include "qbound/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace qbound::linalg {

namespace {

// splitmix64; standard distributions are implementation-defined, this is not.
std::uint64_t next_u64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double next_unit(std::uint64_t& state) {
    return static_cast<double>(next_u64(state) >> 11) * 0x1.0p-53;
}

}  // namespace

Eigen::VectorXd CholeskyFactor::solve_lower(const Eigen::VectorXd& rhs) const {
    if (rhs.size() != dim()) throw InputError("cholesky solve: rhs dimension mismatch");
    return l_.triangularView<Eigen::Lower>().solve(rhs);
}

Eigen::VectorXd CholeskyFactor::solve_upper(const Eigen::VectorXd& rhs) const {
    if (rhs.size() != dim()) throw InputError("cholesky solve: rhs dimension mismatch");
    return l_.transpose().triangularView<Eigen::Upper>().solve(rhs);
}

Eigen::VectorXd CholeskyFactor::solve(const Eigen::VectorXd& rhs) const {
    return solve_upper(solve_lower(rhs));
}

CholeskyResult cholesky(const Eigen::MatrixXd& m) {
    const Eigen::Index dim = m.rows();
    if (dim != m.cols()) throw InputError("cholesky: matrix not square");

    const double pivot_tol = 1e-12 * std::max(1.0, m.diagonal().maxCoeff());

    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        const double pivot = m(j, j) - l.row(j).head(j).squaredNorm();
        if (pivot <= pivot_tol) return CholeskyResult{std::nullopt, j};
        l(j, j) = std::sqrt(pivot);
        const Eigen::Index below = dim - j - 1;
        if (below > 0) {
            l.col(j).tail(below) =
                (m.col(j).tail(below) - l.bottomLeftCorner(below, j) * l.row(j).head(j).transpose()) /
                l(j, j);
        }
    }
    return CholeskyResult{CholeskyFactor(std::move(l)), -1};
}

Eigen::MatrixXd materialize(const SymmetricOperator& op) {
    const Eigen::Index dim = op.dim();
    Eigen::MatrixXd a(dim, dim);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd col(dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        e(j) = 1.0;
        op.apply(e, col);
        a.col(j) = col;
        e(j) = 0.0;
    }
    // Clean up asymmetry from roundoff so downstream solvers see an exactly
    // symmetric matrix.
    return 0.5 * (a + a.transpose());
}

LanczosResult lanczos_max_eig(const SymmetricOperator& op, double tol, int max_iter,
                              std::uint64_t seed) {
    const Eigen::Index dim = op.dim();
    if (dim < 1) throw InputError("lanczos_max_eig: empty operator");
    if (tol <= 0.0) throw InputError("lanczos_max_eig: tol must be positive");
    if (max_iter < 1) max_iter = 1;

    const int steps_cap = static_cast<int>(std::min<Eigen::Index>(dim, max_iter));

    std::uint64_t state = seed;
    Eigen::VectorXd q(dim);
    for (Eigen::Index i = 0; i < dim; ++i) q(i) = next_unit(state) - 0.5;
    if (q.norm() == 0.0) q(0) = 1.0;
    q.normalize();

    Eigen::MatrixXd basis(dim, steps_cap);
    Eigen::VectorXd alpha(steps_cap);
    Eigen::VectorXd beta(steps_cap);  // beta(j) couples step j to step j+1

    LanczosResult res;
    Eigen::VectorXd w(dim);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;

    for (int j = 0; j < steps_cap; ++j) {
        basis.col(j) = q;
        op.apply(q, w);
        alpha(j) = q.dot(w);
        w -= alpha(j) * q;
        if (j > 0) w -= beta(j - 1) * basis.col(j - 1);
        // Full reorthogonalization, two passes.
        for (int pass = 0; pass < 2; ++pass) {
            w -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).transpose() * w);
        }
        const int steps = j + 1;
        beta(j) = w.norm();

        tri.computeFromTridiagonal(alpha.head(steps), beta.head(steps - 1),
                                   Eigen::ComputeEigenvectors);
        const Eigen::Index top = steps - 1;  // eigenvalues come back ascending
        const double theta = tri.eigenvalues()(top);
        const double norm_est =
            std::max(std::abs(tri.eigenvalues()(0)), std::abs(theta));
        const double resid_est = beta(j) * std::abs(tri.eigenvectors()(steps - 1, top));

        res.iterations = steps;
        res.op_norm_estimate = norm_est;

        const bool resid_ok = resid_est <= tol * std::max(1.0, std::abs(theta));
        const bool broke_down = beta(j) <= 1e-14 * std::max(1.0, norm_est);
        if (resid_ok || broke_down || steps == steps_cap) {
            res.value = theta;
            res.vector = basis.leftCols(steps) * tri.eigenvectors().col(top);
            res.vector.normalize();
            break;
        }
        q = w / beta(j);
    }

    // The contract is on the true residual, so verify it explicitly.
    op.apply(res.vector, w);
    res.residual = (w - res.value * res.vector).norm();
    res.converged = res.residual <= tol * std::max(1.0, std::abs(res.value));
    return res;
}

double largest_eigenvalue(const Eigen::MatrixXd& sym, std::uint64_t seed) {
    DenseSymmetricOperator op(sym);
    const Eigen::Index dim = op.dim();
    auto res = lanczos_max_eig(op, 1e-10, static_cast<int>(dim) + 32, seed);
    if (res.converged) return res.value;
    if (dim <= 64) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
        return es.eigenvalues().maxCoeff();
    }
    throw NumericError("largest_eigenvalue: Lanczos did not converge");
}

}  // namespace qbound::linalg
