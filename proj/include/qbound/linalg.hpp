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

#ifndef QBOUND_LINALG_HPP
#define QBOUND_LINALG_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <optional>

#include "qbound/errors.hpp"

namespace qbound::linalg {

struct CholeskyResult;

/// Lower-triangular L with M = L L^T. Immutable once built; shareable.
class CholeskyFactor {
 public:
    Eigen::Index dim() const { return l_.rows(); }
    const Eigen::MatrixXd& matrix_l() const { return l_; }

    /// z with (L L^T) z = rhs.
    Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
    /// w with L w = rhs (forward substitution).
    Eigen::VectorXd solve_lower(const Eigen::VectorXd& rhs) const;
    /// z with L^T z = rhs (back substitution).
    Eigen::VectorXd solve_upper(const Eigen::VectorXd& rhs) const;

 private:
    explicit CholeskyFactor(Eigen::MatrixXd l) : l_(std::move(l)) {}
    Eigen::MatrixXd l_;

    friend struct CholeskyResult;
    friend CholeskyResult cholesky(const Eigen::MatrixXd& m);
};

/// Outcome of a factorization attempt. Failure is an expected result here,
/// not an error: callers use it as the positive-definiteness test that
/// classifies points as inside or on the boundary of the feasible cone.
struct CholeskyResult {
    std::optional<CholeskyFactor> factor;
    /// 0-based index of the pivot that fell below tolerance; -1 on success.
    Eigen::Index failed_pivot = -1;

    bool ok() const { return factor.has_value(); }
    explicit operator bool() const { return ok(); }
};

/// Factors a symmetric M as L L^T. A pivot counts as failed when it is
/// <= 1e-12 * max(1, max diagonal of M), so matrices sitting numerically on
/// the PSD boundary are reported as not positive definite.
CholeskyResult cholesky(const Eigen::MatrixXd& m);

/// Abstract symmetric linear map; implementations only provide a matvec.
class SymmetricOperator {
 public:
    virtual ~SymmetricOperator() = default;
    virtual Eigen::Index dim() const = 0;
    virtual void apply(const Eigen::VectorXd& in, Eigen::VectorXd& out) const = 0;
};

class DenseSymmetricOperator final : public SymmetricOperator {
 public:
    explicit DenseSymmetricOperator(Eigen::MatrixXd a) : a_(std::move(a)) {
        if (a_.rows() != a_.cols()) throw InputError("DenseSymmetricOperator: matrix not square");
    }
    Eigen::Index dim() const override { return a_.rows(); }
    void apply(const Eigen::VectorXd& in, Eigen::VectorXd& out) const override { out.noalias() = a_ * in; }

 private:
    Eigen::MatrixXd a_;
};

/// Applies op to the standard basis; for small dimensions only (dense
/// eigendecomposition fallback).
Eigen::MatrixXd materialize(const SymmetricOperator& op);

struct LanczosResult {
    double value = 0.0;              // largest algebraic eigenvalue estimate
    Eigen::VectorXd vector;          // unit eigenvector estimate
    bool converged = false;          // residual ||Av - lambda v|| <= tol * max(1, |lambda|)
    int iterations = 0;
    double op_norm_estimate = 0.0;   // spectral-norm estimate from the tridiagonal reduction
    double residual = 0.0;           // explicitly computed ||Av - lambda v||
};

/// Largest algebraic eigenpair by Lanczos iteration with full
/// reorthogonalization. The start vector is generated from `seed`, so
/// results are reproducible run to run. When the result reports
/// !converged, callers with dim() <= 64 may fall back to a dense solve.
LanczosResult lanczos_max_eig(const SymmetricOperator& op, double tol, int max_iter,
                              std::uint64_t seed = 0x9e3779b97f4a7c15ULL);

/// Convenience wrapper: largest eigenvalue of a dense symmetric matrix via
/// lanczos_max_eig, with the dense fallback applied for small dimensions.
/// Throws NumericError when neither route converges.
double largest_eigenvalue(const Eigen::MatrixXd& sym, std::uint64_t seed = 0x9e3779b97f4a7c15ULL);

}  // namespace qbound::linalg

#endif  // QBOUND_LINALG_HPP
