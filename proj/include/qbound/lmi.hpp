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

#ifndef QBOUND_LMI_HPP
#define QBOUND_LMI_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <optional>

#include "qbound/linalg.hpp"
#include "qbound/qubo.hpp"

namespace qbound {

/// A point on the cutting hyperplane at height r_hat: the SDP point
/// [u, r_hat]. "Interior" means F([u, r_hat]) is strictly positive
/// definite, i.e. the Cholesky test passes.
struct PlanePoint {
    Eigen::VectorXd u;
    double r_hat = 0.0;
};

/// The shift vector was not strictly convexifying: diag(u) - Q failed the
/// positive-definiteness test, so no hyperplane height can make [u, r]
/// strictly feasible.
class InfeasibleShift : public NumericError {
 public:
    using NumericError::NumericError;
};

/// The bounding SDP for one QUBO instance. Feasible set:
///
///   F([u, r]) = [ r            -(c+u)^T/2   ]  >= 0
///               [ -(c+u)/2     diag(u) - Q  ]
///
/// The depth function f(u) at plane height r_hat is the (negative) distance
/// from [u, r_hat] straight down to the boundary of that cone; minimizing it
/// over the plane slice recovers the SDP optimum, and r_hat + f(u) is a
/// valid QUBO upper bound at every feasible u.
class LmiSystem {
 public:
    explicit LmiSystem(QuboProblem p) : problem_(std::move(p)) {}

    const QuboProblem& problem() const { return problem_; }
    Eigen::Index n() const { return problem_.size(); }
    Eigen::Index dim() const { return problem_.size() + 1; }

    /// The (n+1)x(n+1) block matrix above; the r coordinate sits in the
    /// first row/column.
    Eigen::MatrixXd assemble(const Eigen::VectorXd& u, double r) const;
    /// Same, with y = [u, r] packed into one vector.
    Eigen::MatrixXd assemble(const Eigen::VectorXd& y) const;

 private:
    QuboProblem problem_;
};

/// Shared state for the three oracles at one plane point: the Cholesky
/// factor of F([u, r_hat]) and the solution z of F z = e1. One factorization
/// serves the evaluation, gradient, and boundary oracles. Single-writer:
/// one descent run owns one cache; distinct caches over the same LmiSystem
/// may be used concurrently.
class OracleCache {
 public:
    /// Factors F at the point. Returns nullopt when the point is not
    /// interior (the factorization hit a non-positive pivot).
    static std::optional<OracleCache> build(const LmiSystem& sys, PlanePoint point);

    const PlanePoint& point() const { return point_; }
    const LmiSystem& system() const { return *sys_; }
    const linalg::CholeskyFactor& factor() const { return factor_; }

    /// Solution of F([u, r_hat]) z = e1; by construction it spans the
    /// kernel of F at the dropped point [u, r_hat + f(u)].
    const Eigen::VectorXd& e1_solution() const { return z_; }

    /// z1 vanished relative to ||z||: the leading cofactor of F is ~0
    /// (diag(u) - Q nearly singular) and the value/gradient formulas would
    /// emit garbage. Callers should stop instead of trusting them.
    bool degenerate() const;

    /// Scale for degeneracy/stationarity tests: 1 + ||z||^2.
    double tolerance_scale() const { return 1.0 + z_.squaredNorm(); }

    /// f(u) = -1/z1 <= 0 for interior points. Throws NumericError when
    /// degenerate().
    double value() const;

    /// Positive multiple of the gradient of f at u:
    /// g_i = z1 z_{i+1} - z_{i+1}^2. Only the direction is meaningful.
    Eigen::VectorXd gradient_direction() const;

    /// Distance t* > 0 from u along the unit in-plane direction d to the
    /// boundary of the feasible slice, via the largest eigenvalue of
    /// B = -L^{-1} C2 L^{-T} where C2 is the arrow+diagonal matrix of d.
    /// Throws NumericError if the eigenvalue iteration fails or the ray
    /// appears unbounded (the slice is bounded, so that signals a
    /// numerical breakdown).
    double boundary_ray(const Eigen::VectorXd& d,
                        std::uint64_t seed = 0x9e3779b97f4a7c15ULL) const;

 private:
    OracleCache(const LmiSystem* sys, PlanePoint point, linalg::CholeskyFactor factor,
                Eigen::VectorXd z)
        : sys_(sys), point_(std::move(point)), factor_(std::move(factor)), z_(std::move(z)) {}

    const LmiSystem* sys_;
    PlanePoint point_;
    linalg::CholeskyFactor factor_;
    Eigen::VectorXd z_;
};

/// Convenience form of the boundary oracle for callers without a cache.
double boundary_ray(const LmiSystem& sys, const PlanePoint& p, const Eigen::VectorXd& d,
                    std::uint64_t seed = 0x9e3779b97f4a7c15ULL);

/// Builds an interior plane point above a strictly convexifying shift:
/// finds the boundary height r_b below which F([u, r]) stops being PSD
/// (probing at `probe_height`, whose value does not affect the result),
/// then pushes up by max(0.1 |r_b|, 1.0), doubling the absolute push once
/// if the interiority check fails. Throws InfeasibleShift when
/// diag(u) - Q is not strictly positive definite.
PlanePoint initial_feasible_point(const LmiSystem& sys, const QcrShift& shift,
                                  double probe_height = 0.0);

}  // namespace qbound

#endif  // QBOUND_LMI_HPP
