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

#include "qbound/lmi.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <utility>

namespace qbound {

namespace {

constexpr double kDegenerateTol = 1e-10;
constexpr double kRayEigenvalueTol = 1e-12;
constexpr double kLanczosTol = 1e-10;
constexpr int kDenseFallbackDim = 64;

// B = -L^{-1} C2 L^{-T} restricted to a ray direction d, with
// C2 = [[0, -d^T/2], [-d/2, diag(d)]]. The matvec is two triangular solves
// around an O(n) arrow+diagonal product.
class RayOperator final : public linalg::SymmetricOperator {
 public:
    RayOperator(const linalg::CholeskyFactor& factor, const Eigen::VectorXd& d)
        : factor_(factor), d_(d) {}

    Eigen::Index dim() const override { return factor_.dim(); }

    void apply(const Eigen::VectorXd& in, Eigen::VectorXd& out) const override {
        const Eigen::Index n = d_.size();
        const Eigen::VectorXd x = factor_.solve_upper(in);
        Eigen::VectorXd y(n + 1);
        y(0) = -0.5 * d_.dot(x.tail(n));
        y.tail(n) = -0.5 * x(0) * d_ + d_.cwiseProduct(x.tail(n));
        out = -factor_.solve_lower(y);
    }

 private:
    const linalg::CholeskyFactor& factor_;
    const Eigen::VectorXd& d_;
};

}  // namespace

Eigen::MatrixXd LmiSystem::assemble(const Eigen::VectorXd& u, double r) const {
    const Eigen::Index n = this->n();
    if (u.size() != n) throw InputError("LmiSystem::assemble: shift dimension mismatch");
    Eigen::MatrixXd f(n + 1, n + 1);
    f(0, 0) = r;
    const Eigen::VectorXd half = 0.5 * (problem_.linear() + u);
    f.row(0).tail(n) = -half.transpose();
    f.col(0).tail(n) = -half;
    f.bottomRightCorner(n, n) = -problem_.quadratic();
    f.bottomRightCorner(n, n).diagonal() += u;
    return f;
}

Eigen::MatrixXd LmiSystem::assemble(const Eigen::VectorXd& y) const {
    if (y.size() != dim()) throw InputError("LmiSystem::assemble: point dimension mismatch");
    return assemble(y.head(n()), y(n()));
}

std::optional<OracleCache> OracleCache::build(const LmiSystem& sys, PlanePoint point) {
    if (point.u.size() != sys.n()) throw InputError("OracleCache: point dimension mismatch");
    auto chol = linalg::cholesky(sys.assemble(point.u, point.r_hat));
    if (!chol) return std::nullopt;
    Eigen::VectorXd e1 = Eigen::VectorXd::Zero(sys.dim());
    e1(0) = 1.0;
    Eigen::VectorXd z = chol.factor->solve(e1);
    return OracleCache(&sys, std::move(point), std::move(*chol.factor), std::move(z));
}

bool OracleCache::degenerate() const {
    return std::abs(z_(0)) <= kDegenerateTol * tolerance_scale();
}

double OracleCache::value() const {
    if (degenerate())
        throw NumericError("eval oracle: leading cofactor vanished (degenerate direction)");
    return -1.0 / z_(0);
}

Eigen::VectorXd OracleCache::gradient_direction() const {
    const Eigen::Index n = sys_->n();
    Eigen::VectorXd g(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double zi = z_(i + 1);
        g(i) = z_(0) * zi - zi * zi;
    }
    return g;
}

double OracleCache::boundary_ray(const Eigen::VectorXd& d, std::uint64_t seed) const {
    const Eigen::Index n = sys_->n();
    if (d.size() != n) throw InputError("boundary_ray: direction dimension mismatch");
    if (std::abs(d.norm() - 1.0) > 1e-6) throw InputError("boundary_ray: direction must be unit");

    RayOperator op(factor_, d);
    const int dim = static_cast<int>(op.dim());
    auto eig = linalg::lanczos_max_eig(op, kLanczosTol, dim + 16, seed);
    if (!eig.converged) {
        if (dim <= kDenseFallbackDim) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(linalg::materialize(op));
            eig.value = es.eigenvalues().maxCoeff();
        } else {
            // Ill-conditioned factors push the residual floor above the
            // strict tolerance; accept the exhausted-Krylov estimate when
            // its residual is small relative to the operator norm.
            const double relaxed = 1e-12 * std::max(1.0, eig.op_norm_estimate);
            if (eig.residual > std::max(kLanczosTol, relaxed))
                throw NumericError("boundary_ray: eigenvalue iteration failed to converge");
        }
    }
    if (eig.value <= kRayEigenvalueTol)
        throw NumericError("boundary_ray: ray appears unbounded; numerical breakdown");
    return 1.0 / eig.value;
}

double boundary_ray(const LmiSystem& sys, const PlanePoint& p, const Eigen::VectorXd& d,
                    std::uint64_t seed) {
    auto cache = OracleCache::build(sys, p);
    if (!cache) throw NumericError("boundary_ray: point is not interior");
    return cache->boundary_ray(d, seed);
}

PlanePoint initial_feasible_point(const LmiSystem& sys, const QcrShift& shift,
                                  double probe_height) {
    const Eigen::Index n = sys.n();
    if (shift.u.size() != n) throw InputError("initial_feasible_point: shift dimension mismatch");

    Eigen::MatrixXd m = -sys.problem().quadratic();
    m.diagonal() += shift.u;
    auto mchol = linalg::cholesky(m);
    if (!mchol)
        throw InfeasibleShift("initial_feasible_point: diag(u) - Q not strictly positive definite");

    // Boundary height of the slice at u: solve F([u, probe]) z = e1 and use
    // r_b = probe - 1/z1. det F is affine in r with positive leading
    // cofactor det(diag(u) - Q), so the root is independent of the probe.
    const Eigen::MatrixXd f0 = sys.assemble(shift.u, probe_height);
    Eigen::VectorXd e1 = Eigen::VectorXd::Zero(n + 1);
    e1(0) = 1.0;
    const Eigen::VectorXd z = Eigen::PartialPivLU<Eigen::MatrixXd>(f0).solve(e1);

    double r_b;
    const double f_scale = std::max(1.0, f0.cwiseAbs().maxCoeff());
    const bool solve_ok = z.allFinite() &&
                          (f0 * z - e1).norm() <= 1e-8 * f_scale * (1.0 + z.norm()) &&
                          std::abs(z(0)) > 1e-14 * (1.0 + z.squaredNorm());
    if (solve_ok) {
        r_b = probe_height - 1.0 / z(0);
    } else {
        // Probe landed on (or numerically near) the singular height; fall
        // back to the Schur form of the same root.
        const Eigen::VectorXd w =
            mchol.factor->solve_lower(0.5 * (sys.problem().linear() + shift.u));
        r_b = w.squaredNorm();
    }

    for (const double push_abs : {1.0, 2.0}) {
        const double r_hat = r_b + std::max(0.1 * std::abs(r_b), push_abs);
        if (linalg::cholesky(sys.assemble(shift.u, r_hat)).ok()) return PlanePoint{shift.u, r_hat};
    }
    throw NumericError("initial_feasible_point: pushed point failed the interiority check");
}

}  // namespace qbound
