#pragma once

#include <Eigen/Eigenvalues>

#include <cmath>
#include <span>
#include <vector>

#include "series.hpp"

namespace ssa {

enum class JointDiagInit { EigenOfSum, Identity };

struct JointDiagOptions {
    double tol = 1e-10;  // radians
    int max_sweeps = 100;
    JointDiagInit init = JointDiagInit::EigenOfSum;
};

template <typename Scalar>
struct JointDiagResult {
    Matrix<Scalar> rotation;              // orthogonal U
    std::vector<Vector<Scalar>> diagonals;  // diag(U^T M_i U), one per input
    Scalar objective = 0;                 // sum_i ||diag(U^T M_i U)||^2
    int sweeps = 0;
    bool converged = false;
    std::vector<Scalar> objective_trace;  // objective after initialization and after each sweep
};

/// Flips column signs so that the largest-magnitude entry of every column is positive.
template <typename Scalar>
void fix_column_signs(Matrix<Scalar>& u) {
    for (Index j = 0; j < u.cols(); ++j) {
        Index imax = 0;
        u.col(j).cwiseAbs().maxCoeff(&imax);
        if (u(imax, j) < Scalar(0)) u.col(j) = -u.col(j);
    }
}

namespace detail {

template <typename Scalar>
Scalar diag_energy(const std::vector<Matrix<Scalar>>& mats) {
    Scalar s = 0;
    for (const auto& m : mats) s += m.diagonal().squaredNorm();
    return s;
}

}  // namespace detail

/// Orthogonal approximate joint diagonalization by cyclic Givens (Jacobi) sweeps.
///
/// Each pair (j, l), j < l, is rotated by the angle maximizing
/// sum_i (A_i(j,j)^2 + A_i(l,l)^2) over all matrices at once, computed in
/// closed form from the accumulated 2x2 statistics. Sweeps stop once the
/// largest angle of a sweep drops below the tolerance.
template <typename Scalar>
JointDiagResult<Scalar> joint_diagonalize(std::span<const Matrix<Scalar>> matrices,
                                          const JointDiagOptions& opts = {}) {
    if (matrices.empty()) throw InvalidArgument("joint diagonalization needs at least one matrix");
    const Index p = matrices.front().rows();
    for (const auto& m : matrices) {
        if (m.rows() != p || m.cols() != p) throw DimensionMismatch("all matrices must be p x p with the same p");
        const Scalar scale = std::max<Scalar>(Scalar(1), m.cwiseAbs().maxCoeff());
        if ((m - m.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-8) * scale)
            throw InvalidArgument("joint diagonalization needs symmetric matrices");
    }

    Matrix<Scalar> u = Matrix<Scalar>::Identity(p, p);
    if (opts.init == JointDiagInit::EigenOfSum) {
        Matrix<Scalar> sum = Matrix<Scalar>::Zero(p, p);
        for (const auto& m : matrices) sum += m;
        Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> es((sum + sum.transpose()) / Scalar(2));
        u = es.eigenvectors().rowwise().reverse();
    }

    std::vector<Matrix<Scalar>> work;
    work.reserve(matrices.size());
    for (const auto& m : matrices) work.push_back(u.transpose() * ((m + m.transpose()) / Scalar(2)) * u);

    JointDiagResult<Scalar> res;
    res.objective_trace.push_back(detail::diag_energy(work));

    for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
        Scalar max_angle = 0;
        for (Index j = 0; j < p - 1; ++j) {
            for (Index l = j + 1; l < p; ++l) {
                Scalar g11 = 0, g12 = 0, g22 = 0;
                for (const auto& a : work) {
                    const Scalar h1 = a(j, j) - a(l, l);
                    const Scalar h2 = a(j, l) + a(l, j);
                    g11 += h1 * h1;
                    g12 += h1 * h2;
                    g22 += h2 * h2;
                }
                const Scalar ton = g11 - g22;
                const Scalar toff = Scalar(2) * g12;
                if (toff == Scalar(0) && ton >= Scalar(0)) continue;
                const Scalar denom = ton + std::hypot(ton, toff);
                // toff == 0 with ton < 0: the optimum is a quarter turn, atan2(0, 0) would give 0
                const Scalar theta = (toff == Scalar(0) && denom == Scalar(0))
                                         ? Scalar(EIGEN_PI / 4)
                                         : Scalar(0.5) * std::atan2(toff, denom);
                if (theta == Scalar(0)) continue;
                max_angle = std::max(max_angle, std::abs(theta));
                const Scalar c = std::cos(theta);
                const Scalar s = std::sin(theta);
                for (auto& a : work) {
                    for (Index r = 0; r < p; ++r) {
                        const Scalar x = a(r, j), y = a(r, l);
                        a(r, j) = c * x + s * y;
                        a(r, l) = c * y - s * x;
                    }
                    for (Index r = 0; r < p; ++r) {
                        const Scalar x = a(j, r), y = a(l, r);
                        a(j, r) = c * x + s * y;
                        a(l, r) = c * y - s * x;
                    }
                }
                for (Index r = 0; r < p; ++r) {
                    const Scalar x = u(r, j), y = u(r, l);
                    u(r, j) = c * x + s * y;
                    u(r, l) = c * y - s * x;
                }
            }
        }
        res.sweeps = sweep + 1;
        res.objective_trace.push_back(detail::diag_energy(work));
        if (max_angle < static_cast<Scalar>(opts.tol)) {
            res.converged = true;
            break;
        }
    }
    if (p == 1) res.converged = true;

    fix_column_signs(u);
    res.rotation = u;
    res.objective = 0;
    for (const auto& m : matrices) {
        const Matrix<Scalar> sym = (m + m.transpose()) / Scalar(2);
        Vector<Scalar> d = (u.transpose() * sym * u).diagonal();
        res.objective += d.squaredNorm();
        res.diagonals.push_back(std::move(d));
    }
    return res;
}

template <typename Scalar>
JointDiagResult<Scalar> joint_diagonalize(const std::vector<Matrix<Scalar>>& matrices,
                                          const JointDiagOptions& opts = {}) {
    return joint_diagonalize(std::span<const Matrix<Scalar>>(matrices), opts);
}

}  // namespace ssa
