#pragma once

#include <Eigen/QR>
#include <Eigen/SVD>

#include "series.hpp"

namespace ssa {

/// Orthogonal projection onto the row space of a full-row-rank k x p matrix,
/// W^T (W W^T)^{-1} W, evaluated through a thin QR of W^T.
template <typename Derived>
Matrix<typename Derived::Scalar> projection_matrix(const Eigen::MatrixBase<Derived>& w) {
    using Scalar = typename Derived::Scalar;
    const Index k = w.rows();
    const Index p = w.cols();
    if (k < 1 || k > p) throw DimensionMismatch("projection needs a k x p matrix with 1 <= k <= p");
    Eigen::JacobiSVD<Matrix<Scalar>> svd(w);
    const auto& sv = svd.singularValues();
    if (!(sv(k - 1) > Scalar(1e-10) * sv(0))) throw InvalidArgument("matrix is not of full row rank");
    Eigen::HouseholderQR<Matrix<Scalar>> qr(w.transpose());
    const Matrix<Scalar> q = qr.householderQ() * Matrix<Scalar>::Identity(p, k);
    Matrix<Scalar> proj = q * q.transpose();
    return (proj + proj.transpose()) / Scalar(2);
}

/// D^2 = ||P_true - P_est||_F^2 / 2 between two orthogonal projections.
template <typename DA, typename DB>
typename DA::Scalar subspace_distance(const Eigen::MatrixBase<DA>& p_true, const Eigen::MatrixBase<DB>& p_est) {
    using Scalar = typename DA::Scalar;
    if (p_true.rows() != p_est.rows() || p_true.cols() != p_est.cols() || p_true.rows() != p_true.cols())
        throw DimensionMismatch("projections must be square and of equal size");
    auto check = [](const auto& m) {
        const Matrix<Scalar> mm = m;
        if ((mm - mm.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-6) ||
            (mm * mm - mm).cwiseAbs().maxCoeff() > Scalar(1e-6))
            throw InvalidArgument("input is not a symmetric idempotent projection");
    };
    check(p_true);
    check(p_est);
    return Scalar(0.5) * (p_true - p_est).squaredNorm();
}

struct SubspaceDistance {
    double d2_n = 0;
    double d2_s = 0;
};

}  // namespace ssa
