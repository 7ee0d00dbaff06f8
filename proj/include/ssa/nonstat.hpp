#pragma once

#include <string>

#include "moments.hpp"

namespace ssa {

enum class NonstatKind { Mean, Var, Cor, Assa };

/// Center of the interval statistics in M_v and M_tau. Global uses the mean of the
/// whole (whitened) series, so a level shift between intervals does not leak into
/// the variance and autocovariance matrices; Interval uses each interval's own mean.
enum class Centering { Global, Interval };

inline const char* to_string(Centering c) { return c == Centering::Global ? "global" : "interval"; }

inline const char* to_string(NonstatKind k) {
    switch (k) {
        case NonstatKind::Mean: return "mean";
        case NonstatKind::Var: return "var";
        case NonstatKind::Cor: return "cor";
        case NonstatKind::Assa: return "assa";
    }
    return "?";
}

/// A p x p symmetric matrix whose leading eigendirections carry one kind of nonstationarity.
template <typename Scalar>
struct BasicNonstatMatrix {
    NonstatKind kind = NonstatKind::Mean;
    Index tau = 0;  // lag, meaningful for Cor only
    Matrix<Scalar> matrix;
    std::vector<Index> breakpoints;  // of the segmentation it was built from

    /// Row label used in pseudo-eigenvalue tables: M_m, M_v, M_tau<lag>, M_assa.
    std::string label() const {
        switch (kind) {
            case NonstatKind::Mean: return "M_m";
            case NonstatKind::Var: return "M_v";
            case NonstatKind::Cor: return "M_tau" + std::to_string(tau);
            case NonstatKind::Assa: return "M_assa";
        }
        return "M_?";
    }
};

using NonstatMatrix = BasicNonstatMatrix<double>;

namespace detail {

template <typename Derived>
void check_whitened_input(const Eigen::MatrixBase<Derived>& y, const Segmentation& seg) {
    if (seg.series_length() != y.rows())
        throw DimensionMismatch("segmentation covers " + std::to_string(seg.series_length()) +
                                " points but the series has " + std::to_string(y.rows()));
    const auto global_mean = y.colwise().mean();
    if (global_mean.cwiseAbs().maxCoeff() > 1e-6)
        throw InvalidArgument("input does not look whitened: global mean is not zero");
}

template <typename Scalar>
Scalar interval_weight(const Interval& iv, Index T) {
    return static_cast<Scalar>(iv.length()) / static_cast<Scalar>(T);
}

template <typename Derived>
Matrix<typename Derived::Scalar> centered_stat(const Eigen::MatrixBase<Derived>& y, const Interval& iv, Index tau,
                                               Centering c) {
    if (c == Centering::Interval) return interval_autocov(y, iv, tau);
    return interval_autocov_about(y, iv, tau, y.colwise().mean().transpose());
}

template <typename Scalar>
BasicNonstatMatrix<Scalar> finish(NonstatKind kind, Index tau, Matrix<Scalar> m, const Segmentation& seg) {
    m = (m + m.transpose()).eval() / Scalar(2);
    return {kind, tau, std::move(m), seg.breakpoints()};
}

}  // namespace detail

/// Sum_i (|T_i|/T) m_i m_i^T over interval means of the whitened series.
template <typename Derived>
BasicNonstatMatrix<typename Derived::Scalar> m_mean(const Eigen::MatrixBase<Derived>& y, const Segmentation& seg) {
    using Scalar = typename Derived::Scalar;
    detail::check_whitened_input(y, seg);
    const Index p = y.cols();
    const Index T = y.rows();
    Matrix<Scalar> acc = Matrix<Scalar>::Zero(p, p);
    for (const auto& iv : seg) {
        const Vector<Scalar> m = interval_mean(y, iv);
        acc.noalias() += detail::interval_weight<Scalar>(iv, T) * (m * m.transpose());
    }
    return detail::finish(NonstatKind::Mean, 0, std::move(acc), seg);
}

/// Sum_i (|T_i|/T) (I - S_{0,T_i})(I - S_{0,T_i})^T.
template <typename Derived>
BasicNonstatMatrix<typename Derived::Scalar> m_var(const Eigen::MatrixBase<Derived>& y, const Segmentation& seg,
                                                   Centering c = Centering::Global) {
    using Scalar = typename Derived::Scalar;
    detail::check_whitened_input(y, seg);
    seg.require_lag(0);
    const Index p = y.cols();
    const Index T = y.rows();
    const Matrix<Scalar> eye = Matrix<Scalar>::Identity(p, p);
    Matrix<Scalar> acc = Matrix<Scalar>::Zero(p, p);
    for (const auto& iv : seg) {
        const Matrix<Scalar> d = eye - detail::centered_stat(y, iv, 0, c);
        acc.noalias() += detail::interval_weight<Scalar>(iv, T) * (d * d.transpose());
    }
    return detail::finish(NonstatKind::Var, 0, std::move(acc), seg);
}

/// Sum_i (|T_i|/T) (S_{tau,T} - S_{tau,T_i})(S_{tau,T} - S_{tau,T_i})^T for a lag tau >= 1.
template <typename Derived>
BasicNonstatMatrix<typename Derived::Scalar> m_cor(const Eigen::MatrixBase<Derived>& y, const Segmentation& seg,
                                                   Index tau, Centering c = Centering::Global) {
    using Scalar = typename Derived::Scalar;
    if (tau < 1) throw InvalidArgument("autocorrelation lag must be >= 1");
    detail::check_whitened_input(y, seg);
    seg.require_lag(tau);
    const Index p = y.cols();
    const Index T = y.rows();
    const Matrix<Scalar> global = autocov(y, tau);
    Matrix<Scalar> acc = Matrix<Scalar>::Zero(p, p);
    for (const auto& iv : seg) {
        const Matrix<Scalar> d = global - detail::centered_stat(y, iv, tau, c);
        acc.noalias() += detail::interval_weight<Scalar>(iv, T) * (d * d.transpose());
    }
    return detail::finish(NonstatKind::Cor, tau, std::move(acc), seg);
}

/// Analytic SSA matrix: Sum_i w_i {m_i m_i^T + S_{0,T_i} S_{0,T_i}^T / 2} - I/2 with w_i = |T_i|/T.
template <typename Derived>
BasicNonstatMatrix<typename Derived::Scalar> m_assa(const Eigen::MatrixBase<Derived>& y, const Segmentation& seg) {
    using Scalar = typename Derived::Scalar;
    detail::check_whitened_input(y, seg);
    seg.require_lag(0);
    const Index p = y.cols();
    const Index T = y.rows();
    Matrix<Scalar> acc = Matrix<Scalar>::Zero(p, p);
    for (const auto& iv : seg) {
        const Vector<Scalar> m = interval_mean(y, iv);
        const Matrix<Scalar> s = interval_autocov(y, iv, 0);
        acc.noalias() += detail::interval_weight<Scalar>(iv, T) * (m * m.transpose() + Scalar(0.5) * s * s.transpose());
    }
    acc -= Scalar(0.5) * Matrix<Scalar>::Identity(p, p);
    return detail::finish(NonstatKind::Assa, 0, std::move(acc), seg);
}

/// Builds one matrix of the requested kind. tau is used by Cor only, c by Var and Cor.
template <typename Derived>
BasicNonstatMatrix<typename Derived::Scalar> nonstat_matrix(const Eigen::MatrixBase<Derived>& y,
                                                            const Segmentation& seg, NonstatKind kind, Index tau = 1,
                                                            Centering c = Centering::Global) {
    switch (kind) {
        case NonstatKind::Mean: return m_mean(y, seg);
        case NonstatKind::Var: return m_var(y, seg, c);
        case NonstatKind::Cor: return m_cor(y, seg, tau, c);
        case NonstatKind::Assa: return m_assa(y, seg);
    }
    throw InvalidArgument("unknown nonstationarity kind");
}

}  // namespace ssa
