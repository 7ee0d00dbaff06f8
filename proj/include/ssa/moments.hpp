#pragma once

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <sstream>

#include "series.hpp"

namespace ssa {

/// Mean of the rows of x over a 1-based half-open interval.
template <typename Derived>
Vector<typename Derived::Scalar> interval_mean(const Eigen::MatrixBase<Derived>& x, const Interval& iv) {
    if (iv.start < 1 || iv.end - 1 > x.rows() || iv.length() < 1)
        throw InvalidArgument("interval outside the series range");
    return x.middleRows(iv.offset(), iv.length()).colwise().mean().transpose();
}

/// Lag-tau autocovariance over the interval about a fixed center c.
///
/// Sums (x_t - c)(x_{t+tau} - c)^T over t with both t and t+tau inside the
/// interval and divides by |interval| - tau.
template <typename Derived, typename DerivedC>
Matrix<typename Derived::Scalar> interval_autocov_about(const Eigen::MatrixBase<Derived>& x, const Interval& iv,
                                                        Index tau, const Eigen::MatrixBase<DerivedC>& center) {
    using Scalar = typename Derived::Scalar;
    if (tau < 0) throw InvalidArgument("lag must be nonnegative");
    if (iv.start < 1 || iv.end - 1 > x.rows()) throw InvalidArgument("interval outside the series range");
    if (center.size() != x.cols()) throw DimensionMismatch("center length differs from the channel count");
    const Index n = iv.length();
    if (n <= tau + 1)
        throw InsufficientData("interval of length " + std::to_string(n) + " is too short for lag " +
                               std::to_string(tau));
    const Matrix<Scalar> c = x.middleRows(iv.offset(), n).rowwise() - center.derived().transpose().template cast<Scalar>();
    const Index terms = n - tau;
    Matrix<Scalar> s = c.topRows(terms).transpose() * c.middleRows(tau, terms);
    s /= static_cast<Scalar>(n - tau);
    if (tau == 0) s = (s + s.transpose()).eval() / Scalar(2);
    return s;
}

/// Lag-tau autocovariance over the interval, centered at the interval mean.
/// For tau = 0 this is the biased sample covariance.
template <typename Derived>
Matrix<typename Derived::Scalar> interval_autocov(const Eigen::MatrixBase<Derived>& x, const Interval& iv, Index tau) {
    if (iv.start < 1 || iv.end - 1 > x.rows() || iv.length() < 1)
        throw InvalidArgument("interval outside the series range");
    return interval_autocov_about(x, iv, tau, interval_mean(x, iv));
}

/// Same statistic over the whole series.
template <typename Derived>
Matrix<typename Derived::Scalar> autocov(const Eigen::MatrixBase<Derived>& x, Index tau) {
    return interval_autocov(x, Interval{1, x.rows() + 1}, tau);
}

template <typename Scalar>
struct InverseSqrt {
    Matrix<Scalar> root;        // M^{-1/2}
    Vector<Scalar> eigenvalues;  // ascending spectrum of M
};

namespace detail {

template <typename Scalar>
InverseSqrt<Scalar> inverse_sqrt_impl(const Matrix<Scalar>& m, Scalar rel_floor) {
    if (m.rows() != m.cols()) throw DimensionMismatch("matrix must be square");
    const Scalar scale = std::max<Scalar>(Scalar(1), m.cwiseAbs().maxCoeff());
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-10) * scale)
        throw InvalidArgument("matrix is not symmetric");
    const Matrix<Scalar> sym = (m + m.transpose()) / Scalar(2);
    Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> es(sym);
    if (es.info() != Eigen::Success) throw Error("eigendecomposition failed");
    const auto& ev = es.eigenvalues();
    const Scalar lo = ev.minCoeff();
    const Scalar hi = ev.maxCoeff();
    if (!(hi > Scalar(0)) || !(lo > rel_floor * hi)) {
        const double ratio = hi > Scalar(0) ? static_cast<double>(lo / hi) : 0.0;
        std::ostringstream msg;
        msg << "matrix is not numerically positive definite: smallest eigenvalue " << static_cast<double>(lo)
            << ", smallest/largest ratio " << ratio;
        throw SingularCovariance(msg.str(), ratio);
    }
    const auto& u = es.eigenvectors();
    Matrix<Scalar> root = u * ev.cwiseSqrt().cwiseInverse().asDiagonal() * u.transpose();
    root = (root + root.transpose()).eval() / Scalar(2);
    return {std::move(root), ev};
}

}  // namespace detail

/// Symmetric inverse square root U diag(lambda^{-1/2}) U^T of a symmetric positive definite matrix.
template <typename Derived>
Matrix<typename Derived::Scalar> symmetric_inverse_sqrt(const Eigen::MatrixBase<Derived>& m) {
    using Scalar = typename Derived::Scalar;
    return detail::inverse_sqrt_impl<Scalar>(m.eval(), Scalar(0)).root;
}

template <typename Scalar>
struct WhiteningResult {
    BasicSeries<Scalar> whitened;
    Vector<Scalar> center;           // global mean
    Matrix<Scalar> whitener;         // S_0^{-1/2}, symmetric
    Vector<Scalar> covariance_eigs;  // ascending spectrum of S_0
};

/// y_t = S_0^{-1/2} (x_t - m). Refuses covariances whose eigenvalue ratio falls below 1e-12.
template <typename Scalar>
WhiteningResult<Scalar> whiten(const BasicSeries<Scalar>& series) {
    const auto& x = series.values();
    const Vector<Scalar> center = x.colwise().mean().transpose();
    const Matrix<Scalar> cov = autocov(x, 0);
    auto inv = detail::inverse_sqrt_impl<Scalar>(cov, Scalar(1e-12));
    Matrix<Scalar> y = (x.rowwise() - center.transpose()) * inv.root;
    return {BasicSeries<Scalar>(std::move(y), series.names()), center, std::move(inv.root),
            std::move(inv.eigenvalues)};
}

/// Per-channel, per-interval statistics drawn in interval diagnostics plots.
struct IntervalRecord {
    Index channel = 0;         // 1-based
    Index interval_index = 0;  // 1-based
    Index start = 0;
    Index end = 0;
    double mean = 0;
    double variance = 0;
    double autocov = 0;
};

template <typename Scalar>
std::vector<IntervalRecord> interval_diagnostics(const BasicSeries<Scalar>& series, const Segmentation& seg,
                                                 Index tau) {
    if (seg.series_length() != series.length())
        throw DimensionMismatch("segmentation covers " + std::to_string(seg.series_length()) +
                                " points but the series has " + std::to_string(series.length()));
    seg.require_lag(tau);
    const auto& x = series.values();
    std::vector<IntervalRecord> out;
    for (Index j = 0; j < series.dim(); ++j) {
        const Matrix<Scalar> col = x.col(j);
        for (std::size_t i = 0; i < seg.size(); ++i) {
            const auto& iv = seg[i];
            IntervalRecord r;
            r.channel = j + 1;
            r.interval_index = static_cast<Index>(i) + 1;
            r.start = iv.start;
            r.end = iv.end;
            r.mean = static_cast<double>(interval_mean(col, iv)(0));
            r.variance = static_cast<double>(interval_autocov(col, iv, 0)(0, 0));
            r.autocov = static_cast<double>(interval_autocov(col, iv, tau)(0, 0));
            out.push_back(r);
        }
    }
    return out;
}

std::string format_diagnostics_csv(const std::vector<IntervalRecord>& records, Index tau);

}  // namespace ssa
