#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "jointdiag.hpp"
#include "nonstat.hpp"

namespace ssa {

enum class Method { Sir, Save, Cor, Assa, Comb };

inline const char* to_string(Method m) {
    switch (m) {
        case Method::Sir: return "sir";
        case Method::Save: return "save";
        case Method::Cor: return "cor";
        case Method::Assa: return "assa";
        case Method::Comb: return "comb";
    }
    return "?";
}

inline std::optional<Method> parse_method(const std::string& s) {
    if (s == "sir") return Method::Sir;
    if (s == "save") return Method::Save;
    if (s == "cor") return Method::Cor;
    if (s == "assa") return Method::Assa;
    if (s == "comb") return Method::Comb;
    return std::nullopt;
}

inline NonstatKind kind_of(Method m) {
    switch (m) {
        case Method::Sir: return NonstatKind::Mean;
        case Method::Save: return NonstatKind::Var;
        case Method::Cor: return NonstatKind::Cor;
        case Method::Assa: return NonstatKind::Assa;
        case Method::Comb: break;
    }
    throw InvalidArgument("comb is not a single-matrix method");
}

/// Which matrices enter the joint diagonalization.
struct CombSpec {
    bool mean = true;
    bool var = true;
    std::vector<Index> lags{1};
    Centering centering = Centering::Global;
};

template <typename Scalar>
struct BasicSsaResult {
    Method method = Method::Sir;
    Index tau = 0;            // lag of a single Cor matrix
    Index k = 0;
    Matrix<Scalar> W_n;       // k x p, nonstationary rows
    Matrix<Scalar> W_s;       // (p-k) x p, stationary rows
    Matrix<Scalar> rotation;  // orthogonal U, columns reordered like the rows of W

    /// Single-matrix methods: 1 x p row of descending eigenvalues.
    /// Comb: one row per input matrix, columns ordered by descending column sum.
    Matrix<Scalar> eigen_table;
    std::vector<std::string> row_labels;
    Vector<Scalar> column_sums;  // comb only

    Vector<Scalar> center;
    Matrix<Scalar> whitener;
    std::vector<std::string> warnings;
    std::vector<Scalar> objective_trace;  // comb: joint diagonalization objective per sweep
    Centering centering = Centering::Global;

    Index dim() const noexcept { return W_n.cols(); }

    /// Stacked [W_n; W_s].
    Matrix<Scalar> unmixing() const {
        Matrix<Scalar> w(W_n.rows() + W_s.rows(), W_n.cols());
        w << W_n, W_s;
        return w;
    }
};

using SsaResult = BasicSsaResult<double>;

namespace detail {

inline void check_k(Index k, Index p) {
    if (k <= 0 || k >= p)
        throw InvalidArgument("nonstationary dimension k must satisfy 0 < k < p (k=" + std::to_string(k) +
                              ", p=" + std::to_string(p) + ")");
}

/// Stable descending order of values.
template <typename Scalar>
std::vector<Index> descending_order(const Vector<Scalar>& v) {
    std::vector<Index> idx(static_cast<std::size_t>(v.size()));
    std::iota(idx.begin(), idx.end(), Index(0));
    std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) { return v(a) > v(b); });
    return idx;
}

template <typename Scalar>
void split_unmixing(BasicSsaResult<Scalar>& r, const Matrix<Scalar>& u_sorted) {
    const Index p = u_sorted.rows();
    const Matrix<Scalar> w = u_sorted.transpose() * r.whitener;
    r.W_n = w.topRows(r.k);
    r.W_s = w.bottomRows(p - r.k);
    r.rotation = u_sorted;
}

}  // namespace detail

/// Eigen-decomposition route for SSAsir / SSAsave / SSAcor / ASSA.
///
/// Eigenvalues are ordered descending by raw value (ties keep the solver's
/// ascending-eigenvalue index order reversed); eigenvector signs make the
/// largest-magnitude entry positive.
template <typename Scalar>
BasicSsaResult<Scalar> ssa_single(const BasicSeries<Scalar>& series, const Segmentation& seg, Method method,
                                  Index k, Index tau = 1, Centering c = Centering::Global) {
    const NonstatKind kind = kind_of(method);
    detail::check_k(k, series.dim());
    auto wr = whiten(series);
    const auto m = nonstat_matrix(wr.whitened.values(), seg, kind, tau, c);

    Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> es(m.matrix);
    if (es.info() != Eigen::Success) throw Error("eigendecomposition failed");
    const Vector<Scalar> ev_desc = es.eigenvalues().reverse();
    const Matrix<Scalar> vec_desc = es.eigenvectors().rowwise().reverse();
    const auto order = detail::descending_order(ev_desc);

    const Index p = series.dim();
    Matrix<Scalar> u(p, p);
    BasicSsaResult<Scalar> r;
    r.eigen_table.resize(1, p);
    for (Index j = 0; j < p; ++j) {
        u.col(j) = vec_desc.col(order[static_cast<std::size_t>(j)]);
        r.eigen_table(0, j) = ev_desc(order[static_cast<std::size_t>(j)]);
    }
    fix_column_signs(u);

    r.method = method;
    r.tau = kind == NonstatKind::Cor ? tau : 0;
    r.k = k;
    r.centering = c;
    r.row_labels = {m.label()};
    r.center = wr.center;
    r.whitener = wr.whitener;
    detail::split_unmixing(r, u);
    if (method == Method::Sir && static_cast<Index>(seg.size()) <= k)
        r.warnings.push_back("sir needs more intervals than k: M_m has rank at most K-1");
    return r;
}

/// Joint-diagonalization route (SSAcomb).
template <typename Scalar>
BasicSsaResult<Scalar> ssa_comb(const BasicSeries<Scalar>& series, const Segmentation& seg, Index k,
                                const CombSpec& spec = {}, const JointDiagOptions& jd_opts = {}) {
    detail::check_k(k, series.dim());
    auto wr = whiten(series);
    const auto& y = wr.whitened.values();

    std::vector<BasicNonstatMatrix<Scalar>> ms;
    if (spec.mean) ms.push_back(m_mean(y, seg));
    if (spec.var) ms.push_back(m_var(y, seg, spec.centering));
    for (Index tau : spec.lags) ms.push_back(m_cor(y, seg, tau, spec.centering));
    if (ms.empty()) throw InvalidArgument("comb needs at least one matrix");

    std::vector<Matrix<Scalar>> mats;
    for (const auto& m : ms) mats.push_back(m.matrix);
    const auto jd = joint_diagonalize<Scalar>(mats, jd_opts);

    const Index p = series.dim();
    const Index rows = static_cast<Index>(ms.size());
    Matrix<Scalar> table(rows, p);
    for (Index i = 0; i < rows; ++i) table.row(i) = jd.diagonals[static_cast<std::size_t>(i)].transpose();
    const Vector<Scalar> sums = table.colwise().sum().transpose();
    const auto order = detail::descending_order(sums);

    BasicSsaResult<Scalar> r;
    r.method = Method::Comb;
    r.k = k;
    r.centering = spec.centering;
    r.eigen_table.resize(rows, p);
    r.column_sums.resize(p);
    Matrix<Scalar> u(p, p);
    for (Index j = 0; j < p; ++j) {
        const Index src = order[static_cast<std::size_t>(j)];
        u.col(j) = jd.rotation.col(src);
        r.eigen_table.col(j) = table.col(src);
        r.column_sums(j) = sums(src);
    }
    for (const auto& m : ms) r.row_labels.push_back(m.label());
    r.center = wr.center;
    r.whitener = wr.whitener;
    detail::split_unmixing(r, u);
    r.objective_trace = jd.objective_trace;
    if (!jd.converged)
        r.warnings.push_back("joint diagonalization did not converge in " + std::to_string(jd.sweeps) + " sweeps");
    return r;
}

/// Dispatch on the method. Single-matrix methods take the first lag of spec.lags for cor.
template <typename Scalar>
BasicSsaResult<Scalar> estimate(const BasicSeries<Scalar>& series, const Segmentation& seg, Method method, Index k,
                                const CombSpec& spec = {}) {
    if (method == Method::Comb) return ssa_comb(series, seg, k, spec);
    const Index tau = spec.lags.empty() ? 1 : spec.lags.front();
    return ssa_single(series, seg, method, k, tau, spec.centering);
}

/// Default factor for classify_components.
inline constexpr double kDefaultClassifyThreshold = 3.0;

/// Kinds ("mean", "var", "cor<lag>") for which a component is nonstationary.
using ComponentLabels = std::set<std::string>;

/// "M_m" -> "mean", "M_v" -> "var", "M_tau2" -> "cor2".
inline std::string kind_label(const std::string& row_label) {
    if (row_label == "M_m") return "mean";
    if (row_label == "M_v") return "var";
    if (row_label.rfind("M_tau", 0) == 0) return "cor" + row_label.substr(5);
    return row_label;
}

/// For each of the first k comb components, the rows whose pseudo-eigenvalue exceeds
/// threshold x the median of that row over the stationary columns.
template <typename Scalar>
std::vector<ComponentLabels> classify_components(const BasicSsaResult<Scalar>& r, double threshold) {
    if (r.method != Method::Comb) throw InvalidArgument("classification needs a comb result");
    const Index p = r.eigen_table.cols();
    std::vector<ComponentLabels> out(static_cast<std::size_t>(r.k));
    for (Index i = 0; i < r.eigen_table.rows(); ++i) {
        std::vector<Scalar> stat;
        for (Index j = r.k; j < p; ++j) stat.push_back(r.eigen_table(i, j));
        std::sort(stat.begin(), stat.end());
        const std::size_t n = stat.size();
        const Scalar median = n % 2 ? stat[n / 2] : (stat[n / 2 - 1] + stat[n / 2]) / Scalar(2);
        for (Index j = 0; j < r.k; ++j)
            if (r.eigen_table(i, j) > Scalar(threshold) * median)
                out[static_cast<std::size_t>(j)].insert(kind_label(r.row_labels[static_cast<std::size_t>(i)]));
    }
    return out;
}

/// Component series [W_n; W_s](x_t - center); the first k channels are nonstationary.
template <typename Scalar>
BasicSeries<Scalar> transform(const BasicSsaResult<Scalar>& r, const BasicSeries<Scalar>& series) {
    if (series.dim() != r.dim())
        throw DimensionMismatch("series has " + std::to_string(series.dim()) + " channels, result expects " +
                                std::to_string(r.dim()));
    Matrix<Scalar> z = (series.values().rowwise() - r.center.transpose()) * r.unmixing().transpose();
    std::vector<std::string> names;
    for (Index j = 0; j < z.cols(); ++j)
        names.push_back((j < r.k ? "N" + std::to_string(j + 1) : "S" + std::to_string(j - r.k + 1)));
    return BasicSeries<Scalar>(std::move(z), std::move(names));
}

/// (1-based component index, eigenvalue or pseudo-eigenvalue column sum), descending.
template <typename Scalar>
std::vector<std::pair<Index, Scalar>> screeplot_data(const BasicSsaResult<Scalar>& r) {
    std::vector<std::pair<Index, Scalar>> out;
    const bool comb = r.method == Method::Comb;
    const Index p = r.eigen_table.cols();
    for (Index j = 0; j < p; ++j) out.emplace_back(j + 1, comb ? r.column_sums(j) : r.eigen_table(0, j));
    return out;
}

}  // namespace ssa
