#pragma once

#include <Eigen/Core>

#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace ssa {

using Index = Eigen::Index;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Half-open range [start, end) of 1-based time indices.
struct Interval {
    Index start = 1;
    Index end = 1;

    Index length() const noexcept { return end - start; }
    /// 0-based row offset of the first time point.
    Index offset() const noexcept { return start - 1; }

    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Ordered partition of 1..T into K >= 2 contiguous intervals of length >= 2.
class Segmentation {
public:
    explicit Segmentation(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
        validate();
    }

    /// K intervals of length floor(T/K); the last one absorbs T mod K.
    static Segmentation equal(Index T, Index K) {
        if (K < 2) throw InvalidSegmentation("number of intervals must be at least 2, got " + std::to_string(K));
        if (T < 2 * K)
            throw InvalidSegmentation("T=" + std::to_string(T) + " is too short for " + std::to_string(K) +
                                      " intervals of length >= 2");
        const Index len = T / K;
        std::vector<Interval> iv;
        iv.reserve(static_cast<std::size_t>(K));
        for (Index i = 0; i < K; ++i) {
            const Index a = 1 + i * len;
            const Index b = (i + 1 == K) ? T + 1 : a + len;
            iv.push_back({a, b});
        }
        return Segmentation(std::move(iv));
    }

    /// Intervals [1,b1), [b1,b2), ..., [bm, T+1) for strictly ascending breakpoints in 2..T.
    static Segmentation from_breakpoints(std::span<const Index> breakpoints, Index T) {
        std::vector<Interval> iv;
        Index prev = 1;
        for (Index b : breakpoints) {
            if (b <= prev)
                throw InvalidSegmentation("breakpoints must be strictly ascending and greater than 1 (got " +
                                          std::to_string(b) + ")");
            if (b > T) throw InvalidSegmentation("breakpoint " + std::to_string(b) + " exceeds T=" + std::to_string(T));
            iv.push_back({prev, b});
            prev = b;
        }
        iv.push_back({prev, T + 1});
        return Segmentation(std::move(iv));
    }

    const std::vector<Interval>& intervals() const noexcept { return intervals_; }
    std::size_t size() const noexcept { return intervals_.size(); }
    const Interval& operator[](std::size_t i) const { return intervals_[i]; }
    auto begin() const noexcept { return intervals_.begin(); }
    auto end() const noexcept { return intervals_.end(); }

    /// Number of time points covered, i.e. T.
    Index series_length() const noexcept { return intervals_.back().end - 1; }

    /// Interior breakpoints (start index of every interval but the first).
    std::vector<Index> breakpoints() const {
        std::vector<Index> out;
        for (std::size_t i = 1; i < intervals_.size(); ++i) out.push_back(intervals_[i].start);
        return out;
    }

    Index min_length() const noexcept {
        Index m = intervals_.front().length();
        for (const auto& iv : intervals_) m = std::min(m, iv.length());
        return m;
    }

    /// Throws unless every interval holds at least tau + 2 points.
    void require_lag(Index tau) const {
        for (std::size_t i = 0; i < intervals_.size(); ++i) {
            if (intervals_[i].length() < tau + 2)
                throw InsufficientData("interval " + std::to_string(i + 1) + " has length " +
                                       std::to_string(intervals_[i].length()) + ", lag " + std::to_string(tau) +
                                       " needs at least " + std::to_string(tau + 2));
        }
    }

    friend bool operator==(const Segmentation&, const Segmentation&) = default;

private:
    void validate() const {
        if (intervals_.size() < 2)
            throw InvalidSegmentation("a segmentation needs at least 2 intervals, got " +
                                      std::to_string(intervals_.size()));
        if (intervals_.front().start != 1) throw InvalidSegmentation("first interval must start at time 1");
        for (std::size_t i = 0; i < intervals_.size(); ++i) {
            const auto& iv = intervals_[i];
            if (iv.length() < 2)
                throw InvalidSegmentation("interval [" + std::to_string(iv.start) + "," + std::to_string(iv.end) +
                                          ") has length " + std::to_string(iv.length()) + " < 2");
            if (i > 0 && iv.start != intervals_[i - 1].end)
                throw InvalidSegmentation("intervals must be contiguous and ascending");
        }
    }

    std::vector<Interval> intervals_;
};

/// T x p real-valued multivariate time series; rows are time points, columns channels.
template <typename Scalar>
class BasicSeries {
public:
    using MatrixType = Matrix<Scalar>;

    explicit BasicSeries(MatrixType values, std::vector<std::string> names = {})
        : values_(std::move(values)), names_(std::move(names)) {
        if (values_.rows() < 2) throw InvalidArgument("a series needs T >= 2 time points");
        if (values_.cols() < 1) throw InvalidArgument("a series needs p >= 1 channels");
        if (!values_.allFinite()) throw InvalidArgument("series contains non-finite values");
        if (names_.empty()) {
            for (Index j = 0; j < values_.cols(); ++j) names_.push_back("X" + std::to_string(j + 1));
        } else if (static_cast<Index>(names_.size()) != values_.cols()) {
            throw DimensionMismatch("channel name count does not match the number of columns");
        }
    }

    const MatrixType& values() const noexcept { return values_; }
    const std::vector<std::string>& names() const noexcept { return names_; }
    Index length() const noexcept { return values_.rows(); }
    Index dim() const noexcept { return values_.cols(); }

    /// Rows of the interval as a block view.
    auto rows_of(const Interval& iv) const { return values_.middleRows(iv.offset(), iv.length()); }

private:
    MatrixType values_;
    std::vector<std::string> names_;
};

using MultivariateSeries = BasicSeries<double>;

/// Parses a rectangular numeric CSV. A first row made only of non-numeric cells is a header.
MultivariateSeries read_csv(const std::string& path);
MultivariateSeries parse_csv(const std::string& text);

/// Writes a header row with the channel names followed by values at 17 significant digits.
void write_csv(const MultivariateSeries& series, const std::string& path);
std::string format_csv(const MultivariateSeries& series);

/// Shortest text form round-tripping at 17 significant digits.
std::string format_double(double v);

}  // namespace ssa
