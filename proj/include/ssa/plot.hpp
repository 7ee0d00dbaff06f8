#pragma once

#include <string>
#include <utility>
#include <vector>

#include "experiment.hpp"
#include "moments.hpp"

namespace ssa::plot {

/// One panel per channel: the series in grey, interval means as black dots, variances as
/// vertical red bars and lag autocovariances as horizontal blue bars.
std::string diagnostics_svg(const MultivariateSeries& series, const std::vector<IntervalRecord>& records);

/// Descending (pseudo-)eigenvalues against component index.
std::string screeplot_svg(const std::vector<std::pair<Index, double>>& points, const std::string& title);

/// Mean D_n^2 against T (log scale), one panel per (setting, K), one line per method.
std::string experiment_svg(const std::vector<AggregateRow>& agg);

}  // namespace ssa::plot
