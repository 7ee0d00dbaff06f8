#pragma once

#include <json.hpp>

#include "nonstat.hpp"
#include "simulation.hpp"
#include "ssa.hpp"

namespace ssa {

using Json = nlohmann::ordered_json;

/// Nested row-major array.
Json matrix_to_json(const Matrix<double>& m);
Matrix<double> matrix_from_json(const Json& j);

/// {kind, tau?, p, values (flat row-major), breakpoints}
Json to_json(const NonstatMatrix& m);
NonstatMatrix nonstat_from_json(const Json& j);

/// {method, tau?, k, p, W_n, W_s, eigen_table: {rows: [{label, values}], column_sums?},
///  whitening: {center, whitener}, warnings}
Json to_json(const SsaResult& r);
SsaResult result_from_json(const Json& j);

/// {setting, T, seed, k, mixing, true_P_n, true_P_s, nonstationary_idx, stationary_idx}
Json scenario_manifest(const sim::SimScenario& sc);

}  // namespace ssa
