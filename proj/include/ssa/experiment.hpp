#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "simulation.hpp"
#include "ssa.hpp"
#include "subspace.hpp"

namespace ssa {

/// D_n^2 and D_s^2 of an estimate against the scenario truth, both in observation coordinates.
SubspaceDistance evaluate_result(const SsaResult& r, const sim::SimScenario& sc);

struct ExperimentConfig {
    std::vector<int> settings{1, 2, 3, 4};
    std::vector<Method> methods{Method::Sir, Method::Save, Method::Cor, Method::Assa, Method::Comb};
    std::vector<Index> T_grid{1000, 2000, 4000, 8000, 16000};
    std::vector<Index> K_grid{2, 6, 12};
    int replicates = 100;
    std::uint64_t seed = 1;
    CombSpec comb{};  // comb matrices; lags.front() is the cor lag
    Index k = 3;
    unsigned threads = 0;  // 0: hardware concurrency
    sim::SettingOptions setting_options{};
};

struct ExperimentRow {
    int setting = 0;
    Method method = Method::Sir;
    Index T = 0;
    Index K = 0;
    int replicate = 0;
    double d2_n = 0;
    double d2_s = 0;
    bool failed = false;
};

/// Replicate r of (setting, T) uses scenario seed master_seed + r, shared by all methods and K.
/// Rows come out ordered by (setting, T, replicate, K, method) whatever the thread count.
std::vector<ExperimentRow> run_experiment(const ExperimentConfig& cfg);

struct AggregateRow {
    int setting = 0;
    Method method = Method::Sir;
    Index T = 0;
    Index K = 0;
    int n = 0;       // successful replicates
    int failed = 0;  // failed replicates
    double mean_d2_n = 0, se_d2_n = 0, median_d2_n = 0;
    double mean_d2_s = 0, se_d2_s = 0, median_d2_s = 0;
    bool flagged = false;  // more than 5% failures
};

/// One row per (setting, method, T, K), in the order of first appearance.
std::vector<AggregateRow> aggregate(const std::vector<ExperimentRow>& rows);

/// Pairwise (cascade) summation with a fixed tree shape.
double pairwise_sum(std::span<const double> v);
double median(std::vector<double> v);

std::string format_results_csv(const std::vector<ExperimentRow>& rows);
std::string format_aggregate_csv(const std::vector<AggregateRow>& agg);

}  // namespace ssa
