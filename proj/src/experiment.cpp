#include "ssa/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <thread>
#include <tuple>

namespace ssa {

SubspaceDistance evaluate_result(const SsaResult& r, const sim::SimScenario& sc) {
    const Matrix<double> pn = projection_matrix(r.W_n);
    const Matrix<double> ps = projection_matrix(r.W_s);
    return {subspace_distance(sc.true_P_n, pn), subspace_distance(sc.true_P_s, ps)};
}

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

double median(std::vector<double> v) {
    if (v.empty()) return std::nan("");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& cfg) {
    if (cfg.replicates < 1) throw InvalidArgument("need at least one replicate");
    for (int s : cfg.settings)
        if (s < 1 || s > 4) throw InvalidArgument("setting must be in 1..4");
    for (Index T : cfg.T_grid)
        if (T < 600) throw InvalidArgument("T must be at least 600");
    for (Index K : cfg.K_grid) {
        if (K < 2) throw InvalidArgument("K must be at least 2");
        for (Index T : cfg.T_grid) Segmentation::equal(T, K).require_lag(cfg.comb.lags.empty() ? 0 : cfg.comb.lags.back());
    }
    if (cfg.methods.empty()) throw InvalidArgument("need at least one method");

    struct Task {
        int setting;
        Index T;
        int replicate;
    };
    std::vector<Task> tasks;
    for (int s : cfg.settings)
        for (Index T : cfg.T_grid)
            for (int r = 0; r < cfg.replicates; ++r) tasks.push_back({s, T, r});

    const std::size_t per_task = cfg.K_grid.size() * cfg.methods.size();
    std::vector<ExperimentRow> rows(tasks.size() * per_task);

    auto run_task = [&](std::size_t ti) {
        const Task& t = tasks[ti];
        std::size_t out = ti * per_task;
        std::optional<sim::SimScenario> sc;
        try {
            sc = sim::make_setting(t.setting, t.T, cfg.seed + static_cast<std::uint64_t>(t.replicate),
                                   cfg.setting_options);
        } catch (const Error&) {
        }
        for (Index K : cfg.K_grid) {
            const auto seg = Segmentation::equal(t.T, K);
            for (Method m : cfg.methods) {
                ExperimentRow row{t.setting, m, t.T, K, t.replicate, std::nan(""), std::nan(""), true};
                if (sc) {
                    try {
                        const auto res = estimate(sc->observed, seg, m, cfg.k, cfg.comb);
                        const auto d = evaluate_result(res, *sc);
                        row.d2_n = d.d2_n;
                        row.d2_s = d.d2_s;
                        row.failed = false;
                    } catch (const Error&) {
                    }
                }
                rows[out++] = row;
            }
        }
    };

    unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(tasks.size()));
    if (threads <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) run_task(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < threads; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < tasks.size(); i = next++) run_task(i);
            });
        for (auto& th : pool) th.join();
    }
    return rows;
}

std::vector<AggregateRow> aggregate(const std::vector<ExperimentRow>& rows) {
    using Key = std::tuple<int, int, Index, Index>;
    std::map<Key, std::size_t> slot;
    std::vector<AggregateRow> out;
    std::vector<std::vector<double>> dn, ds;
    for (const auto& r : rows) {
        const Key key{r.setting, static_cast<int>(r.method), r.T, r.K};
        auto it = slot.find(key);
        if (it == slot.end()) {
            it = slot.emplace(key, out.size()).first;
            AggregateRow a;
            a.setting = r.setting;
            a.method = r.method;
            a.T = r.T;
            a.K = r.K;
            out.push_back(a);
            dn.emplace_back();
            ds.emplace_back();
        }
        auto& a = out[it->second];
        if (r.failed) {
            ++a.failed;
            continue;
        }
        ++a.n;
        dn[it->second].push_back(r.d2_n);
        ds[it->second].push_back(r.d2_s);
    }
    auto moments = [](const std::vector<double>& v, double& mean, double& se) {
        const auto n = static_cast<double>(v.size());
        if (v.empty()) {
            mean = se = std::nan("");
            return;
        }
        mean = pairwise_sum(v) / n;
        std::vector<double> sq(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - mean) * (v[i] - mean);
        se = v.size() > 1 ? std::sqrt(pairwise_sum(sq) / (n - 1) / n) : 0.0;
    };
    for (std::size_t i = 0; i < out.size(); ++i) {
        auto& a = out[i];
        moments(dn[i], a.mean_d2_n, a.se_d2_n);
        moments(ds[i], a.mean_d2_s, a.se_d2_s);
        a.median_d2_n = median(dn[i]);
        a.median_d2_s = median(ds[i]);
        a.flagged = a.failed > 0.05 * static_cast<double>(a.n + a.failed);
    }
    return out;
}

std::string format_results_csv(const std::vector<ExperimentRow>& rows) {
    std::string s = "setting,method,T,K,replicate,d2_n,d2_s,failed\n";
    for (const auto& r : rows) {
        s += std::to_string(r.setting) + ',' + to_string(r.method) + ',' + std::to_string(r.T) + ',' +
             std::to_string(r.K) + ',' + std::to_string(r.replicate) + ',' +
             (r.failed ? std::string("NA") : format_double(r.d2_n)) + ',' +
             (r.failed ? std::string("NA") : format_double(r.d2_s)) + ',' + (r.failed ? "1" : "0") + '\n';
    }
    return s;
}

std::string format_aggregate_csv(const std::vector<AggregateRow>& agg) {
    std::string s =
        "setting,method,T,K,n,failed,mean_d2_n,se_d2_n,median_d2_n,mean_d2_s,se_d2_s,median_d2_s,flagged\n";
    auto num = [](double v) { return std::isnan(v) ? std::string("NA") : format_double(v); };
    for (const auto& a : agg) {
        s += std::to_string(a.setting) + ',' + to_string(a.method) + ',' + std::to_string(a.T) + ',' +
             std::to_string(a.K) + ',' + std::to_string(a.n) + ',' + std::to_string(a.failed) + ',' +
             num(a.mean_d2_n) + ',' + num(a.se_d2_n) + ',' + num(a.median_d2_n) + ',' + num(a.mean_d2_s) + ',' +
             num(a.se_d2_s) + ',' + num(a.median_d2_s) + ',' + (a.flagged ? "1" : "0") + '\n';
    }
    return s;
}

}  // namespace ssa
