#include "ssa/moments.hpp"

namespace ssa {

std::string format_diagnostics_csv(const std::vector<IntervalRecord>& records, Index tau) {
    std::string s = "channel,interval_index,start,end,mean,variance,autocov_lag_" + std::to_string(tau) + "\n";
    for (const auto& r : records) {
        s += std::to_string(r.channel) + ',' + std::to_string(r.interval_index) + ',' + std::to_string(r.start) + ',' +
             std::to_string(r.end) + ',' + format_double(r.mean) + ',' + format_double(r.variance) + ',' +
             format_double(r.autocov) + '\n';
    }
    return s;
}

}  // namespace ssa
