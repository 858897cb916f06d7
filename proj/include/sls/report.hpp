#ifndef SLS_REPORT_HPP
#define SLS_REPORT_HPP

#include <string>

#include "sls/bench.hpp"

namespace sls {

/// header: method,K,trial,seed,coeff_error,residual_error,exact_recovery,
///         wall_time_s,early_term
std::string trials_csv(const BenchmarkReport& report);

/// header: method,K,mean_coeff_error,recovery_rate,mean_time_s
std::string aggregate_csv(const BenchmarkReport& report);

std::string summary_json(const BenchmarkReport& report);

/// Writes `path` (trials CSV) plus the aggregate CSV and JSON summary next
/// to it ("<stem>_agg.csv", "<stem>_summary.json").
void write_report(const std::string& path, const BenchmarkReport& report);

/// CSV payload with the wall-time column removed, for reproducibility
/// comparisons.
std::string strip_wall_time(const std::string& csv);

}  // namespace sls

#endif
