#pragma once

#include <string>
#include <vector>

#include "csid/metrics.hpp"

namespace csid {

// One aggregated row per (method, swept value).
struct ResultRow {
    std::string method;
    std::string swept_param;
    double swept_value = 0.0;
    int trials = 0;
    double mean_distortion = 0.0;
    double std_distortion = 0.0;
    double mean_convergence_iter = 0.0;  // NaN when no trial converged
    double mean_pilots = 0.0;
    double wall_time_s = 0.0;
};

struct ResultTable {
    std::vector<ResultRow> rows;
};

// Fixed header, stable across versions.
inline constexpr const char* kResultCsvHeader =
    "method,swept_param,swept_value,trials,mean_distortion,std_distortion,"
    "mean_convergence_iter,mean_pilots,wall_time_s";

// Floats with 9 significant digits.
std::string format_csv(const ResultTable& table);
void emit_csv(const ResultTable& table, const std::string& path);
ResultTable parse_csv_string(const std::string& text);
ResultTable parse_csv(const std::string& path);

// Per-trial trajectories for one (method, swept value):
// method,iteration,mean_distortion,trial_000,... with one row per recorded
// iteration.
struct TrajectoryTable {
    std::string method;
    std::vector<std::int64_t> iterations;
    std::vector<double> mean;
    std::vector<std::vector<double>> per_trial;  // per_trial[t][row]
};

std::string format_trajectory_csv(const TrajectoryTable& table);
void emit_trajectory_csv(const TrajectoryTable& table, const std::string& path);
TrajectoryTable parse_trajectory_csv(const std::string& path);

}  // namespace csid
