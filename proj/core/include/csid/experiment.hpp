#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "csid/csv.hpp"
#include "csid/metrics.hpp"
#include "csid/recovery.hpp"

namespace csid {

enum class Method { lms_direct, za_lms_direct, compressive, compressive_plus_recovery };

enum class ExperimentId {
    fig4_noise_sweep,
    fig5_convergence,
    fig6_curves,
    fig7_sparsity_sweep,
    custom
};

enum class SweptParam { none, noise_variance, k };

std::string to_string(Method m);
std::string to_string(ExperimentId id);
std::string to_string(SweptParam p);
Method method_from_string(const std::string& s);
ExperimentId experiment_id_from_string(const std::string& s);
SweptParam swept_param_from_string(const std::string& s);

// Fully-typed flat experiment description. Loaded from a flat JSON document
// (see README for the schema); every field has a default, and the resolved
// config is serialized next to the results of each run.
struct ExperimentConfig {
    int config_version = 1;
    ExperimentId experiment_id = ExperimentId::custom;

    int N = 500;
    int L = 80;
    int k = 40;
    int q = 2;
    int phase = 1;

    double mu = 0.003;
    double rho = 2.5e-5;
    double noise_variance = 0.01;

    SweptParam swept_param = SweptParam::none;
    std::vector<double> sweep;

    int trials = 100;
    std::uint64_t base_seed = 1;
    std::vector<Method> methods{Method::lms_direct, Method::compressive};

    LambdaRule lambda_rule = LambdaRule::scaled(0.01);
    SolveConfig solver;
    // Least-squares re-fit on the recovered support; removes the l1
    // shrinkage bias from the final system estimate.
    bool recovery_refit = true;

    int iterations_conventional = 20000;
    int iterations_compressive = 10000;
    int record_stride = 10;

    // Scale filter taps by 1/sqrt(L) so operator rows have unit norm in
    // expectation (the usual measurement-matrix normalization).
    bool normalize_filter = true;

    ConvergenceCriterion convergence;

    int threads = 0;  // 0 = all hardware threads
    std::string output_dir = "out";
};

// Baked-in parameter sets reproducing the four figure experiments.
ExperimentConfig preset(const std::string& name);
std::vector<std::string> preset_names();

// Throws ConfigError with a description of the first violated precondition.
void validate(const ExperimentConfig& config);

std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json_string(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Informational wall-clock table (the hardware-dependent report); separate
// from the deterministic results so reruns of a config stay byte-identical.
struct TimingTable {
    std::string descriptor;  // compiler / platform / thread count
    struct Row {
        std::string method;
        std::string swept_param;
        double swept_value = 0.0;
        double wall_time_s = 0.0;
    };
    std::vector<Row> rows;
};

std::string format_timing_csv(const TimingTable& table);

struct ExperimentOutput {
    ExperimentConfig config;
    ResultTable table;
    std::vector<TrajectoryTable> trajectories;        // one per (sweep value, method)
    std::vector<std::string> trajectory_names;        // matching file stems
    TimingTable timing;
    std::vector<std::string> diagnostics;             // divergence notes etc.
};

// Runs every (sweep value, trial, method) with paired realizations: within a
// trial index all methods see the same h, f and pilot. Deterministic for a
// fixed config, serial or parallel, except for the measured wall times.
ExperimentOutput run_experiment(const ExperimentConfig& config);

// Writes results.csv, timing.csv, config_resolved.json and the per-trial
// trajectory CSVs into output_dir.
void write_outputs(const ExperimentOutput& output, const std::string& output_dir);

// Runs the experiment and returns just the wall-time table.
TimingTable timing_report(const ExperimentConfig& config);

}  // namespace csid
