// csid: batch CLI for compressive sparse-system-identification experiments.
//
//   csid run    --preset fig4 [--trials N] [--seed S] [--out DIR] [--threads T]
//   csid run    --config experiment.json [...]
//   csid plot   --table results.csv --kind distortion_vs_noise --out fig4.svg
//   csid verify [--threads T]
//
// Exit codes: 0 success, 1 configuration error, 2 numerical failure.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "csid/channel.hpp"
#include "csid/errors.hpp"
#include "csid/experiment.hpp"
#include "csid/measurement.hpp"
#include "csid/recovery.hpp"
#include "csid/svg_plot.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::string& preset_name,
            std::optional<int> trials, std::optional<std::uint64_t> seed,
            std::optional<std::string> out_dir, std::optional<int> threads) {
    csid::ExperimentConfig config;
    if (!config_path.empty() && !preset_name.empty())
        throw csid::ConfigError("give either --config or --preset, not both");
    if (config_path.empty() && preset_name.empty())
        throw csid::ConfigError("one of --config or --preset is required");
    config = config_path.empty() ? csid::preset(preset_name) : csid::load_config(config_path);

    if (trials) config.trials = *trials;
    if (seed) config.base_seed = *seed;
    if (out_dir) config.output_dir = *out_dir;
    if (threads) config.threads = *threads;
    csid::validate(config);

    const csid::ExperimentOutput output = csid::run_experiment(config);
    csid::write_outputs(output, config.output_dir);

    for (const auto& note : output.diagnostics) std::cerr << note << "\n";
    std::cout << csid::format_csv(output.table);
    std::cout << "wrote " << config.output_dir << "/results.csv (+ timing, config, trajectories)\n";
    return 0;
}

int cmd_plot(const std::vector<std::string>& tables, const std::string& kind_name,
             const std::string& out_path) {
    const csid::PlotKind kind = csid::plot_kind_from_string(kind_name);
    if (kind == csid::PlotKind::convergence_curve) {
        std::vector<csid::TrajectoryTable> trajectories;
        for (const auto& path : tables) trajectories.push_back(csid::parse_trajectory_csv(path));
        csid::emit_plot(trajectories, out_path);
    } else {
        csid::ResultTable merged;
        for (const auto& path : tables) {
            const csid::ResultTable t = csid::parse_csv(path);
            merged.rows.insert(merged.rows.end(), t.rows.begin(), t.rows.end());
        }
        csid::emit_plot(merged, kind, out_path);
    }
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

bool report(const char* name, bool ok) {
    std::printf("%s %s\n", ok ? "PASS" : "FAIL", name);
    return ok;
}

// Quick self-checks over the library's key identities. The full acceptance
// suite lives in the test tree; this is the in-binary smoke version.
int cmd_verify(int threads) {
    using namespace csid;
    bool all = true;

    {
        SeededRng a(42), b(42);
        Signal x = gaussian_vector(a, 100000, 0.0, 1.0);
        Signal y = gaussian_vector(b, 100000, 0.0, 1.0);
        const double mean = x.mean();
        const double var = (x.array() - mean).square().sum() / (x.size() - 1);
        all &= report("rng: identical seeds give identical streams", x == y);
        all &= report("rng: gaussian moments in band",
                      std::abs(mean) < 0.02 && std::abs(var - 1.0) < 0.05);
    }

    {
        bool ok = true;
        SeededRng rng(7);
        for (int i = 0; i < 30 && ok; ++i) {
            const int N = 4 + static_cast<int>(rng.uniform_index(29));
            const int L = 1 + static_cast<int>(rng.uniform_index(8));
            const int q = 1 + static_cast<int>(rng.uniform_index(4));
            const int phase = static_cast<int>(rng.uniform_index(q));
            SparseSystem sys = gen_sparse_system(rng, N, std::min(3, N));
            RandomFilter f = gen_random_filter(rng, L);
            Signal pilot = gaussian_vector(rng, 40, 0.0, 1.0);
            SeededRng noise_a(1), noise_b(1);
            const MeasurementOperator op = build_measurement_operator(f, N, q, phase);
            const Signal reduced =
                compressive_desired_reduced(op, sys, pilot, noise_a, 0.0).desired;
            const Signal structural =
                compressive_desired_structural(f, sys, pilot, q, phase, noise_b, 0.0).desired;
            ok = (reduced - structural).lpNorm<Eigen::Infinity>() < 1e-10;
        }
        all &= report("channel: polyphase equivalence (structural == reduced)", ok);
    }

    {
        SeededRng rng(11);
        const RandomFilter f = gen_random_filter(rng, 80);
        const MeasurementOperator op1 = build_measurement_operator(f, 500, 2, 1);
        const MeasurementOperator op0 = build_measurement_operator(f, 500, 2, 0);
        bool ok = op1.rows() == 289 && op0.rows() == 290;
        for (int i = 0; i < 10 && ok; ++i) {
            const Signal s = gaussian_vector(rng, 500, 0.0, 1.0);
            ok = (op1.apply(s) - op1.apply_streaming(s)).lpNorm<Eigen::Infinity>() < 1e-10;
        }
        all &= report("measurement: M=289/290 and dense == convolve+decimate", ok);
    }

    {
        SeededRng rng(13);
        RandomFilter delta;
        delta.f = Signal::Zero(1);
        delta.f[0] = 1.0;
        const MeasurementOperator identity = build_measurement_operator(delta, 24, 1, 0);
        const Signal y = gaussian_vector(rng, 24, 0.0, 1.0);
        RecoveryProblem problem{y, &identity, 0.3};
        const RecoveryResult res = solve_l1(problem, SolveConfig{});
        bool ok = (res.s_hat - soft_threshold(y, 0.3)).lpNorm<Eigen::Infinity>() < 1e-8;
        RecoveryProblem basic_problem = problem;
        const RecoveryResult basic = solve_l1(basic_problem, {2000, 1e-10, Acceleration::basic});
        for (std::size_t i = 0; ok && i + 1 < basic.objective_trajectory.size(); ++i)
            ok = basic.objective_trajectory[i + 1] <= basic.objective_trajectory[i] + 1e-12;
        all &= report("recovery: orthogonal closed form and monotone descent", ok);
    }

    {
        csid::ExperimentConfig cfg;
        cfg.N = 32;
        cfg.L = 8;
        cfg.k = 3;
        cfg.mu = 0.02;
        cfg.trials = 4;
        cfg.iterations_conventional = 400;
        cfg.iterations_compressive = 400;
        cfg.record_stride = 10;
        cfg.methods = {csid::Method::lms_direct, csid::Method::compressive};
        cfg.threads = 1;
        auto strip_wall = [](csid::ResultTable t) {
            for (auto& r : t.rows) r.wall_time_s = 0.0;
            return csid::format_csv(t);
        };
        const auto serial = csid::run_experiment(cfg);
        cfg.threads = threads > 0 ? threads : 2;
        const auto parallel = csid::run_experiment(cfg);
        bool ok = strip_wall(serial.table) == strip_wall(parallel.table);
        ok = ok && serial.trajectories.size() == parallel.trajectories.size();
        for (std::size_t i = 0; ok && i < serial.trajectories.size(); ++i)
            ok = csid::format_trajectory_csv(serial.trajectories[i]) ==
                 csid::format_trajectory_csv(parallel.trajectories[i]);
        all &= report("harness: serial and parallel runs agree bit-for-bit", ok);
    }

    return all ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Compressive sparse system identification experiments"};
    app.require_subcommand(1);

    std::string config_path, preset_name, kind, out_path;
    std::vector<std::string> tables;
    std::optional<int> trials, threads;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    int verify_threads = 0;

    auto* run = app.add_subcommand("run", "Run a configured experiment");
    run->add_option("--config", config_path, "JSON experiment config");
    run->add_option("--preset", preset_name, "Built-in preset: fig4|fig5|fig6|fig7");
    run->add_option("--trials", trials, "Override trial count");
    run->add_option("--seed", seed, "Override base seed");
    run->add_option("--out", out_dir, "Override output directory");
    run->add_option("--threads", threads, "Worker threads (0 = all cores)");

    auto* plot = app.add_subcommand("plot", "Render a CSV table to SVG");
    plot->add_option("--table", tables, "Input CSV (repeatable)")->required();
    plot->add_option("--kind", kind,
                     "distortion_vs_noise|convergence_curve|distortion_vs_k|iterations_bar")
        ->required();
    plot->add_option("--out", out_path, "Output SVG path")->required();

    auto* verify = app.add_subcommand("verify", "Run built-in self checks");
    verify->add_option("--threads", verify_threads, "Worker threads for the determinism check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (run->parsed()) return cmd_run(config_path, preset_name, trials, seed, out_dir, threads);
        if (plot->parsed()) return cmd_plot(tables, kind, out_path);
        if (verify->parsed()) return cmd_verify(verify_threads);
    } catch (const csid::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const csid::DivergenceError& e) {
        std::cerr << "numerical failure: " << e.what() << " (iteration " << e.iteration() << ")\n";
        return 2;
    } catch (const csid::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
