#include "csid/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <thread>

#include <json.hpp>

#include "csid/adaptive.hpp"
#include "csid/channel.hpp"
#include "csid/errors.hpp"
#include "csid/measurement.hpp"

namespace csid {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::vector<Method> kAllMethods{Method::lms_direct, Method::za_lms_direct,
                                      Method::compressive, Method::compressive_plus_recovery};

bool is_compressive(Method m) {
    return m == Method::compressive || m == Method::compressive_plus_recovery;
}

std::string fmt_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

}  // namespace

std::string to_string(Method m) {
    switch (m) {
        case Method::lms_direct: return "lms_direct";
        case Method::za_lms_direct: return "za_lms_direct";
        case Method::compressive: return "compressive";
        case Method::compressive_plus_recovery: return "compressive_plus_recovery";
    }
    return "?";
}

std::string to_string(ExperimentId id) {
    switch (id) {
        case ExperimentId::fig4_noise_sweep: return "fig4_noise_sweep";
        case ExperimentId::fig5_convergence: return "fig5_convergence";
        case ExperimentId::fig6_curves: return "fig6_curves";
        case ExperimentId::fig7_sparsity_sweep: return "fig7_sparsity_sweep";
        case ExperimentId::custom: return "custom";
    }
    return "?";
}

std::string to_string(SweptParam p) {
    switch (p) {
        case SweptParam::none: return "none";
        case SweptParam::noise_variance: return "noise_variance";
        case SweptParam::k: return "k";
    }
    return "?";
}

Method method_from_string(const std::string& s) {
    for (Method m : kAllMethods) {
        if (to_string(m) == s) return m;
    }
    throw ConfigError("unknown method: " + s);
}

ExperimentId experiment_id_from_string(const std::string& s) {
    for (ExperimentId id : {ExperimentId::fig4_noise_sweep, ExperimentId::fig5_convergence,
                            ExperimentId::fig6_curves, ExperimentId::fig7_sparsity_sweep,
                            ExperimentId::custom}) {
        if (to_string(id) == s) return id;
    }
    throw ConfigError("unknown experiment_id: " + s);
}

SweptParam swept_param_from_string(const std::string& s) {
    for (SweptParam p : {SweptParam::none, SweptParam::noise_variance, SweptParam::k}) {
        if (to_string(p) == s) return p;
    }
    throw ConfigError("unknown swept_param: " + s);
}

ExperimentConfig preset(const std::string& name) {
    ExperimentConfig c;
    if (name == "fig4") {
        c.experiment_id = ExperimentId::fig4_noise_sweep;
        c.swept_param = SweptParam::noise_variance;
        c.sweep = {1e-3, 3e-3, 1e-2, 3e-2, 1e-1};
        c.methods = {Method::lms_direct, Method::compressive};
        c.trials = 100;
        c.output_dir = "out/fig4";
    } else if (name == "fig5") {
        c.experiment_id = ExperimentId::fig5_convergence;
        c.swept_param = SweptParam::noise_variance;
        c.sweep = {1e-2};
        c.methods = {Method::lms_direct, Method::compressive};
        c.trials = 100;
        c.output_dir = "out/fig5";
    } else if (name == "fig6") {
        c.experiment_id = ExperimentId::fig6_curves;
        c.swept_param = SweptParam::none;
        c.noise_variance = 1e-2;
        c.methods = {Method::lms_direct, Method::za_lms_direct, Method::compressive};
        c.trials = 50;
        c.output_dir = "out/fig6";
    } else if (name == "fig7") {
        c.experiment_id = ExperimentId::fig7_sparsity_sweep;
        c.swept_param = SweptParam::k;
        c.sweep = {10, 20, 40};
        c.noise_variance = 1e-2;
        c.methods = kAllMethods;
        c.trials = 50;
        c.lambda_rule = LambdaRule::scaled(0.016);
        c.output_dir = "out/fig7";
    } else {
        throw ConfigError("unknown preset: " + name + " (expected fig4|fig5|fig6|fig7)");
    }
    return c;
}

std::vector<std::string> preset_names() { return {"fig4", "fig5", "fig6", "fig7"}; }

void validate(const ExperimentConfig& c) {
    if (c.config_version != 1) throw ConfigError("unsupported config_version");
    if (c.N < 1) throw ConfigError("N must be >= 1");
    if (c.L < 1) throw ConfigError("L must be >= 1");
    if (c.k < 1 || c.k > c.N) throw ConfigError("k must be in [1, N]");
    if (c.q < 1) throw ConfigError("q must be >= 1");
    if (c.phase < 0 || c.phase >= c.q) throw ConfigError("phase must be in [0, q)");
    if (!(c.mu > 0.0)) throw ConfigError("mu must be positive");
    if (c.rho < 0.0) throw ConfigError("rho must be >= 0");
    if (c.noise_variance < 0.0) throw ConfigError("noise_variance must be >= 0");
    if (c.trials < 1) throw ConfigError("trials must be >= 1");
    if (c.methods.empty()) throw ConfigError("at least one method required");
    std::set<Method> seen;
    for (Method m : c.methods) {
        if (!seen.insert(m).second) throw ConfigError("duplicate method: " + to_string(m));
    }
    if (c.swept_param != SweptParam::none && c.sweep.empty())
        throw ConfigError("sweep values required when swept_param is set");
    if (c.swept_param == SweptParam::none && !c.sweep.empty())
        throw ConfigError("sweep values given but swept_param is none");
    for (double v : c.sweep) {
        if (c.swept_param == SweptParam::noise_variance && v < 0.0)
            throw ConfigError("swept noise_variance must be >= 0");
        if (c.swept_param == SweptParam::k &&
            (v != std::floor(v) || v < 1.0 || v > static_cast<double>(c.N)))
            throw ConfigError("swept k values must be integers in [1, N]");
    }
    if (!(c.lambda_rule.value > 0.0)) throw ConfigError("lambda rule value must be positive");
    if (c.solver.max_iterations < 1) throw ConfigError("solver max_iterations must be >= 1");
    if (!(c.solver.tolerance > 0.0)) throw ConfigError("solver tolerance must be positive");
    if (c.iterations_conventional < 1 || c.iterations_compressive < 1)
        throw ConfigError("iteration budgets must be >= 1");
    if (c.record_stride < 1) throw ConfigError("record_stride must be >= 1");
    const int min_iters = std::min(c.iterations_conventional, c.iterations_compressive);
    if (min_iters / c.record_stride < 10)
        throw ConfigError("iteration budget must cover at least 10 recorded points");
    if (c.convergence.window < 1) throw ConfigError("convergence window must be >= 1");
    if (!(c.convergence.factor > 1.0)) throw ConfigError("convergence factor must be > 1");
    if (!(c.convergence.tail_fraction > 0.0) || c.convergence.tail_fraction > 1.0)
        throw ConfigError("steady-state tail fraction must be in (0, 1]");
    if (c.threads < 0) throw ConfigError("threads must be >= 0");
    if (c.output_dir.empty()) throw ConfigError("output_dir must not be empty");
}

std::string config_to_json(const ExperimentConfig& c) {
    nlohmann::json j;
    j["config_version"] = c.config_version;
    j["experiment_id"] = to_string(c.experiment_id);
    j["N"] = c.N;
    j["L"] = c.L;
    j["k"] = c.k;
    j["q"] = c.q;
    j["phase"] = c.phase;
    j["mu"] = c.mu;
    j["rho"] = c.rho;
    j["noise_variance"] = c.noise_variance;
    j["swept_param"] = to_string(c.swept_param);
    j["sweep"] = c.sweep;
    j["trials"] = c.trials;
    j["base_seed"] = c.base_seed;
    std::vector<std::string> methods;
    for (Method m : c.methods) methods.push_back(to_string(m));
    j["methods"] = methods;
    j["lambda_rule"] = c.lambda_rule.kind == LambdaRule::Kind::scaled ? "scaled" : "fixed";
    j["lambda_value"] = c.lambda_rule.value;
    j["solver_max_iterations"] = c.solver.max_iterations;
    j["solver_tolerance"] = c.solver.tolerance;
    j["solver_acceleration"] =
        c.solver.acceleration == Acceleration::accelerated ? "accelerated" : "basic";
    j["recovery_refit"] = c.recovery_refit;
    j["iterations_conventional"] = c.iterations_conventional;
    j["iterations_compressive"] = c.iterations_compressive;
    j["record_stride"] = c.record_stride;
    j["normalize_filter"] = c.normalize_filter;
    j["convergence_window"] = c.convergence.window;
    j["convergence_factor"] = c.convergence.factor;
    j["steady_state_tail_fraction"] = c.convergence.tail_fraction;
    j["threads"] = c.threads;
    j["output_dir"] = c.output_dir;
    j["rng_algorithm"] = SeededRng::algorithm_id();
    return j.dump(2) + "\n";
}

ExperimentConfig config_from_json_string(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");

    static const std::set<std::string> known{
        "config_version", "experiment_id", "N", "L", "k", "q", "phase", "mu", "rho",
        "noise_variance", "swept_param", "sweep", "trials", "base_seed", "methods",
        "lambda_rule", "lambda_value", "recovery_refit", "solver_max_iterations", "solver_tolerance",
        "solver_acceleration", "iterations_conventional", "iterations_compressive",
        "record_stride", "normalize_filter", "convergence_window", "convergence_factor",
        "steady_state_tail_fraction", "threads", "output_dir", "rng_algorithm"};
    for (const auto& [key, value] : j.items()) {
        if (!known.count(key)) throw ConfigError("unknown config key: " + key);
    }

    ExperimentConfig c;
    try {
        if (j.count("config_version")) c.config_version = j["config_version"].get<int>();
        if (j.count("experiment_id"))
            c.experiment_id = experiment_id_from_string(j["experiment_id"].get<std::string>());
        if (j.count("N")) c.N = j["N"].get<int>();
        if (j.count("L")) c.L = j["L"].get<int>();
        if (j.count("k")) c.k = j["k"].get<int>();
        if (j.count("q")) c.q = j["q"].get<int>();
        if (j.count("phase"))
            c.phase = j["phase"].get<int>();
        else if (j.count("q"))
            c.phase = c.q == 2 ? 1 : 0;  // paper-matching default
        if (j.count("mu")) c.mu = j["mu"].get<double>();
        if (j.count("rho")) c.rho = j["rho"].get<double>();
        if (j.count("noise_variance")) c.noise_variance = j["noise_variance"].get<double>();
        if (j.count("swept_param"))
            c.swept_param = swept_param_from_string(j["swept_param"].get<std::string>());
        if (j.count("sweep")) c.sweep = j["sweep"].get<std::vector<double>>();
        if (j.count("trials")) c.trials = j["trials"].get<int>();
        if (j.count("base_seed")) c.base_seed = j["base_seed"].get<std::uint64_t>();
        if (j.count("methods")) {
            c.methods.clear();
            for (const auto& m : j["methods"]) c.methods.push_back(method_from_string(m.get<std::string>()));
        }
        if (j.count("lambda_rule")) {
            const auto rule = j["lambda_rule"].get<std::string>();
            if (rule == "scaled")
                c.lambda_rule.kind = LambdaRule::Kind::scaled;
            else if (rule == "fixed")
                c.lambda_rule.kind = LambdaRule::Kind::fixed;
            else
                throw ConfigError("lambda_rule must be scaled or fixed");
        }
        if (j.count("lambda_value")) c.lambda_rule.value = j["lambda_value"].get<double>();
        if (j.count("recovery_refit")) c.recovery_refit = j["recovery_refit"].get<bool>();
        if (j.count("solver_max_iterations"))
            c.solver.max_iterations = j["solver_max_iterations"].get<int>();
        if (j.count("solver_tolerance")) c.solver.tolerance = j["solver_tolerance"].get<double>();
        if (j.count("solver_acceleration")) {
            const auto acc = j["solver_acceleration"].get<std::string>();
            if (acc == "accelerated")
                c.solver.acceleration = Acceleration::accelerated;
            else if (acc == "basic")
                c.solver.acceleration = Acceleration::basic;
            else
                throw ConfigError("solver_acceleration must be accelerated or basic");
        }
        if (j.count("iterations_conventional"))
            c.iterations_conventional = j["iterations_conventional"].get<int>();
        if (j.count("iterations_compressive"))
            c.iterations_compressive = j["iterations_compressive"].get<int>();
        if (j.count("record_stride")) c.record_stride = j["record_stride"].get<int>();
        if (j.count("normalize_filter")) c.normalize_filter = j["normalize_filter"].get<bool>();
        if (j.count("convergence_window")) c.convergence.window = j["convergence_window"].get<int>();
        if (j.count("convergence_factor"))
            c.convergence.factor = j["convergence_factor"].get<double>();
        if (j.count("steady_state_tail_fraction"))
            c.convergence.tail_fraction = j["steady_state_tail_fraction"].get<double>();
        if (j.count("threads")) c.threads = j["threads"].get<int>();
        if (j.count("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
        if (j.count("rng_algorithm") &&
            j["rng_algorithm"].get<std::string>() != SeededRng::algorithm_id())
            throw ConfigError("config was produced with a different rng_algorithm");
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad config field type: ") + e.what());
    }
    validate(c);
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return config_from_json_string(text);
}

namespace {

struct MethodOutcome {
    bool ran = false;
    bool diverged = false;
    std::int64_t diverged_at = -1;
    std::vector<double> trajectory;
    double final_distortion = kNaN;  // recovery only
    double wall_seconds = 0.0;
};

struct TrialOutcome {
    std::uint64_t seed = 0;
    std::vector<MethodOutcome> outcomes;  // parallel to config.methods
    std::vector<std::string> notes;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int method_pos(const ExperimentConfig& cfg, Method m) {
    for (std::size_t i = 0; i < cfg.methods.size(); ++i) {
        if (cfg.methods[i] == m) return static_cast<int>(i);
    }
    return -1;
}

TrialOutcome run_one_trial(const ExperimentConfig& cfg, int trial) {
    const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(trial);
    SeededRng root(seed);
    SeededRng rng_h = root.derive("h");
    SeededRng rng_f = root.derive("f");
    SeededRng rng_pilot = root.derive("pilot");
    SeededRng rng_noise_direct = root.derive("noise/direct");
    SeededRng rng_noise_comp = root.derive("noise/compressive");

    const int pos_lms = method_pos(cfg, Method::lms_direct);
    const int pos_za = method_pos(cfg, Method::za_lms_direct);
    const int pos_comp = method_pos(cfg, Method::compressive);
    const int pos_rec = method_pos(cfg, Method::compressive_plus_recovery);

    TrialOutcome out;
    out.seed = seed;
    out.outcomes.resize(cfg.methods.size());

    SparseSystem sys = gen_sparse_system(rng_h, cfg.N, cfg.k);
    RandomFilter filt = gen_random_filter(rng_f, cfg.L);
    if (cfg.normalize_filter) filt.f *= 1.0 / std::sqrt(static_cast<double>(cfg.L));

    Eigen::Index pilot_len = 0;
    if (pos_lms >= 0 || pos_za >= 0) pilot_len = cfg.iterations_conventional;
    if (pos_comp >= 0 || pos_rec >= 0)
        pilot_len = std::max<Eigen::Index>(pilot_len, cfg.iterations_compressive);
    const Signal pilot = gaussian_vector(rng_pilot, pilot_len, 0.0, 1.0);

    auto run_one = [&](MethodOutcome& slot, const AdaptiveState& s0, const Signal& p,
                       const Signal& desired, Algorithm alg, const Signal& reference) {
        const double ref_norm2 = reference.squaredNorm();
        RecorderSpec rec{cfg.record_stride, [&](const Signal& w) {
                             return (reference - w).squaredNorm() / ref_norm2;
                         }};
        const auto t0 = std::chrono::steady_clock::now();
        AdaptiveState final_state;
        try {
            AdaptationRun run = run_adaptation(s0, p, desired, alg, rec);
            slot.trajectory = std::move(run.distortion);
            slot.ran = true;
            final_state = std::move(run.state);
        } catch (const DivergenceError& e) {
            slot.diverged = true;
            slot.diverged_at = e.iteration();
            out.notes.push_back("divergence at iteration " + std::to_string(e.iteration()) +
                                " (seed " + std::to_string(seed) + ")");
        }
        slot.wall_seconds = seconds_since(t0);
        return final_state;
    };

    if (pos_lms >= 0 || pos_za >= 0) {
        const Signal direct_pilot = pilot.head(cfg.iterations_conventional);
        const PlantOutput plant =
            conventional_desired(sys, direct_pilot, rng_noise_direct, cfg.noise_variance);
        if (pos_lms >= 0) {
            AdaptiveState s0{Signal::Zero(cfg.N), cfg.mu, 0.0, 0};
            run_one(out.outcomes[pos_lms], s0, direct_pilot, plant.desired, Algorithm::lms, sys.h);
        }
        if (pos_za >= 0) {
            AdaptiveState s0{Signal::Zero(cfg.N), cfg.mu, cfg.rho, 0};
            run_one(out.outcomes[pos_za], s0, direct_pilot, plant.desired, Algorithm::za_lms,
                    sys.h);
        }
    }

    if (pos_comp >= 0 || pos_rec >= 0) {
        const MeasurementOperator op = build_measurement_operator(filt, cfg.N, cfg.q, cfg.phase);
        const Signal target = op.apply(sys.h);
        const Signal comp_pilot = pilot.head(cfg.iterations_compressive);
        const PlantOutput plant =
            compressive_desired_reduced(op, sys, comp_pilot, rng_noise_comp, cfg.noise_variance);

        MethodOutcome adapt;
        AdaptiveState s0{Signal::Zero(op.rows()), cfg.mu, 0.0, 0};
        const AdaptiveState final_state =
            run_one(adapt, s0, comp_pilot, plant.desired, Algorithm::lms, target);

        if (pos_comp >= 0) out.outcomes[pos_comp] = adapt;
        if (pos_rec >= 0) {
            MethodOutcome& rec = out.outcomes[pos_rec];
            rec = adapt;  // shares the adaptation phase
            if (!adapt.diverged) {
                const auto t0 = std::chrono::steady_clock::now();
                const Signal h_hat =
                    recover_system(final_state.w, op, cfg.lambda_rule, cfg.solver, cfg.recovery_refit);
                rec.final_distortion = relative_distortion(sys.h, h_hat);
                rec.wall_seconds = adapt.wall_seconds + seconds_since(t0);
            }
        }
    }

    return out;
}

std::vector<TrialOutcome> run_trials(const ExperimentConfig& cfg) {
    const int n = cfg.trials;
    std::vector<TrialOutcome> results(n);
    int threads = cfg.threads > 0 ? cfg.threads
                                  : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::clamp(threads, 1, n);

    if (threads == 1) {
        for (int t = 0; t < n; ++t) results[t] = run_one_trial(cfg, t);
        return results;
    }

    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const int t = next.fetch_add(1);
            if (t >= n) return;
            try {
                results[t] = run_one_trial(cfg, t);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
    return results;
}

}  // namespace

std::string format_timing_csv(const TimingTable& table) {
    std::string out = "method,swept_param,swept_value,wall_time_s,runtime\n";
    for (const auto& r : table.rows) {
        out += r.method + "," + r.swept_param + "," + fmt_value(r.swept_value) + "," +
               fmt_value(r.wall_time_s) + "," + table.descriptor + "\n";
    }
    return out;
}

namespace {

std::string runtime_descriptor(int threads) {
    std::string compiler;
#if defined(__clang__)
    compiler = std::string("clang ") + __clang_version__;
#elif defined(__GNUC__)
    compiler = std::string("gcc ") + __VERSION__;
#else
    compiler = "unknown compiler";
#endif
    std::string os;
#if defined(__linux__)
    os = "linux";
#elif defined(__APPLE__)
    os = "macos";
#elif defined(_WIN32)
    os = "windows";
#else
    os = "unknown-os";
#endif
    return compiler + "; " + os + "; " + std::to_string(std::thread::hardware_concurrency()) +
           " hw threads; " + std::to_string(threads) + " used";
}

}  // namespace

ExperimentOutput run_experiment(const ExperimentConfig& config) {
    validate(config);

    ExperimentOutput output;
    output.config = config;
    const int threads_used =
        config.threads > 0 ? config.threads
                           : static_cast<int>(std::thread::hardware_concurrency());
    output.timing.descriptor = runtime_descriptor(std::max(1, threads_used));

    std::vector<double> sweep_values =
        config.swept_param == SweptParam::none ? std::vector<double>{0.0} : config.sweep;

    for (double value : sweep_values) {
        ExperimentConfig eff = config;
        if (config.swept_param == SweptParam::noise_variance) eff.noise_variance = value;
        if (config.swept_param == SweptParam::k) eff.k = static_cast<int>(value);

        // Advisory measurement-count check (order-of-k-log-N rule).
        const bool any_compressive = method_pos(eff, Method::compressive) >= 0 ||
                                     method_pos(eff, Method::compressive_plus_recovery) >= 0;
        if (any_compressive) {
            const int M = (eff.N + eff.L - 1 - eff.phase + eff.q - 1) / eff.q;
            const int advised = measurement_count_guidance(eff.k, eff.N, 1.0);
            if (M < advised) {
                output.diagnostics.push_back(
                    "note: M=" + std::to_string(M) + " below k*ln(N)=" + std::to_string(advised) +
                    " at " + to_string(config.swept_param) + "=" + fmt_value(value));
            }
        }

        const std::vector<TrialOutcome> trials = run_trials(eff);
        for (const auto& t : trials) {
            for (const auto& note : t.notes) output.diagnostics.push_back(note);
        }

        for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
            const Method method = config.methods[mi];

            std::vector<TrialTrajectory> completed;
            std::vector<double> recovered;
            KahanSum wall;
            for (const auto& t : trials) {
                const MethodOutcome& o = t.outcomes[mi];
                wall.add(o.wall_seconds);
                if (!o.ran || o.diverged) continue;
                completed.push_back(TrialTrajectory{o.trajectory, config.record_stride, t.seed});
                if (method == Method::compressive_plus_recovery)
                    recovered.push_back(o.final_distortion);
            }

            ResultRow row;
            row.method = to_string(method);
            row.swept_param = to_string(config.swept_param);
            row.swept_value = value;
            row.trials = static_cast<int>(completed.size());
            row.wall_time_s = wall.value();

            TrajectoryTable traj;
            traj.method = row.method;

            if (!completed.empty()) {
                const AggregateResult agg =
                    aggregate_trials(completed, Reducer::mean, config.convergence);
                row.mean_convergence_iter = agg.convergence_stats.count > 0
                                                ? agg.convergence_stats.mean
                                                : kNaN;
                const double pilot_rate = is_compressive(method) ? eff.q : 1.0;
                if (agg.convergence_stats.count > 0) {
                    KahanSum pilots;
                    for (const auto& ci : agg.convergence_iterations) {
                        if (ci) pilots.add(pilot_rate * static_cast<double>(*ci));
                    }
                    row.mean_pilots = pilots.value() / agg.convergence_stats.count;
                } else {
                    row.mean_pilots = kNaN;
                }

                if (method == Method::compressive_plus_recovery) {
                    KahanSum sum;
                    for (double d : recovered) sum.add(d);
                    row.mean_distortion = sum.value() / static_cast<double>(recovered.size());
                    if (recovered.size() > 1) {
                        KahanSum sq;
                        for (double d : recovered)
                            sq.add((d - row.mean_distortion) * (d - row.mean_distortion));
                        row.std_distortion =
                            std::sqrt(sq.value() / static_cast<double>(recovered.size() - 1));
                    }
                } else {
                    row.mean_distortion = agg.steady_state_stats.mean;
                    row.std_distortion = agg.steady_state_stats.stddev;
                }

                for (std::size_t j = 0; j < agg.trajectory.size(); ++j)
                    traj.iterations.push_back(static_cast<std::int64_t>(j) * config.record_stride);
                traj.mean = agg.trajectory;
                for (const auto& trial : completed) traj.per_trial.push_back(trial.distortion);
            } else {
                row.mean_distortion = row.std_distortion = kNaN;
                row.mean_convergence_iter = row.mean_pilots = kNaN;
            }

            output.table.rows.push_back(row);
            std::string name = "traj_" + row.method;
            if (config.swept_param != SweptParam::none)
                name += "_" + row.swept_param + "_" + fmt_value(value);
            output.trajectories.push_back(std::move(traj));
            output.trajectory_names.push_back(std::move(name));

            output.timing.rows.push_back(
                TimingTable::Row{row.method, row.swept_param, value, row.wall_time_s});
        }
    }

    return output;
}

namespace {

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path.string());
    f << content;
    if (!f) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

void write_outputs(const ExperimentOutput& output, const std::string& output_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(output_dir);
    emit_csv(output.table, (fs::path(output_dir) / "results.csv").string());
    write_text_file(fs::path(output_dir) / "timing.csv", format_timing_csv(output.timing));
    write_text_file(fs::path(output_dir) / "config_resolved.json", config_to_json(output.config));
    for (std::size_t i = 0; i < output.trajectories.size(); ++i) {
        if (output.trajectories[i].iterations.empty()) continue;
        emit_trajectory_csv(output.trajectories[i],
                            (fs::path(output_dir) / (output.trajectory_names[i] + ".csv")).string());
    }
}

TimingTable timing_report(const ExperimentConfig& config) {
    return run_experiment(config).timing;
}

}  // namespace csid
