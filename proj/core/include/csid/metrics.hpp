#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "csid/signal.hpp"

namespace csid {

// Distortion samples recorded during one trial, one entry per recorded
// iteration (iterations 0, stride, 2*stride, ...).
struct TrialTrajectory {
    std::vector<double> distortion;
    int record_stride = 1;
    std::uint64_t seed = 0;
};

// ||reference - estimate||^2 / ||reference||^2.
double relative_distortion(const Signal& reference, const Signal& estimate);

// Mean of the final ceil(tail_fraction * len) recorded values.
double steady_state_level(const TrialTrajectory& traj, double tail_fraction = 0.1);

// Parameters of the convergence rule: the trailing `window`-point moving
// average must fall to <= factor * steady-state and stay there.
struct ConvergenceCriterion {
    int window = 100;
    double factor = 1.05;
    double tail_fraction = 0.1;
};

// First iteration at which the moving average reaches the steady-state band
// and remains in it. Returns nullopt for trajectories that never settle,
// including ones whose tail sits above their head (still rising ⇒ the run
// never descended to a steady state).
std::optional<std::int64_t> convergence_iteration(const TrialTrajectory& traj,
                                                  const ConvergenceCriterion& crit = {});

enum class Reducer { mean, median };

// Scalar summary statistics over trials; NaN when no trial qualifies.
struct ScalarStats {
    double mean = 0.0;
    double stddev = 0.0;
    int count = 0;
};

struct AggregateResult {
    std::vector<double> trajectory;      // pointwise mean or median
    std::vector<double> steady_states;   // per trial, in canonical (seed) order
    std::vector<std::optional<std::int64_t>> convergence_iterations;
    ScalarStats steady_state_stats;
    ScalarStats convergence_stats;       // over trials that converged
    int record_stride = 1;
};

// Pointwise reduction over equal-length trajectories plus per-trial scalars.
// Trials are folded in canonical order (sorted by seed) with compensated
// summation, so the result is invariant to the order trials are passed in.
AggregateResult aggregate_trials(const std::vector<TrialTrajectory>& trials, Reducer reducer,
                                 const ConvergenceCriterion& crit = {});

// Order-independent compensated (Kahan) accumulator.
class KahanSum {
public:
    void add(double v) {
        const double y = v - c_;
        const double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

}  // namespace csid
