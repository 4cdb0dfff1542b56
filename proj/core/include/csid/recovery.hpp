#pragma once

#include <vector>

#include "csid/measurement.hpp"
#include "csid/signal.hpp"

namespace csid {

// min_s 1/2 ||y - Phi s||^2 + lambda ||s||_1, where y is the adapted weight
// vector standing in for the measurements of the unknown sparse system.
struct RecoveryProblem {
    Signal y;
    const MeasurementOperator* op = nullptr;
    double lambda = 0.0;
};

struct RecoveryResult {
    Signal s_hat;
    std::vector<double> objective_trajectory;
    int iterations = 0;
    bool converged = false;
};

enum class Acceleration { basic, accelerated };

struct SolveConfig {
    int max_iterations = 5000;
    double tolerance = 1e-8;  // relative objective change
    Acceleration acceleration = Acceleration::accelerated;
};

// Exact objective value at s.
double objective(const RecoveryProblem& problem, const Signal& s);

// Elementwise sign(v) * max(|v| - tau, 0): proximal operator of tau*||.||_1.
Signal soft_threshold(const Signal& v, double tau);

// Upper bound on the largest eigenvalue of Phi^T Phi: power iteration with a
// safety margin, capped by exact norm bounds. Fixes the shrinkage step 1/L.
double lipschitz_bound(const MeasurementOperator& op, int max_iterations = 300,
                       double tolerance = 1e-3);

// Iterative shrinkage-thresholding. Basic mode descends monotonically;
// accelerated mode adds momentum with restart-on-increase so the recorded
// objective trajectory is non-increasing either way.
RecoveryResult solve_l1(const RecoveryProblem& problem, const SolveConfig& config = {});

// Lambda selection for recover_system.
struct LambdaRule {
    enum class Kind { fixed, scaled } kind = Kind::scaled;
    double value = 0.01;  // lambda itself (fixed) or c in c * ||Phi^T y||_inf (scaled)

    static LambdaRule fixed(double lambda) { return {Kind::fixed, lambda}; }
    static LambdaRule scaled(double c) { return {Kind::scaled, c}; }
};

// Reconstruct the sparse system from the adapted weights w_hat ~ Phi_f h.
// With `refit` set, the l1 solution selects the support and a least-squares
// re-fit on that support removes the shrinkage bias; the experiment pipeline
// runs with the re-fit on.
Signal recover_system(const Signal& w_hat, const MeasurementOperator& op,
                      const LambdaRule& rule = {}, const SolveConfig& config = {},
                      bool refit = false);

}  // namespace csid
