#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "csid/errors.hpp"
#include "csid/signal.hpp"

namespace csid {

// Weight vector plus update parameters. The weight length is the plant
// dimension: N for direct identification, M for the compressive scheme.
struct AdaptiveState {
    Signal w;
    double mu = 0.0;
    double rho = 0.0;  // zero-attractor gain; 0 for plain LMS
    std::int64_t iteration = 0;
};

// Regressor convention follows the update equations: x = [x_n, x_{n-1}, ...],
// most recent pilot sample first.
using Regressor = Signal;

enum class Algorithm { lms, za_lms };

// u = w^T x.
double filter_output(const AdaptiveState& state, const Regressor& x);

// F = e^2 / 2.
double instantaneous_cost(double e);

// Elementwise x/|x| with sign(0) = 0.
Signal sign_vec(const Signal& x);

// One step of w' = w - mu * e * x with e = w^T x - d.
AdaptiveState lms_update(const AdaptiveState& state, const Regressor& x, double d);

// One step of w' = w - mu * e * x - rho * sign(w). Reduces to lms_update at rho = 0.
AdaptiveState za_lms_update(const AdaptiveState& state, const Regressor& x, double d);

// Distortion probe invoked during adaptation. `distortion` sees the current
// weights in natural order; its values are recorded every `stride` updates.
struct RecorderSpec {
    int stride = 1;
    std::function<double(const Signal& w)> distortion;
};

struct AdaptationRun {
    AdaptiveState state;
    std::vector<double> distortion;  // recorded at iterations 0, stride, 2*stride, ...
    int record_stride = 1;
};

// Runs one update per desired sample against the given pilot, zero-padding
// the regressor pre-history. Throws DivergenceError (with the iteration
// index) if any weight turns non-finite.
AdaptationRun run_adaptation(const AdaptiveState& initial, const Signal& pilot,
                             const Signal& desired, Algorithm algorithm,
                             const RecorderSpec& recorder);

}  // namespace csid
