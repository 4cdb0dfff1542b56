#include "csid/adaptive.hpp"

#include <cmath>
#include <stdexcept>

namespace csid {

double filter_output(const AdaptiveState& state, const Regressor& x) {
    if (x.size() != state.w.size())
        throw std::invalid_argument("filter_output: regressor/weight dimension mismatch");
    return state.w.dot(x);
}

double instantaneous_cost(double e) { return 0.5 * e * e; }

Signal sign_vec(const Signal& x) {
    return x.unaryExpr([](double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); });
}

namespace {

AdaptiveState update_impl(const AdaptiveState& state, const Regressor& x, double d, bool zero_attract) {
    if (x.size() != state.w.size())
        throw std::invalid_argument("weight update: regressor/weight dimension mismatch");
    AdaptiveState next = state;
    const double e = state.w.dot(x) - d;
    if (zero_attract && state.rho != 0.0) {
        next.w = state.w - state.mu * e * x - state.rho * sign_vec(state.w);
    } else {
        next.w = state.w - state.mu * e * x;
    }
    next.iteration = state.iteration + 1;
    if (!next.w.allFinite())
        throw DivergenceError(state.iteration, "weight update produced a non-finite weight");
    return next;
}

}  // namespace

AdaptiveState lms_update(const AdaptiveState& state, const Regressor& x, double d) {
    return update_impl(state, x, d, false);
}

AdaptiveState za_lms_update(const AdaptiveState& state, const Regressor& x, double d) {
    return update_impl(state, x, d, true);
}

AdaptationRun run_adaptation(const AdaptiveState& initial, const Signal& pilot,
                             const Signal& desired, Algorithm algorithm,
                             const RecorderSpec& recorder) {
    const Eigen::Index D = initial.w.size();
    const Eigen::Index T = desired.size();
    if (D < 1) throw std::invalid_argument("run_adaptation: empty weight vector");
    if (pilot.size() < T)
        throw std::invalid_argument("run_adaptation: pilot shorter than desired sequence");
    if (recorder.stride < 1) throw std::invalid_argument("run_adaptation: stride must be >= 1");

    // The loop works on time-reversed weights so that each regressor is a
    // contiguous slice of the zero-padded pilot: padded[n .. n+D-1] is
    // [x_{n-D+1}, ..., x_n] and u = reverse(w) . slice.
    Signal padded = Signal::Zero(D - 1 + pilot.size());
    padded.tail(pilot.size()) = pilot;
    Signal wr = initial.w.reverse();
    Signal sgn(D);

    const bool zero_attract = algorithm == Algorithm::za_lms && initial.rho != 0.0;

    AdaptationRun run;
    run.record_stride = recorder.stride;
    if (T > 0) run.distortion.reserve(static_cast<std::size_t>((T - 1) / recorder.stride + 1));

    for (Eigen::Index n = 0; n < T; ++n) {
        const auto window = padded.segment(n, D);
        const double e = wr.dot(window) - desired[n];
        if (zero_attract) {
            sgn = sign_vec(wr);
            wr -= initial.mu * e * window;
            wr -= initial.rho * sgn;
        } else {
            wr -= initial.mu * e * window;
        }
        if (!wr.allFinite())
            throw DivergenceError(n, "adaptation diverged: non-finite weight");
        if (recorder.distortion && n % recorder.stride == 0) {
            run.distortion.push_back(recorder.distortion(wr.reverse()));
        }
    }

    run.state = initial;
    run.state.w = wr.reverse();
    run.state.iteration = initial.iteration + T;
    return run;
}

}  // namespace csid
