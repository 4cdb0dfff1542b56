#include "csid/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace csid {

double relative_distortion(const Signal& reference, const Signal& estimate) {
    if (reference.size() != estimate.size())
        throw std::invalid_argument("relative_distortion: length mismatch");
    const double ref_norm2 = reference.squaredNorm();
    if (ref_norm2 == 0.0)
        throw std::invalid_argument("relative_distortion: zero reference");
    return (reference - estimate).squaredNorm() / ref_norm2;
}

double steady_state_level(const TrialTrajectory& traj, double tail_fraction) {
    const auto len = traj.distortion.size();
    if (len < 10) throw std::invalid_argument("steady_state_level: trajectory too short");
    if (tail_fraction <= 0.0 || tail_fraction > 1.0)
        throw std::invalid_argument("steady_state_level: tail_fraction must be in (0, 1]");
    const auto tail = static_cast<std::size_t>(
        std::ceil(tail_fraction * static_cast<double>(len)));
    KahanSum sum;
    for (std::size_t i = len - tail; i < len; ++i) sum.add(traj.distortion[i]);
    return sum.value() / static_cast<double>(tail);
}

namespace {

// Trailing moving averages with partial windows at the head.
std::vector<double> moving_average(const std::vector<double>& v, int window) {
    std::vector<double> ma(v.size());
    KahanSum sum;
    for (std::size_t i = 0; i < v.size(); ++i) {
        sum.add(v[i]);
        if (i >= static_cast<std::size_t>(window)) sum.add(-v[i - window]);
        const auto n = std::min<std::size_t>(i + 1, static_cast<std::size_t>(window));
        ma[i] = sum.value() / static_cast<double>(n);
    }
    return ma;
}

}  // namespace

std::optional<std::int64_t> convergence_iteration(const TrialTrajectory& traj,
                                                  const ConvergenceCriterion& crit) {
    if (crit.window < 1) throw std::invalid_argument("convergence_iteration: window must be >= 1");
    if (crit.factor <= 1.0) throw std::invalid_argument("convergence_iteration: factor must be > 1");

    const double steady = steady_state_level(traj, crit.tail_fraction);
    const std::vector<double> ma = moving_average(traj.distortion, crit.window);
    const double threshold = crit.factor * steady;

    // A run whose tail sits above its head never came down to a steady
    // state: report it as not converged rather than "converged at 0".
    const auto head_n = std::min<std::size_t>(ma.size(), static_cast<std::size_t>(crit.window));
    KahanSum head_sum;
    for (std::size_t i = 0; i < head_n; ++i) head_sum.add(traj.distortion[i]);
    const double head = head_sum.value() / static_cast<double>(head_n);
    if (steady > crit.factor * head) return std::nullopt;

    // Last index whose moving average is still above the band; settle after it.
    std::size_t settle = 0;
    for (std::size_t i = 0; i < ma.size(); ++i) {
        if (ma[i] > threshold) settle = i + 1;
    }
    if (settle >= ma.size()) return std::nullopt;
    return static_cast<std::int64_t>(settle) * traj.record_stride;
}

AggregateResult aggregate_trials(const std::vector<TrialTrajectory>& trials, Reducer reducer,
                                 const ConvergenceCriterion& crit) {
    if (trials.empty()) throw std::invalid_argument("aggregate_trials: no trials");
    const auto len = trials.front().distortion.size();
    const int stride = trials.front().record_stride;
    for (const auto& t : trials) {
        if (t.distortion.size() != len || t.record_stride != stride)
            throw std::invalid_argument("aggregate_trials: trajectories must share length and stride");
    }

    // Canonical order: sort by seed (distinct in harness runs), breaking ties
    // by value so the fold is a pure function of the trial set.
    std::vector<const TrialTrajectory*> order(trials.size());
    for (std::size_t i = 0; i < trials.size(); ++i) order[i] = &trials[i];
    std::sort(order.begin(), order.end(), [](const TrialTrajectory* a, const TrialTrajectory* b) {
        if (a->seed != b->seed) return a->seed < b->seed;
        return std::lexicographical_compare(a->distortion.begin(), a->distortion.end(),
                                            b->distortion.begin(), b->distortion.end());
    });

    AggregateResult out;
    out.record_stride = stride;
    out.trajectory.resize(len);

    if (reducer == Reducer::mean) {
        for (std::size_t j = 0; j < len; ++j) {
            KahanSum sum;
            for (const auto* t : order) sum.add(t->distortion[j]);
            out.trajectory[j] = sum.value() / static_cast<double>(trials.size());
        }
    } else {
        std::vector<double> column(trials.size());
        for (std::size_t j = 0; j < len; ++j) {
            for (std::size_t i = 0; i < order.size(); ++i) column[i] = order[i]->distortion[j];
            std::sort(column.begin(), column.end());
            const auto mid = column.size() / 2;
            out.trajectory[j] = column.size() % 2 == 1
                                    ? column[mid]
                                    : 0.5 * (column[mid - 1] + column[mid]);
        }
    }

    out.steady_states.reserve(trials.size());
    out.convergence_iterations.reserve(trials.size());
    for (const auto* t : order) {
        out.steady_states.push_back(steady_state_level(*t, crit.tail_fraction));
        out.convergence_iterations.push_back(convergence_iteration(*t, crit));
    }

    auto stats_of = [](const std::vector<double>& xs) {
        ScalarStats s;
        s.count = static_cast<int>(xs.size());
        if (xs.empty()) {
            s.mean = s.stddev = std::numeric_limits<double>::quiet_NaN();
            return s;
        }
        KahanSum sum;
        for (double x : xs) sum.add(x);
        s.mean = sum.value() / static_cast<double>(xs.size());
        if (xs.size() > 1) {
            KahanSum sq;
            for (double x : xs) sq.add((x - s.mean) * (x - s.mean));
            s.stddev = std::sqrt(sq.value() / static_cast<double>(xs.size() - 1));
        }
        return s;
    };

    out.steady_state_stats = stats_of(out.steady_states);
    std::vector<double> converged;
    for (const auto& c : out.convergence_iterations) {
        if (c) converged.push_back(static_cast<double>(*c));
    }
    out.convergence_stats = stats_of(converged);
    return out;
}

}  // namespace csid
