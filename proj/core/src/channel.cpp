#include "csid/channel.hpp"

#include <stdexcept>

namespace csid {

namespace {

// First len(pilot) samples of pilot * g, i.e. d[n] = sum_i g[i] pilot[n-i]
// with zero pre-history. One desired sample per pilot sample.
Signal filtered_desired(const Signal& pilot, const Signal& g) {
    return convolve_full(pilot, g).head(pilot.size());
}

}  // namespace

PlantOutput conventional_desired(const SparseSystem& h, const Signal& pilot, SeededRng& rng,
                                 double noise_variance) {
    if (pilot.size() == 0) throw std::invalid_argument("conventional_desired: pilot must be nonempty");
    PlantOutput out;
    out.desired = add_awgn(filtered_desired(pilot, h.h), rng, noise_variance);
    out.transmitted_pilot_count = pilot.size();
    return out;
}

PlantOutput compressive_desired_reduced(const MeasurementOperator& op, const SparseSystem& h,
                                        const Signal& pilot, SeededRng& rng,
                                        double noise_variance) {
    if (op.cols() != h.N)
        throw std::invalid_argument("compressive_desired_reduced: operator/system dimension mismatch");
    if (pilot.size() == 0)
        throw std::invalid_argument("compressive_desired_reduced: pilot must be nonempty");
    const Signal g = op.apply(h.h);
    PlantOutput out;
    out.desired = add_awgn(filtered_desired(pilot, g), rng, noise_variance);
    out.transmitted_pilot_count = static_cast<std::int64_t>(op.decimation()) * pilot.size();
    return out;
}

PlantOutput compressive_desired_structural(const RandomFilter& f, const SparseSystem& h,
                                           const Signal& pilot, int q, int phase, SeededRng& rng,
                                           double noise_variance) {
    if (q < 1) throw std::invalid_argument("compressive_desired_structural: q must be >= 1");
    if (phase < 0 || phase >= q)
        throw std::invalid_argument("compressive_desired_structural: phase must be in [0, q)");
    if (pilot.size() == 0)
        throw std::invalid_argument("compressive_desired_structural: pilot must be nonempty");

    const Signal at_receiver = convolve_full(convolve_full(upsample(pilot, q), f.f), h.h);
    const Signal decimated = downsample(add_awgn(at_receiver, rng, noise_variance), q, phase);

    PlantOutput out;
    out.desired = decimated.head(pilot.size());
    out.transmitted_pilot_count = static_cast<std::int64_t>(q) * pilot.size();
    return out;
}

}  // namespace csid
