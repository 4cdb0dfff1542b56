#pragma once

#include <cstdint>

#include "csid/measurement.hpp"
#include "csid/rng.hpp"
#include "csid/signal.hpp"

namespace csid {

// Desired-signal stream produced by a simulated plant: one sample per
// adaptive iteration, plus the number of pilot samples actually transmitted
// (equal to the iteration count for the direct path, q times it for the
// compressive front end).
struct PlantOutput {
    Signal desired;
    std::int64_t transmitted_pilot_count = 0;
};

// Direct path: d[n] = h^T x^(n) + v[n], regressor pre-history zero-padded.
PlantOutput conventional_desired(const SparseSystem& h, const Signal& pilot, SeededRng& rng,
                                 double noise_variance);

// Compressive plant in reduced form: the target is g = Phi_f h and
// d[n] = g^T x^(n) + v[n] with regressors drawn from the original-rate pilot.
// Decimating white noise leaves it white with the same variance, so v is
// added directly at the decimated rate.
PlantOutput compressive_desired_reduced(const MeasurementOperator& op, const SparseSystem& h,
                                        const Signal& pilot, SeededRng& rng,
                                        double noise_variance);

// Compressive plant simulated structurally: upsample the pilot by q, pass it
// through f then h, add AWGN at the receiver input, decimate at the given
// phase. Noiseless, this equals the reduced form sample for sample (the
// polyphase identity), which is what makes the adaptive target exactly Phi_f h.
PlantOutput compressive_desired_structural(const RandomFilter& f, const SparseSystem& h,
                                           const Signal& pilot, int q, int phase, SeededRng& rng,
                                           double noise_variance);

}  // namespace csid
