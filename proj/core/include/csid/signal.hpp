#pragma once

#include <Eigen/Dense>

#include "csid/rng.hpp"

namespace csid {

// Real-valued discrete signal, unitless amplitudes.
using Signal = Eigen::VectorXd;

// n i.i.d. Gaussian(mean, variance) samples. variance = 0 gives the constant
// signal and consumes no randomness.
Signal gaussian_vector(SeededRng& rng, Eigen::Index n, double mean, double variance);

// Full linear convolution, length len(a) + len(b) - 1. Direct form.
Signal convolve_full(const Signal& a, const Signal& b);

// Zero-insertion upsampling: output[q*i] = x[i], all other samples 0.
Signal upsample(const Signal& x, int q);

// Keep every q-th sample starting at `phase`: output[i] = x[q*i + phase].
Signal downsample(const Signal& x, int q, int phase);

// x plus i.i.d. zero-mean Gaussian noise of the given variance.
// variance = 0 returns x unchanged and consumes no randomness.
Signal add_awgn(const Signal& x, SeededRng& rng, double variance);

}  // namespace csid
