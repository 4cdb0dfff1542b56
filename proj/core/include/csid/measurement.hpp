#pragma once

#include <Eigen/Dense>

#include "csid/rng.hpp"
#include "csid/signal.hpp"

namespace csid {

// Unknown FIR system: length-N impulse response with exactly k nonzero taps.
struct SparseSystem {
    Signal h;
    int N = 0;
    int k = 0;
};

// Length-L FIR filter with random taps; forms the measurement operator.
struct RandomFilter {
    Signal f;
    int length() const { return static_cast<int>(f.size()); }
};

// Decimated convolution matrix of a random filter: row i equals row
// (q*i + phase) of the full (N+L-1) x N convolution matrix of f, so
// M = ceil((N + L - 1 - phase) / q). Applying it to a length-N signal is
// the same thing as convolving with f and keeping every q-th sample.
class MeasurementOperator {
public:
    MeasurementOperator(RandomFilter f, int N, int q, int phase);

    int rows() const { return static_cast<int>(matrix_.rows()); }  // M
    int cols() const { return N_; }                                // N
    int filter_length() const { return filter_.length(); }         // L
    int decimation() const { return q_; }
    int phase() const { return phase_; }
    const RandomFilter& filter() const { return filter_; }
    const Eigen::MatrixXd& matrix() const { return matrix_; }

    // y = Phi_f * s via the dense matrix.
    Signal apply(const Signal& s) const;

    // Same product via the matrix-free route: downsample(convolve(s, f)).
    // Kept as an independent path; the two must agree to 1e-10.
    Signal apply_streaming(const Signal& s) const;

    // Phi_f^T * v.
    Signal apply_adjoint(const Signal& v) const;

private:
    RandomFilter filter_;
    int N_;
    int q_;
    int phase_;
    Eigen::MatrixXd matrix_;
};

// k support positions drawn uniformly without replacement, values i.i.d.
// Gaussian(0,1); remaining taps exactly zero.
SparseSystem gen_sparse_system(SeededRng& rng, int N, int k);

// L i.i.d. Gaussian(0,1) taps.
RandomFilter gen_random_filter(SeededRng& rng, int L);

MeasurementOperator build_measurement_operator(const RandomFilter& f, int N, int q, int phase);

Signal apply_measurement(const MeasurementOperator& op, const Signal& s);

// ceil(c * k * ln N): advisory lower bound on M for reliable recovery.
// Purely informational; the harness logs when M falls below it.
int measurement_count_guidance(int k, int N, double c);

}  // namespace csid
