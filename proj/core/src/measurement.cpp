#include "csid/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace csid {

MeasurementOperator::MeasurementOperator(RandomFilter f, int N, int q, int phase)
    : filter_(std::move(f)), N_(N), q_(q), phase_(phase) {
    if (N < 1) throw std::invalid_argument("MeasurementOperator: N must be >= 1");
    if (q < 1) throw std::invalid_argument("MeasurementOperator: q must be >= 1");
    if (phase < 0 || phase >= q)
        throw std::invalid_argument("MeasurementOperator: phase must be in [0, q)");
    const int L = filter_.length();
    if (L < 1) throw std::invalid_argument("MeasurementOperator: filter must be nonempty");

    const int full_rows = N + L - 1;
    const int M = (full_rows - phase + q - 1) / q;
    matrix_ = Eigen::MatrixXd::Zero(M, N);
    for (int i = 0; i < M; ++i) {
        const int r = q * i + phase;  // row of the full convolution matrix
        for (int j = 0; j < N; ++j) {
            const int tap = r - j;
            if (tap >= 0 && tap < L) matrix_(i, j) = filter_.f[tap];
        }
    }
}

Signal MeasurementOperator::apply(const Signal& s) const {
    if (s.size() != N_)
        throw std::invalid_argument("MeasurementOperator::apply: signal length must equal N");
    return matrix_ * s;
}

Signal MeasurementOperator::apply_streaming(const Signal& s) const {
    if (s.size() != N_)
        throw std::invalid_argument("MeasurementOperator::apply_streaming: signal length must equal N");
    return downsample(convolve_full(s, filter_.f), q_, phase_);
}

Signal MeasurementOperator::apply_adjoint(const Signal& v) const {
    if (v.size() != matrix_.rows())
        throw std::invalid_argument("MeasurementOperator::apply_adjoint: length must equal M");
    return matrix_.transpose() * v;
}

SparseSystem gen_sparse_system(SeededRng& rng, int N, int k) {
    if (N < 1) throw std::invalid_argument("gen_sparse_system: N must be >= 1");
    if (k < 0 || k > N) throw std::invalid_argument("gen_sparse_system: need 0 <= k <= N");

    // Partial Fisher-Yates for the support, then values in sorted-position
    // order so the draw sequence is canonical.
    std::vector<int> idx(N);
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = 0; i < k; ++i) {
        const auto j = i + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(N - i)));
        std::swap(idx[i], idx[j]);
    }
    std::sort(idx.begin(), idx.begin() + k);

    SparseSystem sys;
    sys.N = N;
    sys.k = k;
    sys.h = Signal::Zero(N);
    for (int i = 0; i < k; ++i) {
        double v = rng.gaussian();
        while (v == 0.0) v = rng.gaussian();  // keep the support size exactly k
        sys.h[idx[i]] = v;
    }
    return sys;
}

RandomFilter gen_random_filter(SeededRng& rng, int L) {
    if (L < 1) throw std::invalid_argument("gen_random_filter: L must be >= 1");
    RandomFilter f;
    f.f = gaussian_vector(rng, L, 0.0, 1.0);
    return f;
}

MeasurementOperator build_measurement_operator(const RandomFilter& f, int N, int q, int phase) {
    return MeasurementOperator(f, N, q, phase);
}

Signal apply_measurement(const MeasurementOperator& op, const Signal& s) {
    return op.apply(s);
}

int measurement_count_guidance(int k, int N, double c) {
    if (k < 1 || k > N) throw std::invalid_argument("measurement_count_guidance: need 1 <= k <= N");
    if (c <= 0.0) throw std::invalid_argument("measurement_count_guidance: c must be positive");
    const double bound = c * static_cast<double>(k) * std::log(static_cast<double>(N));
    return std::max(1, static_cast<int>(std::ceil(bound)));
}

}  // namespace csid
