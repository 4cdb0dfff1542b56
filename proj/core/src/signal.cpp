#include "csid/signal.hpp"

#include <cmath>
#include <stdexcept>

namespace csid {

Signal gaussian_vector(SeededRng& rng, Eigen::Index n, double mean, double variance) {
    if (n < 1) throw std::invalid_argument("gaussian_vector: n must be >= 1");
    if (variance < 0.0) throw std::invalid_argument("gaussian_vector: variance must be >= 0");
    if (variance == 0.0) return Signal::Constant(n, mean);
    const double sigma = std::sqrt(variance);
    Signal out(n);
    for (Eigen::Index i = 0; i < n; ++i) out[i] = mean + sigma * rng.gaussian();
    return out;
}

Signal convolve_full(const Signal& a, const Signal& b) {
    if (a.size() == 0 || b.size() == 0)
        throw std::invalid_argument("convolve_full: inputs must be nonempty");
    Signal out = Signal::Zero(a.size() + b.size() - 1);
    for (Eigen::Index j = 0; j < b.size(); ++j) {
        out.segment(j, a.size()) += b[j] * a;
    }
    return out;
}

Signal upsample(const Signal& x, int q) {
    if (q < 1) throw std::invalid_argument("upsample: q must be >= 1");
    if (q == 1) return x;
    Signal out = Signal::Zero(x.size() * q);
    for (Eigen::Index i = 0; i < x.size(); ++i) out[q * i] = x[i];
    return out;
}

Signal downsample(const Signal& x, int q, int phase) {
    if (q < 1) throw std::invalid_argument("downsample: q must be >= 1");
    if (phase < 0 || phase >= q) throw std::invalid_argument("downsample: phase must be in [0, q)");
    if (q == 1) return x;
    const Eigen::Index n = x.size() > phase ? (x.size() - phase + q - 1) / q : 0;
    Signal out(n);
    for (Eigen::Index i = 0; i < n; ++i) out[i] = x[q * i + phase];
    return out;
}

Signal add_awgn(const Signal& x, SeededRng& rng, double variance) {
    if (variance < 0.0) throw std::invalid_argument("add_awgn: variance must be >= 0");
    if (variance == 0.0) return x;
    const double sigma = std::sqrt(variance);
    Signal out(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = x[i] + sigma * rng.gaussian();
    return out;
}

}  // namespace csid
