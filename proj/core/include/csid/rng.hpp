#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace csid {

// Deterministic random stream. mt19937_64 is bit-exact across platforms by
// the C++ standard, but the std <random> distributions are not, so the
// Gaussian (Box-Muller) and bounded-integer draws are implemented here.
// Identical (seed, algorithm id) therefore reproduces identical streams on
// any conforming implementation. The id string is recorded in experiment
// outputs so results stay replayable if the scheme ever changes.
class SeededRng {
public:
    static constexpr const char* kAlgorithmId = "mt19937_64/box-muller/v1";

    explicit SeededRng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }
    static std::string algorithm_id() { return kAlgorithmId; }

    // Independent substream for a named purpose ("h", "pilot", ...), so that
    // e.g. changing the pilot length never perturbs the system draw.
    SeededRng derive(const std::string& tag) const;

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller; generated in pairs, second value cached.
    double gaussian();

    // Uniform integer in [0, bound), rejection-sampled to avoid modulo bias.
    std::uint64_t uniform_index(std::uint64_t bound);

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace csid
