#include "csid/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace csid {

namespace {

// splitmix64 finalizer, used to mix (seed, tag) into a substream seed.
std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// FNV-1a over the tag bytes; any stable string hash would do.
std::uint64_t hash_tag(const std::string& tag) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : tag) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

SeededRng SeededRng::derive(const std::string& tag) const {
    return SeededRng(mix64(seed_ ^ hash_tag(tag)));
}

double SeededRng::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // u1 in (0, 1] to keep log finite.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

std::uint64_t SeededRng::uniform_index(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("uniform_index: bound must be positive");
    const std::uint64_t threshold = (0ULL - bound) % bound;
    for (;;) {
        const std::uint64_t r = engine_();
        if (r >= threshold) return r % bound;
    }
}

}  // namespace csid
