#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace csid {

// Adaptive run produced a non-finite weight. Carries the iteration at which
// the first bad value was seen so Monte-Carlo sweeps can log the offending run.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(std::int64_t iteration, const std::string& what)
        : std::runtime_error(what), iteration_(iteration) {}

    std::int64_t iteration() const noexcept { return iteration_; }

private:
    std::int64_t iteration_;
};

// Solver or metric produced a non-finite value outside the adaptive loop.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid experiment configuration (maps to CLI exit code 1).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace csid
