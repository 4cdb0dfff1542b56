#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "csid/adaptive.hpp"
#include "csid/channel.hpp"
#include "csid/measurement.hpp"
#include "csid/metrics.hpp"

using namespace csid;

namespace {

Signal make(std::initializer_list<double> v) {
    Signal s(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) s[i++] = x;
    return s;
}

}  // namespace

TEST_CASE("filter_output") {
    AdaptiveState zero{Signal::Zero(4), 0.1, 0.0, 0};
    CHECK(filter_output(zero, make({1, 2, 3, 4})) == 0.0);

    AdaptiveState delta{make({1, 0, 0}), 0.1, 0.0, 0};
    CHECK(filter_output(delta, make({7, 8, 9})) == 7.0);

    AdaptiveState s{make({0.5, -1}), 0.1, 0.0, 0};
    CHECK(filter_output(s, make({2, 3})) == doctest::Approx(-2.0));
    CHECK_THROWS_AS(filter_output(s, make({1})), std::invalid_argument);
}

TEST_CASE("instantaneous_cost") {
    CHECK(instantaneous_cost(0.0) == 0.0);
    CHECK(instantaneous_cost(2.0) == 2.0);
    CHECK(instantaneous_cost(-3.0) == 4.5);
}

TEST_CASE("sign_vec") {
    CHECK(sign_vec(make({0, -3, 2.5})) == make({0, -1, 1}));
    CHECK(sign_vec(Signal::Zero(5)) == Signal::Zero(5));
    CHECK(sign_vec(make({1e-300}))[0] == 1.0);
}

TEST_CASE("lms_update") {
    SUBCASE("fixed point at zero error") {
        AdaptiveState s{make({0.3, -0.2}), 0.1, 0.0, 0};
        const Regressor x = make({1, 2});
        const double d = filter_output(s, x);
        const AdaptiveState next = lms_update(s, x, d);
        CHECK(next.w == s.w);
        CHECK(next.iteration == 1);
    }
    SUBCASE("single step closed form") {
        AdaptiveState s{Signal::Zero(2), 0.1, 0.0, 0};
        const AdaptiveState next = lms_update(s, make({1, 2}), 1.0);
        // e = 0 - 1 = -1, w' = w - mu*e*x = [0.1, 0.2]
        CHECK(next.w[0] == doctest::Approx(0.1).epsilon(1e-14));
        CHECK(next.w[1] == doctest::Approx(0.2).epsilon(1e-14));
    }
    SUBCASE("zero regressor leaves weights") {
        AdaptiveState s{make({0.4, 0.5}), 0.1, 0.0, 0};
        CHECK(lms_update(s, Signal::Zero(2), 3.0).w == s.w);
    }
    SUBCASE("random single-step identity to 1e-14") {
        SeededRng rng(31);
        for (int rep = 0; rep < 50; ++rep) {
            const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.uniform_index(8));
            AdaptiveState s{gaussian_vector(rng, n, 0.0, 1.0), 0.05, 0.0, 3};
            const Regressor x = gaussian_vector(rng, n, 0.0, 1.0);
            const double d = rng.gaussian();
            const Signal expect = s.w - s.mu * (s.w.dot(x) - d) * x;
            CHECK((lms_update(s, x, d).w - expect).lpNorm<Eigen::Infinity>() < 1e-14);
        }
    }
}

TEST_CASE("za_lms_update") {
    SUBCASE("reduces to lms_update at rho = 0, bitwise") {
        SeededRng rng(12);
        for (int rep = 0; rep < 20; ++rep) {
            AdaptiveState s{gaussian_vector(rng, 6, 0.0, 1.0), 0.02, 0.0, 0};
            const Regressor x = gaussian_vector(rng, 6, 0.0, 1.0);
            const double d = rng.gaussian();
            CHECK(za_lms_update(s, x, d).w == lms_update(s, x, d).w);
        }
    }
    SUBCASE("pure zero-attraction step at zero error") {
        AdaptiveState s{make({0.1, 0.2}), 0.1, 0.01, 0};
        // e = 0.1 + 0.4 - 0.5 = 0
        const AdaptiveState next = za_lms_update(s, make({1, 2}), 0.5);
        CHECK(next.w[0] == doctest::Approx(0.09).epsilon(1e-14));
        CHECK(next.w[1] == doctest::Approx(0.19).epsilon(1e-14));
    }
    SUBCASE("origin is fixed under pure attraction") {
        AdaptiveState s{Signal::Zero(3), 0.1, 0.05, 0};
        CHECK(za_lms_update(s, Signal::Zero(3), 0.0).w == Signal::Zero(3));
    }
}

TEST_CASE("run_adaptation") {
    SUBCASE("zero pilot leaves weights at initialization") {
        AdaptiveState s0{Signal::Zero(4), 0.1, 0.0, 0};
        const auto run = run_adaptation(s0, Signal::Zero(50), Signal::Zero(50), Algorithm::lms,
                                        {1, nullptr});
        CHECK(run.state.w == Signal::Zero(4));
        CHECK(run.state.iteration == 50);
    }
    SUBCASE("plant generated by w itself is a global fixed point") {
        SeededRng rng(77);
        const Signal w = gaussian_vector(rng, 5, 0.0, 1.0);
        const Signal pilot = gaussian_vector(rng, 200, 0.0, 1.0);
        SparseSystem as_system{w, 5, 5};
        SeededRng quiet(1);
        const PlantOutput plant = conventional_desired(as_system, pilot, quiet, 0.0);
        AdaptiveState s0{w, 0.05, 0.0, 0};
        const auto run =
            run_adaptation(s0, pilot, plant.desired, Algorithm::lms, {1, nullptr});
        CHECK((run.state.w - w).lpNorm<Eigen::Infinity>() < 1e-12);
    }
    SUBCASE("noiseless small instance converges below 1e-3") {
        SeededRng rng(5150);
        const SparseSystem sys = gen_sparse_system(rng, 16, 3);
        const Signal pilot = gaussian_vector(rng, 5000, 0.0, 1.0);
        SeededRng quiet(1);
        const PlantOutput plant = conventional_desired(sys, pilot, quiet, 0.0);
        AdaptiveState s0{Signal::Zero(16), 0.01, 0.0, 0};
        const double href2 = sys.h.squaredNorm();
        RecorderSpec rec{10, [&](const Signal& w) {
                             return (sys.h - w).squaredNorm() / href2;
                         }};
        const auto run = run_adaptation(s0, pilot, plant.desired, Algorithm::lms, rec);
        CHECK(run.distortion.back() < 1e-3);
        // trend: early distortion is orders above the final one
        CHECK(run.distortion.front() > 100 * run.distortion.back());
    }
    SUBCASE("divergence carries the iteration index") {
        SeededRng rng(1);
        const SparseSystem sys = gen_sparse_system(rng, 8, 2);
        const Signal pilot = gaussian_vector(rng, 4000, 0.0, 1.0);
        SeededRng quiet(2);
        const PlantOutput plant = conventional_desired(sys, pilot, quiet, 0.0);
        AdaptiveState s0{Signal::Zero(8), 5.0, 0.0, 0};  // far beyond stable
        CHECK_THROWS_AS(
            run_adaptation(s0, pilot, plant.desired, Algorithm::lms, {1, nullptr}),
            DivergenceError);
    }
}

TEST_CASE("stability smoke test at the paper's step size") {
    // mu = 0.003 at N = 500 with unit-variance pilots: no divergence over
    // 2e4 iterations across 20 seeds.
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        SeededRng rng(seed);
        const SparseSystem sys = gen_sparse_system(rng, 500, 40);
        const Signal pilot = gaussian_vector(rng, 20000, 0.0, 1.0);
        SeededRng noise(seed + 1000);
        const PlantOutput plant = conventional_desired(sys, pilot, noise, 0.01);
        AdaptiveState s0{Signal::Zero(500), 0.003, 0.0, 0};
        CHECK_NOTHROW(
            run_adaptation(s0, pilot, plant.desired, Algorithm::lms, {100, nullptr}));
    }
}
