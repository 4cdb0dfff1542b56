#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "csid/channel.hpp"

using namespace csid;

namespace {

Signal make(std::initializer_list<double> v) {
    Signal s(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) s[i++] = x;
    return s;
}

SparseSystem system_of(const Signal& h) {
    int k = 0;
    for (Eigen::Index i = 0; i < h.size(); ++i) k += h[i] != 0.0;
    return SparseSystem{h, static_cast<int>(h.size()), k};
}

}  // namespace

TEST_CASE("conventional_desired") {
    SeededRng quiet(1);
    SUBCASE("identity system reproduces the pilot") {
        Signal h = Signal::Zero(4);
        h[0] = 1.0;
        const Signal pilot = make({3, 1, 4, 1, 5});
        const PlantOutput out = conventional_desired(system_of(h), pilot, quiet, 0.0);
        CHECK(out.desired == pilot);
        CHECK(out.transmitted_pilot_count == 5);
    }
    SUBCASE("zero system gives zero output") {
        const PlantOutput out =
            conventional_desired(system_of(Signal::Zero(3)), make({1, 2, 3}), quiet, 0.0);
        CHECK(out.desired.cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("brute-force convolution oracle") {
        const PlantOutput out =
            conventional_desired(system_of(make({1, 1})), make({1, 2, 3}), quiet, 0.0);
        CHECK(out.desired == make({1, 3, 5}));
    }
}

TEST_CASE("compressive_desired_reduced") {
    SeededRng quiet(1);
    SUBCASE("delta filter with q = 1 matches the conventional plant") {
        RandomFilter delta;
        delta.f = make({1});
        SeededRng rng(3);
        const SparseSystem sys = gen_sparse_system(rng, 6, 2);
        const Signal pilot = gaussian_vector(rng, 30, 0.0, 1.0);
        const MeasurementOperator op = build_measurement_operator(delta, 6, 1, 0);
        SeededRng na(9), nb(9);
        const PlantOutput reduced = compressive_desired_reduced(op, sys, pilot, na, 0.0);
        const PlantOutput conventional = conventional_desired(sys, pilot, nb, 0.0);
        CHECK((reduced.desired - conventional.desired).lpNorm<Eigen::Infinity>() < 1e-12);
    }
    SUBCASE("zero system gives pure noise at the configured variance") {
        SeededRng rng(4);
        const RandomFilter f = gen_random_filter(rng, 3);
        const MeasurementOperator op = build_measurement_operator(f, 8, 2, 0);
        SeededRng noise(11);
        const Signal pilot = gaussian_vector(rng, 100000, 0.0, 1.0);
        const PlantOutput out =
            compressive_desired_reduced(op, system_of(Signal::Zero(8)), pilot, noise, 0.01);
        const double var = out.desired.squaredNorm() / out.desired.size();
        CHECK(var > 0.009);
        CHECK(var < 0.011);
    }
    SUBCASE("small instance against the hand-computed target") {
        // N=4, L=2, q=2: g[i] = (f*h)[2i+phase]
        RandomFilter f;
        f.f = make({1, 2});
        const Signal h = make({1, 0, -1, 3});
        const MeasurementOperator op = build_measurement_operator(f, 4, 2, 0);
        const Signal g = op.apply(h);
        const Signal full = convolve_full(h, f.f);  // length 5
        REQUIRE(g.size() == 3);
        CHECK(g[0] == full[0]);
        CHECK(g[1] == full[2]);
        CHECK(g[2] == full[4]);
        const Signal pilot = make({1, -1, 2});
        SeededRng quiet2(1);
        const PlantOutput out =
            compressive_desired_reduced(op, system_of(h), pilot, quiet2, 0.0);
        // d[n] = sum_i g[i] pilot[n-i], zero pre-history
        CHECK(out.desired[0] == doctest::Approx(g[0] * 1.0));
        CHECK(out.desired[1] == doctest::Approx(-g[0] + g[1]));
        CHECK(out.desired[2] == doctest::Approx(2 * g[0] - g[1] + g[2]));
        CHECK(out.transmitted_pilot_count == 6);  // q * iterations
    }
    SUBCASE("dimension mismatch") {
        SeededRng rng(4);
        const RandomFilter f = gen_random_filter(rng, 3);
        const MeasurementOperator op = build_measurement_operator(f, 8, 2, 0);
        SeededRng quiet2(1);
        const SparseSystem wrong = gen_sparse_system(rng, 9, 2);
        CHECK_THROWS_AS(compressive_desired_reduced(op, wrong, make({1, 2}), quiet2, 0.0),
                        std::invalid_argument);
    }
}

TEST_CASE("polyphase equivalence: structural == reduced, noiseless") {
    SeededRng rng(2024);
    for (int rep = 0; rep < 100; ++rep) {
        const int N = 2 + static_cast<int>(rng.uniform_index(31));
        const int L = 1 + static_cast<int>(rng.uniform_index(8));
        const int q = 1 + static_cast<int>(rng.uniform_index(4));
        for (int phase = 0; phase < q; ++phase) {
            const SparseSystem sys = gen_sparse_system(rng, N, std::min(N, 3));
            const RandomFilter f = gen_random_filter(rng, L);
            const Signal pilot = gaussian_vector(rng, 24, 0.0, 1.0);
            const MeasurementOperator op = build_measurement_operator(f, N, q, phase);
            SeededRng na(1), nb(1);
            const PlantOutput reduced = compressive_desired_reduced(op, sys, pilot, na, 0.0);
            const PlantOutput structural =
                compressive_desired_structural(f, sys, pilot, q, phase, nb, 0.0);
            REQUIRE(reduced.desired.size() == structural.desired.size());
            CHECK((reduced.desired - structural.desired).lpNorm<Eigen::Infinity>() < 1e-10);
            CHECK(reduced.transmitted_pilot_count == structural.transmitted_pilot_count);
            CHECK(structural.transmitted_pilot_count == static_cast<std::int64_t>(q) * 24);
        }
    }
}

TEST_CASE("structural plant edge cases") {
    SUBCASE("q = 1, phase = 0 is the plain cascade") {
        SeededRng rng(5);
        const SparseSystem sys = gen_sparse_system(rng, 5, 2);
        const RandomFilter f = gen_random_filter(rng, 3);
        const Signal pilot = gaussian_vector(rng, 20, 0.0, 1.0);
        SeededRng quiet(1);
        const PlantOutput out = compressive_desired_structural(f, sys, pilot, 1, 0, quiet, 0.0);
        const Signal cascade = convolve_full(pilot, convolve_full(f.f, sys.h)).head(20);
        CHECK((out.desired - cascade).lpNorm<Eigen::Infinity>() < 1e-12);
    }
    SUBCASE("zero pilot gives pure noise") {
        SeededRng rng(6);
        const SparseSystem sys = gen_sparse_system(rng, 4, 1);
        const RandomFilter f = gen_random_filter(rng, 2);
        SeededRng noise(3);
        const PlantOutput out =
            compressive_desired_structural(f, sys, Signal::Zero(50000), 2, 1, noise, 0.04);
        const double var = out.desired.squaredNorm() / out.desired.size();
        CHECK(var > 0.036);
        CHECK(var < 0.044);
    }
}
