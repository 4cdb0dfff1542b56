#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "csid/measurement.hpp"

using namespace csid;

TEST_CASE("gen_sparse_system support size and values") {
    SeededRng rng(21);
    SUBCASE("paper-scale dimensions") {
        const SparseSystem sys = gen_sparse_system(rng, 500, 40);
        CHECK(sys.h.size() == 500);
        int nonzeros = 0;
        for (Eigen::Index i = 0; i < sys.h.size(); ++i) nonzeros += sys.h[i] != 0.0;
        CHECK(nonzeros == 40);
    }
    SUBCASE("empty and full support") {
        CHECK(gen_sparse_system(rng, 8, 0).h.cwiseAbs().maxCoeff() == 0.0);
        const SparseSystem full = gen_sparse_system(rng, 8, 8);
        for (Eigen::Index i = 0; i < 8; ++i) CHECK(full.h[i] != 0.0);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(gen_sparse_system(rng, 8, 9), std::invalid_argument);
        CHECK_THROWS_AS(gen_sparse_system(rng, 0, 0), std::invalid_argument);
    }
}

TEST_CASE("gen_sparse_system support positions are uniform (chi-square)") {
    SeededRng rng(1234);
    const int N = 25, k = 5, draws = 10000;
    std::vector<int> counts(N, 0);
    for (int d = 0; d < draws; ++d) {
        const SparseSystem sys = gen_sparse_system(rng, N, k);
        for (int i = 0; i < N; ++i) {
            if (sys.h[i] != 0.0) counts[i]++;
        }
    }
    const double expected = static_cast<double>(draws) * k / N;
    double chi2 = 0.0;
    for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
    // chi-square critical value, 24 dof, significance 0.01
    CHECK(chi2 < 42.98);
}

TEST_CASE("gen_random_filter") {
    SeededRng rng(3);
    CHECK(gen_random_filter(rng, 80).length() == 80);
    CHECK(gen_random_filter(rng, 1).length() == 1);
    SeededRng a(17), b(17);
    CHECK(gen_random_filter(a, 16).f == gen_random_filter(b, 16).f);
    CHECK_THROWS_AS(gen_random_filter(rng, 0), std::invalid_argument);
}

TEST_CASE("measurement operator dimensions at the paper's scale") {
    SeededRng rng(5);
    const RandomFilter f = gen_random_filter(rng, 80);
    CHECK(build_measurement_operator(f, 500, 2, 1).rows() == 289);
    CHECK(build_measurement_operator(f, 500, 2, 0).rows() == 290);
    CHECK_THROWS_AS(build_measurement_operator(f, 500, 2, 2), std::invalid_argument);
}

TEST_CASE("delta filter with q = 1 gives the identity operator") {
    RandomFilter delta;
    delta.f = Signal::Zero(1);
    delta.f[0] = 1.0;
    const MeasurementOperator op = build_measurement_operator(delta, 3, 1, 0);
    CHECK(op.rows() == 3);
    CHECK((op.matrix() - Eigen::MatrixXd::Identity(3, 3)).norm() == 0.0);
    SeededRng rng(2);
    const Signal s = gaussian_vector(rng, 3, 0.0, 1.0);
    CHECK(apply_measurement(op, s) == s);
}

TEST_CASE("apply_measurement equals brute-force convolve + decimate") {
    SUBCASE("hand example") {
        RandomFilter f;
        f.f = Signal::Ones(2);
        const MeasurementOperator op = build_measurement_operator(f, 3, 2, 0);
        Signal s(3);
        s << 1, 2, 3;
        const Signal y = apply_measurement(op, s);
        REQUIRE(y.size() == 2);
        CHECK(y[0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(y[1] == doctest::Approx(5.0).epsilon(1e-12));
    }
    SUBCASE("zero vector maps to zero") {
        SeededRng rng(6);
        const RandomFilter f = gen_random_filter(rng, 5);
        const MeasurementOperator op = build_measurement_operator(f, 12, 3, 1);
        CHECK(apply_measurement(op, Signal::Zero(12)).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("200 random tuples, matrix vs streaming to 1e-10") {
        SeededRng rng(99);
        for (int rep = 0; rep < 200; ++rep) {
            const int N = 2 + static_cast<int>(rng.uniform_index(63));
            const int L = 1 + static_cast<int>(rng.uniform_index(10));
            const int q = 1 + static_cast<int>(rng.uniform_index(4));
            const int phase = static_cast<int>(rng.uniform_index(q));
            const RandomFilter f = gen_random_filter(rng, L);
            const MeasurementOperator op = build_measurement_operator(f, N, q, phase);
            CHECK(op.rows() == (N + L - 1 - phase + q - 1) / q);
            const Signal s = gaussian_vector(rng, N, 0.0, 1.0);
            CHECK((op.apply(s) - op.apply_streaming(s)).lpNorm<Eigen::Infinity>() < 1e-10);
        }
    }
    SUBCASE("dimension mismatch") {
        SeededRng rng(1);
        const RandomFilter f = gen_random_filter(rng, 4);
        const MeasurementOperator op = build_measurement_operator(f, 10, 2, 0);
        CHECK_THROWS_AS(apply_measurement(op, Signal::Zero(9)), std::invalid_argument);
    }
}

TEST_CASE("measurement_count_guidance") {
    CHECK(measurement_count_guidance(40, 500, 1.0) == 249);
    CHECK(measurement_count_guidance(5, 100, 2.0) == 47);
    CHECK(measurement_count_guidance(1, 3, 1.0) >= 1);
    CHECK_THROWS_AS(measurement_count_guidance(0, 10, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(measurement_count_guidance(11, 10, 1.0), std::invalid_argument);
}
