#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "dpad/error.hpp"
#include "dpad/memd.hpp"
#include "dpad/spectrum.hpp"
#include "dpad/testing/oracles.hpp"

using namespace dpad;

namespace {

std::vector<double> two_tone(std::size_t n) {
    std::vector<double> x(n);
    for (std::size_t t = 0; t < n; ++t) {
        const double td = static_cast<double>(t);
        x[t] = std::sin(2 * std::numbers::pi * 0.2 * td) + std::sin(2 * std::numbers::pi * 0.02 * td);
    }
    return x;
}

double rms(std::span<const double> x) {
    double s = 0;
    for (double v : x) s += v * v;
    return std::sqrt(s / static_cast<double>(x.size()));
}

}  // namespace

TEST_CASE("relative tolerance") {
    const std::vector<double> a{1, 2, 3}, b{1, 2, 3};
    CHECK(relative_tolerance(a, b) == 0.0);
    CHECK(relative_tolerance(std::vector<double>{2, 0}, std::vector<double>{1, 0}) == doctest::Approx(0.25));
    CHECK(relative_tolerance(std::vector<double>{3, 0}, std::vector<double>{2.9, 0}) ==
          doctest::Approx(0.01 / 9).epsilon(1e-12));
    CHECK_THROWS_AS(relative_tolerance(std::vector<double>{0, 0}, std::vector<double>{1, 1}), DegenerateSignal);
    CHECK_THROWS_AS(relative_tolerance(std::vector<double>{1}, std::vector<double>{1, 1}), ValidationError);
}

TEST_CASE("strict extrema") {
    CHECK(count_strict_extrema(std::vector<double>{1, 3, 2, 5, 4}) == 3);
    CHECK(count_strict_extrema(std::vector<double>{1, 1, 1}) == 0);
    CHECK(count_strict_extrema(std::vector<double>{1, 2, 3, 4}) == 0);
}

TEST_CASE("single sift step") {
    const auto k = SEKernel::zero(1);
    CHECK(sift_once(Series{1, 3, 2, 5, 4}, k) == Series{-1, 1, -1.5, 1.5, -0.5});
    CHECK(sift_once(Series{4, 4, 4}, k) == Series{0, 0, 0});
    const Series alt{1, -1, 1, -1, 1, -1};
    CHECK(sift_once(alt, k) == alt);
}

TEST_CASE("no IMF in a constant or monotone series") {
    CHECK_FALSE(extract_imf(Series{2, 2, 2, 2, 2}, SiftConfig{}).has_value());
    CHECK_FALSE(extract_imf(Series{1, 2, 3, 4, 5}, SiftConfig{}).has_value());
}

TEST_CASE("period-10 sine: the narrow envelope tracks the tone") {
    std::vector<double> s(336);
    for (std::size_t t = 0; t < s.size(); ++t) s[t] = std::sin(2 * std::numbers::pi * static_cast<double>(t) / 10);
    const auto split = extract_imf(Series(s), SiftConfig{});
    REQUIRE(split.has_value());
    CHECK(split->sifts == 4);
    CHECK(rms(split->residual.span()) / rms(s) == doctest::Approx(0.99893272519258813).epsilon(1e-9));
    for (std::size_t t = 0; t < s.size(); ++t)
        REQUIRE(std::abs(split->imf[t] + split->residual[t] - s[t]) <= 1e-12);
}

TEST_CASE("constant input puts everything in the residual column") {
    const auto m = mcd_decompose(Series(std::vector<double>(40, 3.5)), 6, SiftConfig{});
    REQUIRE(m.count() == 6);
    REQUIRE(m.length() == 40);
    for (std::size_t t = 0; t < 40; ++t) {
        for (std::size_t i = 0; i < 5; ++i) CHECK(m(t, i) == 0.0);
        CHECK(m(t, 5) == 3.5);
    }
}

TEST_CASE("two-tone mixture") {
    const auto x = two_tone(336);
    const auto m = mcd_decompose(Series(x), 6, SiftConfig{});
    const auto c0 = m.column(0);
    CHECK(dominant_bin(c0) == 67);
    CHECK(c0[0] == doctest::Approx(-0.53819487492972895).epsilon(1e-12));
    CHECK(c0[1] == doctest::Approx(0.53819487492972895).epsilon(1e-12));
    CHECK(c0[2] == doctest::Approx(0.340636600986502).epsilon(1e-12));
    CHECK(c0[3] == doctest::Approx(-0.34303013178401032).epsilon(1e-12));
    CHECK(c0[4] == doctest::Approx(-0.26658945476011331).epsilon(1e-12));

    std::vector<double> hi(336);
    for (std::size_t t = 0; t < hi.size(); ++t) hi[t] = std::sin(2 * std::numbers::pi * 0.2 * static_cast<double>(t));
    CHECK(testing::pearson(c0, hi) == doctest::Approx(0.89056492679148336).epsilon(1e-9));

    bool low_later = false;
    for (std::size_t i = 1; i < m.count(); ++i) low_later = low_later || dominant_bin(m.column(i)) == 7;
    CHECK(low_later);
    CHECK(dominant_bin(m.column(5)) <= dominant_bin(c0));
}

TEST_CASE("property: exact reconstruction, zero-mean IMFs, determinism") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> x(64 + static_cast<std::size_t>(trial) * 5);
        double walk = 0;
        for (auto& v : x) v = (walk += noise(rng));
        const Series s(x);
        const std::size_t k = 2 + static_cast<std::size_t>(trial % 6);
        const auto m = mcd_decompose(s, k, SiftConfig{});
        const auto again = mcd_decompose(s, k, SiftConfig{});
        REQUIRE(m.matrix() == again.matrix());
        const auto rec = m.reconstruct();
        for (std::size_t t = 0; t < x.size(); ++t) REQUIRE(std::abs(rec[t] - x[t]) <= 1e-9);
    }
}

TEST_CASE("IMFs of a noisy tone are close to zero mean") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> noise(0.0, 0.3);
    std::vector<double> x(336);
    for (std::size_t t = 0; t < x.size(); ++t)
        x[t] = std::sin(2 * std::numbers::pi * 0.2 * static_cast<double>(t)) + noise(rng);
    const auto m = mcd_decompose(Series(x), 4, SiftConfig{});
    for (std::size_t i = 0; i + 1 < m.count(); ++i) {
        const auto c = m.column(i);
        const double r = rms(c);
        if (r == 0.0) continue;
        double mean = 0;
        for (double v : c) mean += v;
        mean /= static_cast<double>(c.size());
        CHECK(std::abs(mean) / r < 0.05);
    }
}

TEST_CASE("invalid decomposition requests") {
    CHECK_THROWS_AS(mcd_decompose(Series{1, 2}, 6, SiftConfig{}), ValidationError);
    CHECK_THROWS_AS(mcd_decompose(Series{1, 2, 3, 4}, 1, SiftConfig{}), ValidationError);
}

TEST_CASE("FFTW spectrum agrees with the naive DFT") {
    std::mt19937_64 rng(8);
    for (std::size_t n : {1u, 2u, 7u, 64u, 336u}) {
        const auto x = testing::random_matrix(n, 1, rng).storage();
        const auto fast = magnitude_spectrum(x);
        const auto slow = testing::naive_dft_magnitude(x);
        REQUIRE(fast.size() == slow.size());
        for (std::size_t k = 0; k < fast.size(); ++k) CHECK(fast[k] == doctest::Approx(slow[k]).epsilon(1e-9));
        CHECK(dominant_bin(x) == testing::naive_dominant_bin(x));
    }
    CHECK(dominant_bin(std::vector<double>(16, 0.0)) == 0);
}
