#include <cmath>
#include <random>

#include "doctest.h"
#include "dpad/bgg.hpp"
#include "dpad/ops.hpp"
#include "dpad/testing/oracles.hpp"

using namespace dpad;
using nn::Var;

namespace {

struct Fixture {
    nn::ParameterSet params;
    BggParams bgg;
    Fixture(BggShape shape, std::uint64_t seed, bool zero = false) {
        nn::Initializer init(seed, zero);
        bgg = make_bgg(params, "bgg", shape, init);
    }
};

}  // namespace

TEST_CASE("zero transform gives an even split") {
    Fixture f({12, 4, 6, 3}, 1);
    f.bgg.transform.mutable_value().fill(0.0);
    std::mt19937_64 rng(1);
    const auto key = intra_projection(Var::constant(testing::random_matrix(12, 4, rng)), f.bgg).value();
    REQUIRE(key.rows() == 4);
    REQUIRE(key.cols() == 2);
    for (std::size_t i = 0; i < key.size(); ++i) CHECK(key[i] == doctest::Approx(0.5));
}

TEST_CASE("hand-computed key") {
    Fixture f({2, 1, 2, 1}, 0, true);
    f.bgg.projection.weights[0].mutable_value() = Matrix::identity(2);
    f.bgg.projection.weights[1].mutable_value() = Matrix::identity(2);
    f.bgg.transform.mutable_value() = Matrix{{std::log(3.0), 0}, {0, 0}};
    const auto key = intra_projection(Var::constant(Matrix{{1}, {0}}), f.bgg).value();
    CHECK(key(0, 0) == doctest::Approx(0.75));
    CHECK(key(0, 1) == doctest::Approx(0.25));
}

TEST_CASE("property: key rows lie on the simplex") {
    std::mt19937_64 rng(5);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Fixture f({10, 5, 7, 3}, seed);
        const auto key = intra_projection(Var::constant(testing::random_matrix(10, 5, rng, -3, 3)), f.bgg).value();
        for (std::size_t i = 0; i < 5; ++i) {
            REQUIRE(key(i, 0) >= 0.0);
            REQUIRE(key(i, 1) >= 0.0);
            REQUIRE(key(i, 0) + key(i, 1) == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("key is equivariant to component order") {
    Fixture f({10, 4, 6, 3}, 9);
    std::mt19937_64 rng(2);
    const Matrix x = testing::random_matrix(10, 4, rng);
    const std::size_t perm[] = {2, 0, 3, 1};
    Matrix xp(10, 4);
    for (std::size_t t = 0; t < 10; ++t)
        for (std::size_t i = 0; i < 4; ++i) xp(t, i) = x(t, perm[i]);
    const Matrix k = intra_projection(Var::constant(x), f.bgg).value();
    const Matrix kp = intra_projection(Var::constant(xp), f.bgg).value();
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t c = 0; c < 2; ++c) CHECK(kp(i, c) == doctest::Approx(k(perm[i], c)).epsilon(1e-12));
}

TEST_CASE("inter mask") {
    Fixture f({8, 3, 4, 3}, 3);
    CHECK(inter_mask(Var::constant(Matrix(8, 3)), f.bgg).value() == Matrix(8, 3));

    std::mt19937_64 rng(6);
    const Matrix x = testing::random_matrix(8, 3, rng);
    const Matrix got = inter_mask(Var::constant(x), f.bgg).value();
    const Matrix conv = testing::naive_conv2d(x, f.bgg.mask_kernels.value(), f.bgg.mask_bias.value().storage());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(x[i] * conv[i]).epsilon(1e-12));

    f.bgg.mask_kernels.mutable_value().fill(0.0);
    f.bgg.mask_bias.mutable_value().fill(1.0);
    CHECK(inter_mask(Var::constant(x), f.bgg).value() == x);
}
