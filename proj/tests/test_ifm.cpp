#include <cmath>
#include <random>

#include "doctest.h"
#include "dpad/error.hpp"
#include "dpad/ifm.hpp"
#include "dpad/ops.hpp"
#include "dpad/testing/oracles.hpp"

using namespace dpad;
using nn::Var;

TEST_CASE("zero embeddings give a uniform adjacency") {
    const auto a = adaptive_adjacency(Var::constant(Matrix(3, 5)), Var::constant(Matrix(3, 5))).value();
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(0.2));
}

TEST_CASE("hand-computed adjacency") {
    const double l3 = std::log(3.0);
    const Var e1 = Var::constant(Matrix{{l3, 0}, {0, l3}});
    const Var e2 = Var::constant(Matrix::identity(2));
    const auto a = adaptive_adjacency(e1, e2).value();
    CHECK(a(0, 0) == doctest::Approx(0.75));
    CHECK(a(0, 1) == doctest::Approx(0.25));
    CHECK(a(1, 0) == doctest::Approx(0.25));
    CHECK(a(1, 1) == doctest::Approx(0.75));
}

TEST_CASE("property: adjacency is row- or column-stochastic") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 100; ++trial) {
        const Var e1 = Var::constant(testing::random_matrix(4, 6, rng, -2, 2));
        const Var e2 = Var::constant(testing::random_matrix(4, 6, rng, -2, 2));
        const auto r = adaptive_adjacency(e1, e2).value();
        const auto c = adaptive_adjacency(e1, e2, AdjacencyAxis::Cols).value();
        for (std::size_t i = 0; i < 6; ++i) {
            double rs = 0, cs = 0;
            for (std::size_t j = 0; j < 6; ++j) {
                REQUIRE(r(i, j) >= 0.0);
                rs += r(i, j);
                cs += c(j, i);
            }
            REQUIRE(rs == doctest::Approx(1.0).epsilon(1e-12));
            REQUIRE(cs == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("graph convolution") {
    std::mt19937_64 rng(2);
    const Matrix z = testing::random_matrix(4, 3, rng);
    const Matrix w = testing::random_matrix(2, 4, rng);
    const Matrix wz = testing::naive_matmul(w, z);

    const auto id = graph_conv(Var::constant(z), Var::constant(Matrix::identity(3)), Var::constant(w)).value();
    for (std::size_t i = 0; i < id.size(); ++i) CHECK(id[i] == doctest::Approx(std::max(0.0, wz[i])).epsilon(1e-12));

    const auto avg = graph_conv(Var::constant(z), Var::constant(Matrix(3, 3, 1.0 / 3)), Var::constant(w)).value();
    for (std::size_t r = 0; r < 2; ++r) {
        const double mean = (wz(r, 0) + wz(r, 1) + wz(r, 2)) / 3;
        for (std::size_t c = 0; c < 3; ++c) CHECK(avg(r, c) == doctest::Approx(std::max(0.0, mean)).epsilon(1e-12));
    }
}

TEST_CASE("fusion against a naive oracle") {
    std::mt19937_64 rng(3);
    const Matrix z = testing::random_matrix(4, 3, rng);
    const Matrix g0 = testing::random_matrix(2, 3, rng);
    const Matrix g1 = testing::random_matrix(2, 3, rng);
    const Matrix fw = testing::random_matrix(5, 4, rng);
    const Matrix fb = testing::random_matrix(5, 1, rng);
    const auto out = multi_graph_fuse(Var::constant(z), {Var::constant(g0), Var::constant(g1)}, Var::constant(fw),
                                      Var::constant(fb))
                         .value();
    Matrix mixed = z;
    for (std::size_t c = 0; c < 3; ++c)
        for (std::size_t r = 0; r < 2; ++r) {
            mixed(r, c) += g0(r, c);
            mixed(r + 2, c) += g1(r, c);
        }
    const Matrix proj = testing::naive_matmul(fw, mixed);
    REQUIRE(out.rows() == 5);
    REQUIRE(out.cols() == 1);
    for (std::size_t r = 0; r < 5; ++r) {
        const double expect = proj(r, 0) + proj(r, 1) + proj(r, 2) + 3 * fb(r, 0);
        CHECK(out(r, 0) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("zero graph weight reduces to the skip path") {
    nn::ParameterSet ps;
    nn::Initializer init(4);
    const IfmShape shape{8, 4, 6, 6, 5, 1};
    IfmParams p = make_ifm(ps, "ifm", shape, init);
    p.graphs[0].weight.mutable_value().fill(0.0);
    std::mt19937_64 rng(4);
    const Var x = Var::constant(testing::random_matrix(8, 3, rng));
    const auto full = interaction_fusion(x, p).value();
    const auto skip = interaction_fusion(x, p, {AdjacencyAxis::Rows, true}).value();
    CHECK(full == skip);
}

TEST_CASE("module shapes and validation") {
    nn::ParameterSet ps;
    nn::Initializer init(5);
    CHECK_THROWS_AS(make_ifm(ps, "bad", IfmShape{8, 4, 6, 4, 5, 2}, init), ConfigError);
    const IfmParams p = make_ifm(ps, "ifm", IfmShape{8, 4, 6, 3, 5, 2}, init);
    CHECK(p.graphs.size() == 2);
    std::mt19937_64 rng(5);
    const Var x = Var::constant(testing::random_matrix(8, 6, rng));
    for (bool disabled : {false, true}) {
        const auto out = interaction_fusion(x, p, {AdjacencyAxis::Rows, disabled}).value();
        REQUIRE(out.rows() == 5);
        REQUIRE(out.cols() == 1);
        for (double v : out.storage()) CHECK(std::isfinite(v));
    }
}
