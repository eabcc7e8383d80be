#include <cmath>
#include <random>

#include "doctest.h"
#include "dpad/error.hpp"
#include "dpad/memd.hpp"
#include "dpad/model.hpp"
#include "dpad/ops.hpp"
#include "dpad/params.hpp"
#include "dpad/testing/oracles.hpp"
#include "dpad/testing/selftest.hpp"

using namespace dpad;
using namespace dpad::nn;

TEST_CASE("matmul") {
    const auto y = matmul(Var::constant(Matrix{{1, 2}, {3, 4}}), Var::constant(Matrix{{1}, {1}}));
    CHECK(y.value() == Matrix{{3}, {7}});
    std::mt19937_64 rng(1);
    const Matrix a = testing::random_matrix(4, 5, rng);
    CHECK(matmul(Var::constant(Matrix::identity(4)), Var::constant(a)).value() == a);
    const Matrix b = testing::random_matrix(5, 3, rng);
    const Matrix ab = matmul(Var::constant(a), Var::constant(b)).value();
    const Matrix ref = testing::naive_matmul(a, b);
    for (std::size_t i = 0; i < ab.size(); ++i) CHECK(ab[i] == doctest::Approx(ref[i]).epsilon(1e-12));
    CHECK_THROWS_AS(matmul(Var::constant(a), Var::constant(a)), ValidationError);
}

TEST_CASE("softmax") {
    const auto s = softmax_rows(Var::constant(Matrix{{0, std::log(3.0)}})).value();
    CHECK(s(0, 0) == doctest::Approx(0.25));
    CHECK(s(0, 1) == doctest::Approx(0.75));
    const auto u = softmax_rows(Var::constant(Matrix(3, 4, 7.0))).value();
    for (std::size_t i = 0; i < u.size(); ++i) CHECK(u[i] == doctest::Approx(0.25));
    const auto big = softmax_rows(Var::constant(Matrix{{1000, 1000}})).value();
    CHECK(big(0, 0) == doctest::Approx(0.5));
}

TEST_CASE("conv2d over components") {
    std::mt19937_64 rng(2);
    const Matrix x = testing::random_matrix(10, 3, rng);
    const auto zero = conv2d_components(Var::constant(x), Var::constant(Matrix(3, 9)), Var::constant(Matrix(3, 1)));
    CHECK(zero.value() == Matrix(10, 3));

    Matrix delta(3, 9);
    for (std::size_t j = 0; j < 3; ++j) delta(j, 1 * 3 + j) = 1.0;  // centre tap, own component
    const auto id = conv2d_components(Var::constant(x), Var::constant(delta), Var::constant(Matrix(3, 1)));
    CHECK(id.value() == x);

    const Matrix k = testing::random_matrix(3, 15, rng);
    const Matrix b = testing::random_matrix(3, 1, rng);
    const Matrix got = conv2d_components(Var::constant(x), Var::constant(k), Var::constant(b)).value();
    const Matrix ref = testing::naive_conv2d(x, k, b.storage());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(ref[i]).epsilon(1e-12));
}

TEST_CASE("mlp with zero and identity weights") {
    ParameterSet ps;
    Initializer zero_init(0, true);
    const auto z = make_mlp(ps, "z", {3, 3, 3}, zero_init);
    const Var x = Var::constant(Matrix{{1, -2}, {0.5, 3}, {-1, 4}});
    CHECK(mlp(x, z).value() == Matrix(3, 2));

    ParameterSet ps2;
    const auto id = make_mlp(ps2, "i", {3, 3}, zero_init);
    id.weights[0].node()->value = Matrix::identity(3);
    CHECK(mlp(x, id).value() == x.value());
    CHECK(ps.size() == 4);
    CHECK(ps.contains("z.w0"));
    CHECK(ps.contains("z.b1"));
}

TEST_CASE("morphological gradient routing") {
    const auto k = SEKernel::zero(1);
    const Var inc = Var::parameter(Matrix::column(std::vector<double>{1, 2, 3, 4, 5}));
    sum_all(dilate(inc, k)).backward();
    // window maximum sits at min(t + 1, 4)
    CHECK(inc.grad() == Matrix::column(std::vector<double>{0, 1, 1, 1, 2}));

    const Var flat = Var::parameter(Matrix::column(std::vector<double>{2, 2, 2, 2, 2}));
    sum_all(erode(flat, k)).backward();
    // ties resolve to the lowest index, max(t - 1, 0)
    CHECK(flat.grad() == Matrix::column(std::vector<double>{2, 1, 1, 1, 0}));
}

TEST_CASE("finite-difference gradient checks") {
    std::mt19937_64 rng(11);
    const Var a = Var::parameter(testing::random_matrix(4, 3, rng));
    const Var b = Var::parameter(testing::random_matrix(3, 5, rng));
    const Matrix w = testing::random_matrix(4, 5, rng);
    auto r = testing::check_gradients([&] { return sum_all(mul(softmax_rows(matmul(a, b)), Var::constant(w))); },
                                      {a, b});
    CHECK(r.max_rel_error < 1e-4);
    CHECK(r.checked == 27);

    const Var x = Var::parameter(testing::random_matrix(8, 3, rng));
    const Var kern = Var::parameter(testing::random_matrix(3, 9, rng));
    const Var bias = Var::parameter(testing::random_matrix(3, 1, rng));
    const Matrix w2 = testing::random_matrix(8, 3, rng);
    r = testing::check_gradients(
        [&] { return sum_all(mul(conv2d_components(x, kern, bias), Var::constant(w2))); }, {x, kern, bias});
    CHECK(r.max_rel_error < 1e-4);

    const Var s = Var::parameter(testing::random_matrix(40, 1, rng));
    const Matrix w3 = testing::random_matrix(40, 3, rng);
    r = testing::check_gradients(
        [&] { return sum_all(mul(mcd_decompose(s, 3, SiftConfig{}), Var::constant(w3))); }, {s});
    CHECK(r.max_rel_error < 1e-4);
}

TEST_CASE("backward is linear in the seed") {
    std::mt19937_64 rng(12);
    const Var a = Var::parameter(testing::random_matrix(3, 3, rng));
    const auto grad_for = [&](const Matrix& seed) {
        a.node()->grad = Matrix();
        relu(matmul(a, a)).backward(seed);
        return a.grad();
    };
    const Matrix s1 = testing::random_matrix(3, 3, rng);
    const Matrix s2 = testing::random_matrix(3, 3, rng);
    Matrix s12 = s1;
    s12 += s2;
    Matrix sum = grad_for(s1);
    sum += grad_for(s2);
    const Matrix joint = grad_for(s12);
    for (std::size_t i = 0; i < sum.size(); ++i) CHECK(joint[i] == doctest::Approx(sum[i]).epsilon(1e-12));
}

TEST_CASE("random tiny model has finite gradients everywhere") {
    DPadModel model(testing::tiny_config(), InitMode::Random);
    std::mt19937_64 rng(13);
    const Var x = Var::constant(testing::random_matrix(model.config().lookback, 1, rng));
    sum_all(model.forward(x)).backward();
    for (const auto& [name, p] : model.parameters().entries()) {
        for (double g : p.grad().storage()) REQUIRE(std::isfinite(g));
    }
}

TEST_CASE("no-grad scope records nothing") {
    const Var a = Var::parameter(Matrix{{2}});
    Var y;
    {
        NoGradGuard guard;
        CHECK_FALSE(grad_enabled());
        y = scale(a, 3);
    }
    CHECK(grad_enabled());
    CHECK(y.node()->parents.empty());
}
