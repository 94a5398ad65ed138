#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rim/learner.hpp"
#include "rim/structure.hpp"
#include "support/oracles.hpp"

using namespace rim;

namespace {

bool close_rel(double analytic, double numeric, double rel = 1e-4, double abs = 1e-8) {
    double diff = std::fabs(analytic - numeric);
    return diff <= abs || diff <= rel * std::max(std::fabs(analytic), std::fabs(numeric));
}

}  // namespace

TEST_CASE("lemma cases on a small example") {
    TimeSeriesSample s{{1.0, 2.0, 4.0}, 0};

    CHECK(partial_derivative(s, {{0.5, 0.5}}, 1, 2) == 0.0);

    // i = j = 2 at lambda = 0: x_1 - x_2
    CHECK(partial_derivative(s, {{0.0, 0.0}}, 2, 2) == doctest::Approx(-2.0));
    CHECK(close_rel(-2.0, test::oracle_first_partial(s.features, {0.0, 0.0}, 2, 2)));

    // i = 2, j = 1: lambda_2 (x_0 - x_1)
    CHECK(partial_derivative(s, {{0.5, 0.5}}, 2, 1) == doctest::Approx(-0.5));
    CHECK(close_rel(-0.5, test::oracle_first_partial(s.features, {0.5, 0.5}, 2, 1)));
}

TEST_CASE("analytic first partials match finite differences on random tuples") {
    Rng rng(101);
    for (int t = 0; t < 100; ++t) {
        std::size_t d = 2 + rng.next_u64() % 10;
        TimeSeriesSample s;
        s.features.resize(d + 1);
        for (double& v : s.features) v = rng.uniform(-4.0, 4.0);
        LambdaVector lambda;
        lambda.values.resize(d);
        for (double& v : lambda.values) v = 0.05 + 0.85 * rng.uniform();
        std::size_t i = 1 + rng.next_u64() % d;
        std::size_t j = 1 + rng.next_u64() % d;
        double analytic = partial_derivative(s, lambda, i, j);
        double numeric = test::oracle_first_partial(s.features, lambda.values, i, j);
        CHECK(close_rel(analytic, numeric));
    }
}

TEST_CASE("triangularity holds for all lambda") {
    Rng rng(102);
    TimeSeriesSample s{{1.0, -1.0, 2.0, -2.0, 3.0}, 0};
    for (int t = 0; t < 50; ++t) {
        LambdaVector lambda;
        lambda.values.resize(4);
        for (double& v : lambda.values) v = rng.uniform();
        for (std::size_t i = 1; i <= 4; ++i)
            for (std::size_t j = i + 1; j <= 4; ++j)
                CHECK(partial_derivative(s, lambda, i, j) == 0.0);
    }
}

TEST_CASE("velocity matrix at zero") {
    TimeSeriesSample s{{1.0, 2.0, 4.0}, 0};
    Matrix a = velocity_matrix_at_zero(s);
    REQUIRE(a.rows == 3);
    CHECK(a.at(1, 1) == doctest::Approx(-1.0));
    CHECK(a.at(2, 2) == doctest::Approx(-2.0));
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c)
            if (r != c || r == 0) CHECK(a.at(r, c) == 0.0);

    // every interior entry against the oracle
    for (std::size_t j = 1; j <= 2; ++j)
        for (std::size_t l = 1; l <= 2; ++l)
            CHECK(close_rel(a.at(j, l),
                            test::oracle_first_partial(s.features, {0.0, 0.0}, l, j)));

    Matrix single = velocity_matrix_at_zero({{0.0, 1.0}, 0});
    CHECK(single.at(1, 1) == doctest::Approx(-1.0));

    Matrix zero = velocity_matrix_at_zero({{2.0, 2.0, 2.0}, 0});
    for (double v : zero.data) CHECK(v == 0.0);
}

TEST_CASE("acceleration matrices match second-order finite differences") {
    Rng rng(103);
    for (int t = 0; t < 30; ++t) {
        std::size_t d = 2 + rng.next_u64() % 8;
        TimeSeriesSample s;
        s.features.resize(d + 1);
        for (double& v : s.features) v = rng.uniform(-4.0, 4.0);
        std::vector<double> zero(d, 0.0);
        auto bs = acceleration_matrices_at_zero(s);
        REQUIRE(bs.size() == d);
        for (std::size_t i = 1; i <= d; ++i) {
            std::size_t nonzero = 0;
            for (std::size_t j = 1; j <= d; ++j)
                for (std::size_t l = 1; l <= d; ++l) {
                    double analytic = bs[i - 1].at(j, l);
                    double numeric = test::oracle_second_partial(s.features, zero, l, i, j);
                    CHECK(close_rel(analytic, numeric, 1e-4, 1e-6));
                    if (analytic != 0.0) ++nonzero;
                }
            CHECK(nonzero <= 2);
        }
    }
}

TEST_CASE("acceleration corner cases") {
    auto zero = acceleration_matrices_at_zero({{5.0, 5.0, 5.0}, 0});
    for (const auto& b : zero)
        for (double v : b.data) CHECK(v == 0.0);

    // d = 1: x_{1,l_1} is linear in lambda_1, so B_1 vanishes
    auto b1 = acceleration_matrices_at_zero({{0.0, 3.0}, 0});
    REQUIRE(b1.size() == 1);
    for (double v : b1[0].data) CHECK(v == 0.0);
}

TEST_CASE("taylor loss bound") {
    TimeSeriesSample s{{1.0, 2.0, 4.0}, 0};
    auto m = structure_matrices_at_zero(s);
    CHECK(m.velocity.frobenius_norm() == doctest::Approx(std::sqrt(5.0)));

    std::vector<double> grad{1.0, 0.0, 0.0};
    double sum_b = 0.0;
    for (const auto& b : m.acceleration) sum_b += b.frobenius_norm();
    CHECK(taylor_loss_bound(m, grad) ==
          doctest::Approx(std::sqrt(2.0) * (std::sqrt(5.0) + sum_b)));

    std::vector<double> zero_grad{0.0, 0.0, 0.0};
    CHECK(taylor_loss_bound(m, zero_grad) == 0.0);

    auto flat = structure_matrices_at_zero({{2.0, 2.0, 2.0}, 0});
    CHECK(taylor_loss_bound(flat, grad) == 0.0);

    std::vector<double> bad{1.0};
    CHECK_THROWS_AS(taylor_loss_bound(m, bad), std::invalid_argument);
}

TEST_CASE("loss gap vanishes on constant series and shrinks with scale") {
    TimeSeriesSample flat{{1.0, 1.0, 1.0, 1.0}, 1};
    Rng rng(104);
    Rng init = rng.split(0);
    Model model = Model::init(ModelSpec{}, 4, init);
    auto loss_fn = [&](std::span<const double> x) {
        return cross_entropy_loss(model.forward(x), 1);
    };
    auto grad_g = model.preactivation_input_gradient(flat.features);
    LambdaVector lambda{{0.5, 0.5, 0.5}};

    auto flat_gap = empirical_loss_gap(flat, lambda, loss_fn, grad_g, 0.5);
    CHECK(flat_gap.gap == doctest::Approx(0.0));

    TimeSeriesSample s{{0.2, -0.4, 0.9, -0.1}, 1};
    auto grad_s = model.preactivation_input_gradient(s.features);
    auto loss_s = [&](std::span<const double> x) {
        return cross_entropy_loss(model.forward(x), 1);
    };
    auto g1 = empirical_loss_gap(s, lambda, loss_s, grad_s, 0.1);
    auto g2 = empirical_loss_gap(s, lambda, loss_s, grad_s, 0.01);
    // first-order behavior: the per-scale ratio converges
    double r1 = g1.gap / 0.1, r2 = g2.gap / 0.01;
    CHECK(std::fabs(r1 - r2) <= 0.1 * std::max(r1, r2));

    CHECK_THROWS_AS(empirical_loss_gap(s, lambda, loss_s, grad_s, 0.0), std::domain_error);
}
