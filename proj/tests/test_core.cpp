#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "rim/core.hpp"
#include "rim/rng.hpp"
#include "support/oracles.hpp"

using namespace rim;

namespace {

TimeSeriesSample make_sample(std::vector<double> features, int label = 0) {
    return TimeSeriesSample{std::move(features), label};
}

LambdaVector make_lambda(std::vector<double> values) { return LambdaVector{std::move(values)}; }

}  // namespace

TEST_CASE("zero lambda reproduces the input bitwise") {
    auto s = make_sample({1.0, 2.0, 3.0}, 1);
    auto out = augment_recursive(s, make_lambda({0.0, 0.0}));
    CHECK(out.features == s.features);
    CHECK(out.label == 1);
}

TEST_CASE("hand-unrolled recursion example") {
    auto out = augment_recursive(make_sample({1.0, 2.0, 3.0}), make_lambda({0.5, 0.5}));
    CHECK(out.features[0] == doctest::Approx(1.0));
    CHECK(out.features[1] == doctest::Approx(1.5));
    CHECK(out.features[2] == doctest::Approx(2.25));
}

TEST_CASE("constant series is a fixed point") {
    auto s = make_sample({3.5, 3.5, 3.5, 3.5});
    Rng rng(11);
    for (int t = 0; t < 20; ++t) {
        LambdaVector lambda{{rng.uniform(), rng.uniform(), rng.uniform()}};
        auto out = augment_recursive(s, lambda);
        for (double v : out.features) CHECK(v == doctest::Approx(3.5).epsilon(1e-14));
    }
}

TEST_CASE("single-point series passes through") {
    auto out = augment_closed_form(make_sample({5.0}), make_lambda({}));
    CHECK(out.features == std::vector<double>{5.0});
}

TEST_CASE("closed-form coefficient examples") {
    auto c0 = closed_form_coefficients(make_lambda({0.5, 0.5}), 0);
    CHECK(c0.coefficients == std::vector<double>{1.0});

    auto c1 = closed_form_coefficients(make_lambda({0.3, 0.9}), 1);
    CHECK(c1.coefficients[0] == doctest::Approx(0.3));
    CHECK(c1.coefficients[1] == doctest::Approx(0.7));

    auto c2 = closed_form_coefficients(make_lambda({0.5, 0.5}), 2);
    CHECK(c2.coefficients[0] == doctest::Approx(0.25));
    CHECK(c2.coefficients[1] == doctest::Approx(0.25));
    CHECK(c2.coefficients[2] == doctest::Approx(0.5));
}

TEST_CASE("closed form matches recursion and oracle on random inputs") {
    Rng rng(42);
    double max_diff = 0.0;
    for (int t = 0; t < 1000; ++t) {
        std::size_t d = rng.next_u64() % 65;
        TimeSeriesSample s;
        s.features.resize(d + 1);
        for (double& v : s.features) v = rng.uniform(-10.0, 10.0);
        LambdaVector lambda;
        lambda.values.resize(d);
        for (double& v : lambda.values) v = rng.uniform();

        auto rec = augment_recursive(s, lambda);
        auto closed = augment_closed_form(s, lambda);
        auto oracle = test::oracle_augment(s.features, lambda.values);
        for (std::size_t i = 0; i <= d; ++i) {
            max_diff = std::max(max_diff, std::fabs(rec.features[i] - closed.features[i]));
            CHECK(rec.features[i] == doctest::Approx(oracle[i]).epsilon(1e-12));
        }
    }
    CHECK(max_diff <= 1e-10);
}

TEST_CASE("coefficients form a probability vector") {
    Rng rng(7);
    for (int t = 0; t < 2000; ++t) {
        std::size_t d = 1 + rng.next_u64() % 32;
        LambdaVector lambda;
        lambda.values.resize(d);
        for (double& v : lambda.values) v = rng.uniform();
        std::size_t n = rng.next_u64() % (d + 1);
        auto c = closed_form_coefficients(lambda, n);
        double sum = 0.0;
        for (double v : c.coefficients) {
            CHECK(v >= 0.0);
            sum += v;
        }
        CHECK(std::fabs(sum - 1.0) <= 1e-12);
    }
}

TEST_CASE("augmented coordinates stay in the prefix range") {
    Rng rng(13);
    for (int t = 0; t < 2000; ++t) {
        std::size_t d = 1 + rng.next_u64() % 16;
        TimeSeriesSample s;
        s.features.resize(d + 1);
        for (double& v : s.features) v = rng.uniform(-5.0, 5.0);
        LambdaVector lambda;
        lambda.values.resize(d);
        for (double& v : lambda.values) v = rng.uniform();

        auto out = augment_recursive(s, lambda);
        double lo = s.features[0], hi = s.features[0];
        for (std::size_t i = 0; i <= d; ++i) {
            lo = std::min(lo, s.features[i]);
            hi = std::max(hi, s.features[i]);
            CHECK(out.features[i] >= lo - 1e-12);
            CHECK(out.features[i] <= hi + 1e-12);
        }
    }
}

TEST_CASE("coordinate i ignores later lambda entries") {
    auto s = make_sample({1.0, -2.0, 0.5, 4.0, -1.0});
    auto base = augment_recursive(s, make_lambda({0.2, 0.4, 0.6, 0.8}));
    auto perturbed = augment_recursive(s, make_lambda({0.2, 0.4, 0.99, 0.01}));
    CHECK(base.features[0] == perturbed.features[0]);
    CHECK(base.features[1] == perturbed.features[1]);
    CHECK(base.features[2] == perturbed.features[2]);
    CHECK(base.features[3] != perturbed.features[3]);
}

TEST_CASE("input validation") {
    auto s = make_sample({1.0, 2.0, 3.0});
    CHECK_THROWS_AS(augment_recursive(s, make_lambda({0.5})), std::invalid_argument);
    CHECK_THROWS_AS(augment_recursive(s, make_lambda({0.5, 1.0})), std::domain_error);
    CHECK_THROWS_AS(augment_recursive(s, make_lambda({0.5, -0.1})), std::domain_error);
    CHECK_THROWS_AS(
        augment_recursive(make_sample({1.0, std::nan(""), 2.0}), make_lambda({0.5, 0.5})),
        std::invalid_argument);
    CHECK_THROWS_AS(closed_form_coefficients(make_lambda({0.5}), 2), std::out_of_range);
}

TEST_CASE("shared-lambda multichannel augmentation matches per-channel scalar path") {
    std::vector<std::vector<double>> steps{{1.0, 10.0}, {2.0, 20.0}, {3.0, 30.0}};
    auto lambda = make_lambda({0.25, 0.75});
    auto out = augment_recursive_channels(steps, lambda);

    for (std::size_t c = 0; c < 2; ++c) {
        TimeSeriesSample chan;
        for (const auto& step : steps) chan.features.push_back(step[c]);
        auto scalar = augment_recursive(chan, lambda);
        for (std::size_t i = 0; i < steps.size(); ++i)
            CHECK(out[i][c] == doctest::Approx(scalar.features[i]).epsilon(1e-15));
    }
}
