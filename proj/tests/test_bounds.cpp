#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rim/bounds.hpp"
#include "rim/core.hpp"

using namespace rim;

TEST_CASE("series extrema") {
    auto e1 = series_extrema({{1.0, 2.0, 3.0}, 0});
    CHECK(e1.magnitude == doctest::Approx(3.0));
    CHECK(e1.step == doctest::Approx(1.0));

    auto e2 = series_extrema({{0.0}, 0});
    CHECK(e2.magnitude == 0.0);
    CHECK(e2.step == 0.0);

    auto e3 = series_extrema({{-4.0, 2.0}, 0});
    CHECK(e3.magnitude == doctest::Approx(4.0));
    CHECK(e3.step == doctest::Approx(6.0));
}

TEST_CASE("mean deviation bound plug-ins") {
    CHECK(mean_deviation_bound({2.0, 0.3}, 0.5, 10) == doctest::Approx(0.3));
    CHECK(mean_deviation_bound({2.0, 0.3}, 0.0, 10) == doctest::Approx(0.0));
    CHECK(mean_deviation_bound({1.0, 2.0}, 0.9, 1) == doctest::Approx(1.8));
    CHECK_THROWS_AS(mean_deviation_bound({1.0, 1.0}, 1.0, 1), std::domain_error);
    // near-degenerate e: the e/(1-e) term drops out instead of overflowing,
    // leaving min{3em, Nem'} = min{3, 2} = 2
    CHECK(mean_deviation_bound({1.0, 1.0}, 1.0 - 1e-13, 2) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("sample distance bound plug-ins") {
    CHECK(sample_distance_bound(1.0, 10, 0.5) == doctest::Approx(10.0));
    CHECK(sample_distance_bound(1.0, 0, 0.5) == 0.0);
    CHECK(sample_distance_bound(1.0, 10, 0.0) == 0.0);
}

TEST_CASE("identity augmentation gives zero estimates") {
    TimeSeriesSample s{{1.0, 2.0, 3.0}, 0};
    auto spec = LambdaDistributionSpec::constant(0.0);
    Rng rng(5);
    auto dev = estimate_mean_deviation(s, spec, 1000, rng);
    for (const auto& est : dev) {
        CHECK(est.estimate == 0.0);
        CHECK(est.std_error == 0.0);
    }
    auto dist = estimate_sample_distance(s, spec, 1000, rng);
    CHECK(dist.estimate == 0.0);
}

TEST_CASE("constant series gives zero estimates under any spec") {
    TimeSeriesSample s{{2.0, 2.0, 2.0, 2.0}, 0};
    Rng rng(6);
    auto dev = estimate_mean_deviation(s, LambdaDistributionSpec::uniform(), 1000, rng);
    for (const auto& est : dev) CHECK(est.estimate <= 1e-14);
}

TEST_CASE("Monte Carlo estimates respect the analytic bounds") {
    TimeSeriesSample s{{1.0, 2.0, 3.0}, 0};
    auto spec = LambdaDistributionSpec::uniform();
    Rng rng(17);
    auto ext = series_extrema(s);
    double bound = mean_deviation_bound(ext, 0.5, s.dim());
    Rng dev_rng = rng.split(0);
    auto dev = estimate_mean_deviation(s, spec, 20000, dev_rng);
    for (const auto& est : dev) CHECK(est.estimate <= bound + 3.0 * est.std_error);

    Rng dist_rng = rng.split(1);
    auto dist = estimate_sample_distance(s, spec, 20000, dist_rng);
    CHECK(dist.estimate <= sample_distance_bound(3.0, 2, 0.5) + 3.0 * dist.std_error);
}

TEST_CASE("l2 distance never exceeds l1 distance on realized augmentations") {
    Rng rng(23);
    for (int t = 0; t < 200; ++t) {
        std::size_t d = 1 + rng.next_u64() % 16;
        TimeSeriesSample s;
        s.features.resize(d + 1);
        for (double& v : s.features) v = rng.uniform(-3.0, 3.0);
        LambdaVector lambda;
        lambda.values.resize(d);
        for (double& v : lambda.values) v = rng.uniform();
        auto aug = augment_recursive(s, lambda);
        double l1 = 0.0, l2sq = 0.0;
        for (std::size_t i = 0; i <= d; ++i) {
            double diff = std::fabs(aug.features[i] - s.features[i]);
            l1 += diff;
            l2sq += diff * diff;
        }
        CHECK(std::sqrt(l2sq) <= l1 + 1e-15);
    }
}

TEST_CASE("verify_bounds produces full pass rate on random data") {
    Dataset ds;
    Rng gen(31);
    for (int i = 0; i < 5; ++i) {
        TimeSeriesSample s;
        s.features.resize(9);
        for (double& v : s.features) v = gen.uniform(-1.0, 1.0);
        ds.samples.push_back(s);
    }
    Rng rng(32);
    auto summary = verify_bounds(ds, LambdaDistributionSpec::uniform(), 5000, rng);
    CHECK(summary.pass_rate == doctest::Approx(1.0));
    CHECK(summary.reports.size() == 5);
}

TEST_CASE("error contracts") {
    TimeSeriesSample s{{1.0, 2.0}, 0};
    Rng rng(1);
    CHECK_THROWS_AS(estimate_mean_deviation(s, LambdaDistributionSpec::uniform(), 10, rng),
                    std::invalid_argument);
    CHECK_THROWS_AS(verify_bounds(Dataset{}, LambdaDistributionSpec::uniform(), 1000, rng),
                    std::invalid_argument);
}
