#include "rim/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "rim/core.hpp"

namespace rim {

SeriesExtrema series_extrema(const TimeSeriesSample& sample) {
    validate_sample(sample);
    SeriesExtrema out;
    for (double v : sample.features) out.magnitude = std::max(out.magnitude, std::fabs(v));
    for (std::size_t i = 1; i < sample.features.size(); ++i)
        out.step = std::max(out.step, std::fabs(sample.features[i] - sample.features[i - 1]));
    return out;
}

double mean_deviation_bound(const SeriesExtrema& extrema, double e, std::size_t n) {
    if (!(e >= 0.0 && e < 1.0)) throw std::domain_error("e must lie in [0,1)");
    if (n < 1) throw std::invalid_argument("n must be at least 1");
    double a = 3.0 * e * extrema.magnitude;
    double b = (1.0 - e < 1e-12) ? std::numeric_limits<double>::infinity()
                                 : e / (1.0 - e) * extrema.step;
    double c = static_cast<double>(n) * e * extrema.step;
    return std::min({a, b, c});
}

double sample_distance_bound(double m, std::size_t d, double e) {
    return 2.0 * m * static_cast<double>(d) * e;
}

namespace {

void check_trials(std::size_t trials) {
    if (trials < 1000) throw std::invalid_argument("at least 1000 Monte Carlo trials required");
}

}  // namespace

std::vector<IndexEstimate> estimate_mean_deviation(const TimeSeriesSample& sample,
                                                   const LambdaDistributionSpec& spec,
                                                   std::size_t trials, Rng& rng) {
    check_trials(trials);
    validate_sample(sample);
    const std::size_t len = sample.features.size();
    std::vector<double> sum(len, 0.0), sumsq(len, 0.0);
    for (std::size_t t = 0; t < trials; ++t) {
        Rng stream = rng.split(t);
        LambdaVector lambda = sample_lambda(spec, sample.dim(), stream);
        AugmentedSample aug = augment_recursive(sample, lambda);
        for (std::size_t n = 0; n < len; ++n) {
            double dev = aug.features[n] - sample.features[n];
            sum[n] += dev;
            sumsq[n] += dev * dev;
        }
    }
    std::vector<IndexEstimate> out(len);
    const double T = static_cast<double>(trials);
    for (std::size_t n = 0; n < len; ++n) {
        double mean = sum[n] / T;
        double var = std::max(0.0, sumsq[n] / T - mean * mean);
        out[n].estimate = std::fabs(mean);
        out[n].std_error = std::sqrt(var / T);
    }
    return out;
}

IndexEstimate estimate_sample_distance(const TimeSeriesSample& sample,
                                       const LambdaDistributionSpec& spec, std::size_t trials,
                                       Rng& rng) {
    check_trials(trials);
    validate_sample(sample);
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        Rng stream = rng.split(t);
        LambdaVector lambda = sample_lambda(spec, sample.dim(), stream);
        AugmentedSample aug = augment_recursive(sample, lambda);
        double dist = 0.0;
        for (std::size_t n = 0; n < sample.features.size(); ++n)
            dist += std::fabs(aug.features[n] - sample.features[n]);
        sum += dist;
        sumsq += dist * dist;
    }
    const double T = static_cast<double>(trials);
    IndexEstimate out;
    out.estimate = sum / T;
    double var = std::max(0.0, sumsq / T - out.estimate * out.estimate);
    out.std_error = std::sqrt(var / T);
    return out;
}

DeviationBoundReport verify_sample_bounds(const TimeSeriesSample& sample,
                                          const LambdaDistributionSpec& spec, std::size_t trials,
                                          Rng& rng) {
    DeviationBoundReport report;
    report.extrema = series_extrema(sample);
    report.e = spec.mean();
    report.dim = sample.dim();
    if (report.dim >= 1)
        report.bound_mean_dev = mean_deviation_bound(report.extrema, report.e, report.dim);
    report.bound_sample_distance =
        sample_distance_bound(report.extrema.magnitude, report.dim, report.e);

    Rng dev_rng = rng.split(0);
    Rng dist_rng = rng.split(1);
    report.mc_mean_dev = estimate_mean_deviation(sample, spec, trials, dev_rng);
    report.mc_sample_distance = estimate_sample_distance(sample, spec, trials, dist_rng);

    report.mean_dev_pass = true;
    for (const auto& est : report.mc_mean_dev)
        if (est.estimate > report.bound_mean_dev + 3.0 * est.std_error)
            report.mean_dev_pass = false;
    report.distance_pass =
        report.mc_sample_distance.estimate <=
        report.bound_sample_distance + 3.0 * report.mc_sample_distance.std_error;
    report.pass = report.mean_dev_pass && report.distance_pass;
    return report;
}

BoundsSummary verify_bounds(const Dataset& dataset, const LambdaDistributionSpec& spec,
                            std::size_t trials, Rng& rng) {
    validate_dataset(dataset);
    BoundsSummary summary;
    std::size_t passed = 0;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        Rng stream = rng.split(i);
        summary.reports.push_back(
            verify_sample_bounds(dataset.samples[i], spec, trials, stream));
        if (summary.reports.back().pass) ++passed;
    }
    summary.pass_rate = static_cast<double>(passed) / static_cast<double>(dataset.size());
    return summary;
}

}  // namespace rim
