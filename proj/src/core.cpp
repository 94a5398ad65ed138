#include "rim/core.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rim {

void validate_sample(const TimeSeriesSample& sample) {
    if (sample.features.empty())
        throw std::invalid_argument("sample must have at least one feature");
    for (std::size_t i = 0; i < sample.features.size(); ++i)
        if (!std::isfinite(sample.features[i]))
            throw std::invalid_argument("non-finite feature at index " + std::to_string(i));
    if (sample.label < 0)
        throw std::invalid_argument("label must be non-negative");
}

void validate_lambda(const LambdaVector& lambda, std::size_t expected_dim) {
    if (lambda.size() != expected_dim)
        throw std::invalid_argument("lambda length " + std::to_string(lambda.size()) +
                                    " does not match sample dimension " +
                                    std::to_string(expected_dim));
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        double v = lambda.values[i];
        if (!(v >= 0.0 && v < 1.0))
            throw std::domain_error("lambda_" + std::to_string(i + 1) +
                                    " outside [0,1): " + std::to_string(v));
    }
}

void validate_dataset(const Dataset& dataset) {
    if (dataset.empty()) throw std::invalid_argument("dataset is empty");
    std::size_t len = dataset.samples.front().features.size();
    for (const auto& s : dataset.samples) {
        validate_sample(s);
        if (s.features.size() != len)
            throw std::invalid_argument("dataset has non-uniform feature lengths");
    }
}

AugmentedSample augment_recursive(const TimeSeriesSample& sample, const LambdaVector& lambda) {
    validate_sample(sample);
    validate_lambda(lambda, sample.dim());

    AugmentedSample out;
    out.label = sample.label;
    out.lambda = lambda;
    out.features.resize(sample.features.size());
    out.features[0] = sample.features[0];
    for (std::size_t i = 1; i < sample.features.size(); ++i) {
        double li = lambda.values[i - 1];
        // li == 0 passes x_i through untouched; exact identity by construction.
        out.features[i] = (li == 0.0)
                              ? sample.features[i]
                              : (1.0 - li) * sample.features[i] + li * out.features[i - 1];
    }
    return out;
}

CoefficientVector closed_form_coefficients(const LambdaVector& lambda, std::size_t n) {
    if (n > lambda.size())
        throw std::out_of_range("coefficient index n=" + std::to_string(n) +
                                " exceeds lambda length " + std::to_string(lambda.size()));
    CoefficientVector out;
    out.coefficients.resize(n + 1);
    // Suffix products prod_{i=k+1}^n lambda_i, empty product = 1.
    double suffix = 1.0;
    std::vector<double> prod(n + 1, 1.0);
    for (std::size_t k = n; k-- > 0;) {
        suffix *= lambda.values[k];  // lambda_{k+1} in 1-based terms
        prod[k] = suffix;
    }
    out.coefficients[0] = prod[0];  // g(lambda_0) = 1 by the dummy convention
    for (std::size_t k = 1; k <= n; ++k)
        out.coefficients[k] = prod[k] * (1.0 - lambda.values[k - 1]);
    return out;
}

AugmentedSample augment_closed_form(const TimeSeriesSample& sample, const LambdaVector& lambda) {
    validate_sample(sample);
    validate_lambda(lambda, sample.dim());

    AugmentedSample out;
    out.label = sample.label;
    out.lambda = lambda;
    out.features.resize(sample.features.size());
    for (std::size_t n = 0; n < sample.features.size(); ++n) {
        CoefficientVector c = closed_form_coefficients(lambda, n);
        double acc = 0.0;
        for (std::size_t k = 0; k <= n; ++k) acc += c.coefficients[k] * sample.features[k];
        out.features[n] = acc;
    }
    return out;
}

std::vector<std::vector<double>> augment_recursive_channels(
    const std::vector<std::vector<double>>& timesteps, const LambdaVector& lambda) {
    if (timesteps.empty()) throw std::invalid_argument("no timesteps");
    std::size_t channels = timesteps.front().size();
    for (const auto& step : timesteps)
        if (step.size() != channels)
            throw std::invalid_argument("ragged channel counts across timesteps");
    validate_lambda(lambda, timesteps.size() - 1);

    std::vector<std::vector<double>> out(timesteps.size());
    out[0] = timesteps[0];
    for (std::size_t i = 1; i < timesteps.size(); ++i) {
        double li = lambda.values[i - 1];
        out[i].resize(channels);
        for (std::size_t c = 0; c < channels; ++c)
            out[i][c] = (li == 0.0) ? timesteps[i][c]
                                    : (1.0 - li) * timesteps[i][c] + li * out[i - 1][c];
    }
    return out;
}

}  // namespace rim
