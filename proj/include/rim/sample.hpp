#ifndef RIM_SAMPLE_HPP
#define RIM_SAMPLE_HPP

#include <cstddef>
#include <vector>

namespace rim {

/// One time-series realization: features x_0..x_d plus a class label.
struct TimeSeriesSample {
    std::vector<double> features;
    int label = 0;

    std::size_t dim() const { return features.empty() ? 0 : features.size() - 1; }
};

/// Interpolation coefficients lambda_1..lambda_d, each in [0, 1).
/// lambda_0 is a notational dummy and is never stored.
struct LambdaVector {
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
};

/// Augmented realization together with where it came from.
struct AugmentedSample {
    std::vector<double> features;
    int label = 0;
    std::size_t source_index = 0;
    LambdaVector lambda;
};

/// Convex weights c_0..c_n expressing one augmented coordinate as a
/// combination of the original prefix x_0..x_n.
struct CoefficientVector {
    std::vector<double> coefficients;
};

/// Uniform-length labeled collection of series.
struct Dataset {
    std::vector<TimeSeriesSample> samples;

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
};

void validate_sample(const TimeSeriesSample& sample);
void validate_lambda(const LambdaVector& lambda, std::size_t expected_dim);
void validate_dataset(const Dataset& dataset);

}  // namespace rim

#endif  // RIM_SAMPLE_HPP
