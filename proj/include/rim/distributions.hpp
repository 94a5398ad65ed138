#ifndef RIM_DISTRIBUTIONS_HPP
#define RIM_DISTRIBUTIONS_HPP

#include <string>
#include <string_view>

#include "rim/rng.hpp"
#include "rim/sample.hpp"

namespace rim {

/// The lambda distribution D, supported on [0, 1).
/// Configuration strings: "uniform", "beta:A,B", "constant:C".
struct LambdaDistributionSpec {
    enum class Kind { Uniform, Beta, Constant };

    Kind kind = Kind::Uniform;
    double alpha = 1.0;  // Beta shape
    double beta = 1.0;   // Beta shape
    double value = 0.0;  // Constant value

    static LambdaDistributionSpec uniform();
    static LambdaDistributionSpec beta_dist(double alpha, double beta);
    static LambdaDistributionSpec constant(double value);
    static LambdaDistributionSpec parse(std::string_view text);

    std::string to_string() const;
    void validate() const;

    /// Analytic E[D]: 0.5 for Uniform, a/(a+b) for Beta, c for Constant.
    double mean() const;
    /// Analytic E[D^2]; used by the variance experiment's analytic trace.
    double second_moment() const;

    /// One draw in [0, 1). Beta draws that round to 1.0 are resampled.
    double draw(Rng& rng) const;
};

/// d independent draws from the given distribution.
LambdaVector sample_lambda(const LambdaDistributionSpec& spec, std::size_t d, Rng& rng);

}  // namespace rim

#endif  // RIM_DISTRIBUTIONS_HPP
