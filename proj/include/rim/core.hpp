#ifndef RIM_CORE_HPP
#define RIM_CORE_HPP

#include <cstddef>
#include <vector>

#include "rim/sample.hpp"

namespace rim {

/// Recursive interpolation: x_{0,l} = x_0 and for i >= 1
///   x_{i,l_i} = (1 - l_i) x_i + l_i x_{i-1,l_{i-1}}.
/// l_i = 0 short-circuits to x_i so the all-zero lambda reproduces the
/// input bitwise. Label is copied. O(d) single forward pass.
AugmentedSample augment_recursive(const TimeSeriesSample& sample, const LambdaVector& lambda);

/// Weights c_k = (prod_{i=k+1}^n l_i) * g(l_k) with g(l_0) = 1 and
/// g(l_k) = 1 - l_k for k >= 1; a probability vector over x_0..x_n.
CoefficientVector closed_form_coefficients(const LambdaVector& lambda, std::size_t n);

/// Same operator via the closed-form weights; agrees with augment_recursive
/// to 1e-10 per coordinate.
AugmentedSample augment_closed_form(const TimeSeriesSample& sample, const LambdaVector& lambda);

/// Multichannel variant: timesteps[i] holds the channels of step i and the
/// same lambda_i applies to every channel of that step.
std::vector<std::vector<double>> augment_recursive_channels(
    const std::vector<std::vector<double>>& timesteps, const LambdaVector& lambda);

}  // namespace rim

#endif  // RIM_CORE_HPP
