#ifndef RIM_BOUNDS_HPP
#define RIM_BOUNDS_HPP

#include <cstddef>
#include <vector>

#include "rim/distributions.hpp"
#include "rim/rng.hpp"
#include "rim/sample.hpp"

namespace rim {

/// m = max |x_i|, m' = max |x_i - x_{i-1}|.
struct SeriesExtrema {
    double magnitude = 0.0;  // m
    double step = 0.0;       // m'
};

struct IndexEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
};

/// Analytic bounds and Monte Carlo estimates for one series.
struct DeviationBoundReport {
    SeriesExtrema extrema;
    double e = 0.0;             // E[D]
    std::size_t dim = 0;        // d
    double bound_mean_dev = 0.0;       // min{3em, (e/(1-e))m', d e m'}
    double bound_sample_distance = 0.0;  // 2 m d e
    std::vector<IndexEstimate> mc_mean_dev;  // per index n
    IndexEstimate mc_sample_distance;        // E[|s_lambda - s|_1]
    bool mean_dev_pass = false;
    bool distance_pass = false;
    bool pass = false;
};

struct BoundsSummary {
    std::vector<DeviationBoundReport> reports;
    double pass_rate = 0.0;
};

SeriesExtrema series_extrema(const TimeSeriesSample& sample);

/// min of the three deviation terms; the e/(1-e) term is treated as +inf
/// when 1-e underflows past 1e-12.
double mean_deviation_bound(const SeriesExtrema& extrema, double e, std::size_t n);

/// 2 m d e.
double sample_distance_bound(double m, std::size_t d, double e);

/// Monte Carlo |mean deviation| per index, with standard errors.
std::vector<IndexEstimate> estimate_mean_deviation(const TimeSeriesSample& sample,
                                                   const LambdaDistributionSpec& spec,
                                                   std::size_t trials, Rng& rng);

/// Monte Carlo mean of sum_i |x_{i,l_i} - x_i| with standard error.
IndexEstimate estimate_sample_distance(const TimeSeriesSample& sample,
                                       const LambdaDistributionSpec& spec, std::size_t trials,
                                       Rng& rng);

DeviationBoundReport verify_sample_bounds(const TimeSeriesSample& sample,
                                          const LambdaDistributionSpec& spec, std::size_t trials,
                                          Rng& rng);

/// Per-sample reports plus the aggregate pass rate; accept at 3 standard errors.
BoundsSummary verify_bounds(const Dataset& dataset, const LambdaDistributionSpec& spec,
                            std::size_t trials, Rng& rng);

}  // namespace rim

#endif  // RIM_BOUNDS_HPP
