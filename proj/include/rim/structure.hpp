#ifndef RIM_STRUCTURE_HPP
#define RIM_STRUCTURE_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "rim/sample.hpp"

namespace rim {

/// Minimal dense row-major matrix; big enough for (d+1)x(d+1) work here.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    double frobenius_norm() const;
    std::string to_text() const;  // dense numeric grid, one row per line
};

/// Velocity matrix A and acceleration matrices B_1..B_d, all at lambda = 0.
struct StructureMatrices {
    Matrix velocity;
    std::vector<Matrix> acceleration;
};

/// d x_{i,l_i} / d l_j: 0 for i<j; x_{i-1,l_{i-1}} - x_i for i=j;
/// (prod_{k=j+1}^i l_k)(x_{j-1,l_{j-1}} - x_j) for i>j. Indices 1-based.
double partial_derivative(const TimeSeriesSample& sample, const LambdaVector& lambda,
                          std::size_t i, std::size_t j);

/// (d+1)x(d+1); border row/column zero; interior entry (j,l) is the first
/// partial of coordinate l with respect to lambda_j at lambda = 0, which is
/// x_{l-1} - x_l on the diagonal and 0 elsewhere.
Matrix velocity_matrix_at_zero(const TimeSeriesSample& sample);

/// B_i interior entry (j,l) is the mixed second partial of coordinate l with
/// respect to lambda_i and lambda_j at lambda = 0; at most two entries are
/// nonzero per matrix.
std::vector<Matrix> acceleration_matrices_at_zero(const TimeSeriesSample& sample);

StructureMatrices structure_matrices_at_zero(const TimeSeriesSample& sample);

/// sqrt(d) (|A|_F + sum_i |B_i|_F) |grad_g|_2.
double taylor_loss_bound(const StructureMatrices& matrices, std::span<const double> grad_g);

struct LossGap {
    double gap = 0.0;    // |l(s_{scale*lambda}) - l(s)|
    double bound = 0.0;  // taylor_loss_bound for the sample
};

/// Measured loss change under the down-scaled lambda, next to the analytic
/// first-order bound. loss_fn maps a feature vector to a scalar loss.
LossGap empirical_loss_gap(const TimeSeriesSample& sample, const LambdaVector& lambda,
                           const std::function<double(std::span<const double>)>& loss_fn,
                           std::span<const double> grad_g, double scale);

}  // namespace rim

#endif  // RIM_STRUCTURE_HPP
