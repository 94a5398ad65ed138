#include "rim/structure.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "rim/core.hpp"

namespace rim {

double Matrix::frobenius_norm() const {
    double acc = 0.0;
    for (double v : data) acc += v * v;
    return std::sqrt(acc);
}

std::string Matrix::to_text() const {
    std::string out;
    char buf[32];
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", at(r, c));
            out += buf;
            out += (c + 1 == cols) ? '\n' : ' ';
        }
    }
    return out;
}

double partial_derivative(const TimeSeriesSample& sample, const LambdaVector& lambda,
                          std::size_t i, std::size_t j) {
    const std::size_t d = sample.dim();
    if (i < 1 || i > d || j < 1 || j > d)
        throw std::out_of_range("derivative indices must lie in [1, d]");
    validate_lambda(lambda, d);

    if (i < j) return 0.0;
    AugmentedSample aug = augment_recursive(sample, lambda);
    if (i == j) return aug.features[i - 1] - sample.features[i];
    double prod = 1.0;
    for (std::size_t k = j + 1; k <= i; ++k) prod *= lambda.values[k - 1];
    return prod * (aug.features[j - 1] - sample.features[j]);
}

Matrix velocity_matrix_at_zero(const TimeSeriesSample& sample) {
    validate_sample(sample);
    const std::size_t d = sample.dim();
    Matrix a(d + 1, d + 1);
    for (std::size_t l = 1; l <= d; ++l)
        a.at(l, l) = sample.features[l - 1] - sample.features[l];
    return a;
}

std::vector<Matrix> acceleration_matrices_at_zero(const TimeSeriesSample& sample) {
    validate_sample(sample);
    const std::size_t d = sample.dim();
    std::vector<Matrix> out;
    out.reserve(d);
    // Differentiating the first-partial cases once more and setting lambda=0
    // kills every term that retains a lambda factor. What survives:
    //   entry (i+1, i+1): d/dl_i of (x_{i,l_i} - x_{i+1})'s x-part -> x_{i-1} - x_i
    //   entry (i-1, i):   product-rule term at l=j+1=i        -> x_{i-2} - x_{i-1}
    for (std::size_t i = 1; i <= d; ++i) {
        Matrix b(d + 1, d + 1);
        if (i + 1 <= d) b.at(i + 1, i + 1) = sample.features[i - 1] - sample.features[i];
        if (i >= 2) b.at(i - 1, i) = sample.features[i - 2] - sample.features[i - 1];
        out.push_back(std::move(b));
    }
    return out;
}

StructureMatrices structure_matrices_at_zero(const TimeSeriesSample& sample) {
    StructureMatrices m;
    m.velocity = velocity_matrix_at_zero(sample);
    m.acceleration = acceleration_matrices_at_zero(sample);
    return m;
}

double taylor_loss_bound(const StructureMatrices& matrices, std::span<const double> grad_g) {
    if (grad_g.size() != matrices.velocity.rows)
        throw std::invalid_argument("grad_g length must be d+1");
    const std::size_t d = matrices.velocity.rows - 1;
    double norms = matrices.velocity.frobenius_norm();
    for (const auto& b : matrices.acceleration) norms += b.frobenius_norm();
    double g2 = 0.0;
    for (double v : grad_g) g2 += v * v;
    return std::sqrt(static_cast<double>(d)) * norms * std::sqrt(g2);
}

LossGap empirical_loss_gap(const TimeSeriesSample& sample, const LambdaVector& lambda,
                           const std::function<double(std::span<const double>)>& loss_fn,
                           std::span<const double> grad_g, double scale) {
    if (!(scale > 0.0 && scale <= 1.0)) throw std::domain_error("scale must lie in (0, 1]");
    LambdaVector scaled = lambda;
    for (double& v : scaled.values) v *= scale;
    AugmentedSample aug = augment_recursive(sample, scaled);

    LossGap out;
    out.gap = std::fabs(loss_fn(aug.features) - loss_fn(sample.features));
    out.bound = taylor_loss_bound(structure_matrices_at_zero(sample), grad_g);
    return out;
}

}  // namespace rim
