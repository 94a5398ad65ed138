#ifndef RIM_LEARNER_HPP
#define RIM_LEARNER_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rim/distributions.hpp"
#include "rim/rng.hpp"
#include "rim/sample.hpp"

namespace rim {

enum class Architecture { Logistic, Mlp, Conv1d };

struct ModelSpec {
    Architecture arch = Architecture::Logistic;
    std::vector<std::size_t> hidden;  // MLP hidden layer widths
    std::size_t kernel_size = 3;      // Conv1d
    std::size_t filters = 8;          // Conv1d

    static ModelSpec parse(const std::string& text);
    std::string to_string() const;
};

/// Binary classifier f(x) = sigmoid(g(x)) with ReLU hidden activations.
/// Parameters live in one flat vector so the optimizers stay generic.
class Model {
public:
    static Model init(const ModelSpec& spec, std::size_t input_dim, Rng& rng);

    double preactivation(std::span<const double> features) const;  // g(x)
    double forward(std::span<const double> features) const;        // sigmoid(g(x))

    /// Gradient of g with respect to the input (piecewise constant under ReLU).
    std::vector<double> preactivation_input_gradient(std::span<const double> features) const;

    /// Parameter gradient of the cross-entropy loss at one labeled sample.
    std::vector<double> loss_gradient(std::span<const double> features, int label) const;

    std::vector<double>& parameters() { return params_; }
    const std::vector<double>& parameters() const { return params_; }
    const ModelSpec& spec() const { return spec_; }
    std::size_t input_dim() const { return input_dim_; }

private:
    ModelSpec spec_;
    std::size_t input_dim_ = 0;
    std::vector<double> params_;
    std::vector<std::size_t> layer_sizes_;  // MLP: input..hidden..1

    struct Workspace;
    double forward_pass(std::span<const double> features, Workspace* ws) const;
};

double sigmoid(double z);
/// Negated log-likelihood, probability clamped away from {0, 1}.
double cross_entropy_loss(double probability, int label);

enum class Optimizer { Sgd, Adam };

struct AugmentationConfig {
    LambdaDistributionSpec spec;
    std::size_t factor = 1;         // K augmented copies per sample
    bool redraw_per_epoch = false;  // default: fix the augmented set once
};

struct TrainConfig {
    std::size_t epochs = 30;
    std::size_t batch_size = 16;
    double learning_rate = 0.01;
    Optimizer optimizer = Optimizer::Adam;
    std::optional<AugmentationConfig> augmentation;
    std::size_t num_seeds = 1;
    std::uint64_t seed = 0;
};

struct EpochCurve {
    std::vector<double> train_loss;  // per epoch
    std::vector<double> test_loss;
    std::vector<double> test_accuracy;
};

struct TrainReport {
    std::vector<EpochCurve> runs;          // one per seed
    std::vector<double> mean_test_accuracy;  // per epoch, across seeds
    std::vector<double> std_test_accuracy;
    double final_accuracy_mean = 0.0;
    double final_accuracy_std = 0.0;
};

TrainReport train(const Dataset& train_set, const Dataset& test_set, const ModelSpec& model_spec,
                  const TrainConfig& config);

struct CompareReport {
    TrainReport plain;
    TrainReport augmented;
    double accuracy_delta = 0.0;  // augmented minus plain, final-epoch means
};

/// Two arms differing only in the augmentation flag; per-seed model
/// initialization is shared between arms.
CompareReport compare_experiment(const Dataset& train_set, const Dataset& test_set,
                                 const ModelSpec& model_spec, const TrainConfig& base_config,
                                 const AugmentationConfig& augmentation);

struct VarianceConfig {
    std::size_t dim = 8;            // d; series have d+1 coordinates
    std::size_t samples = 50;       // N per replication
    std::size_t replications = 2000;
    LambdaDistributionSpec spec;
    std::size_t mc_lambda = 64;     // draws approximating E_lambda per sample
    double latent_mean = 1.0;       // constant latent series level
    double latent_sigma = 1.0;      // latent noise std
    std::uint64_t seed = 0;
};

struct VarianceReport {
    double trace_sigma0 = 0.0;
    double trace_sigma_aug = 0.0;
    double relative_efficiency = 0.0;
    double trace_sigma0_se = 0.0;
    double trace_sigma_aug_se = 0.0;
    double relative_efficiency_se = 0.0;
    double trace_sigma0_analytic = 0.0;
    std::size_t replications = 0;
};

/// Squared-error location estimation under an orbit-structured generator:
/// a latent constant-level series plus white noise is observed through one
/// random interpolation draw, so the population mean is the latent level
/// vector and augmentation preserves it. Compares plain mean vs averaged-
/// augmented-loss minimizer across replications.
VarianceReport variance_experiment(const VarianceConfig& config);

/// Analytic tr(Cov(s)) of the generator above mapped through the squared-
/// loss sandwich (which is the covariance itself).
double variance_experiment_analytic_trace(const VarianceConfig& config);

}  // namespace rim

#endif  // RIM_LEARNER_HPP
