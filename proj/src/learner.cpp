#include "rim/learner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "rim/core.hpp"
#include "rim/dataio.hpp"

namespace rim {

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    double ez = std::exp(z);
    return ez / (1.0 + ez);
}

double cross_entropy_loss(double probability, int label) {
    if (label != 0 && label != 1) throw std::invalid_argument("binary label expected");
    constexpr double eps = 1e-12;
    double p = std::clamp(probability, eps, 1.0 - eps);
    return label == 1 ? -std::log(p) : -std::log(1.0 - p);
}

ModelSpec ModelSpec::parse(const std::string& text) {
    ModelSpec spec;
    auto colon = text.find(':');
    std::string head = text.substr(0, colon);
    std::string rest = colon == std::string::npos ? std::string() : text.substr(colon + 1);
    auto parse_list = [](const std::string& s) {
        std::vector<std::size_t> out;
        std::istringstream is(s);
        std::string tok;
        while (std::getline(is, tok, ',')) {
            int v = std::stoi(tok);
            if (v < 1) throw std::invalid_argument("layer sizes must be positive");
            out.push_back(static_cast<std::size_t>(v));
        }
        return out;
    };
    if (head == "logistic") {
        spec.arch = Architecture::Logistic;
    } else if (head == "mlp") {
        spec.arch = Architecture::Mlp;
        spec.hidden = rest.empty() ? std::vector<std::size_t>{16} : parse_list(rest);
    } else if (head == "conv1d") {
        spec.arch = Architecture::Conv1d;
        if (!rest.empty()) {
            auto v = parse_list(rest);
            if (v.size() != 2)
                throw std::invalid_argument("conv1d spec is conv1d:<kernel>,<filters>");
            spec.kernel_size = v[0];
            spec.filters = v[1];
        }
    } else {
        throw std::invalid_argument("unknown model spec: '" + text + "'");
    }
    return spec;
}

std::string ModelSpec::to_string() const {
    std::ostringstream os;
    switch (arch) {
        case Architecture::Logistic: os << "logistic"; break;
        case Architecture::Mlp:
            os << "mlp:";
            for (std::size_t i = 0; i < hidden.size(); ++i) os << (i ? "," : "") << hidden[i];
            break;
        case Architecture::Conv1d: os << "conv1d:" << kernel_size << "," << filters; break;
    }
    return os.str();
}

struct Model::Workspace {
    // MLP: activations per layer (post-ReLU), pre-activations per layer.
    std::vector<std::vector<double>> acts;
    std::vector<std::vector<double>> pres;
    // Conv1d: per-filter conv pre-activations and pooled values.
    std::vector<std::vector<double>> conv_pre;
    std::vector<double> pooled;
};

Model Model::init(const ModelSpec& spec, std::size_t input_dim, Rng& rng) {
    if (input_dim < 1) throw std::invalid_argument("input dimension must be positive");
    Model m;
    m.spec_ = spec;
    m.input_dim_ = input_dim;

    // Biases use the same scaled normal as the weights: besides being a
    // standard scheme, it keeps ReLU pre-activations off the exact kink,
    // which would otherwise break finite-difference gradient checks.
    auto fill = [&](std::size_t count, std::size_t fan_in) {
        double sd = 1.0 / std::sqrt(static_cast<double>(fan_in));
        for (std::size_t i = 0; i < count; ++i) m.params_.push_back(rng.normal(0.0, sd));
    };

    switch (spec.arch) {
        case Architecture::Logistic:
            fill(input_dim + 1, input_dim);
            break;
        case Architecture::Mlp: {
            m.layer_sizes_.push_back(input_dim);
            for (std::size_t h : spec.hidden) m.layer_sizes_.push_back(h);
            m.layer_sizes_.push_back(1);
            for (std::size_t l = 1; l < m.layer_sizes_.size(); ++l)
                fill(m.layer_sizes_[l] * (m.layer_sizes_[l - 1] + 1), m.layer_sizes_[l - 1]);
            break;
        }
        case Architecture::Conv1d: {
            if (input_dim < spec.kernel_size)
                throw std::invalid_argument("input shorter than convolution kernel");
            fill(spec.filters * (spec.kernel_size + 1), spec.kernel_size);  // conv w + b
            fill(spec.filters + 1, spec.filters);  // dense w + b
            break;
        }
    }
    return m;
}

double Model::forward_pass(std::span<const double> features, Workspace* ws) const {
    if (features.size() != input_dim_)
        throw std::invalid_argument("feature length does not match model input");
    const double* p = params_.data();

    switch (spec_.arch) {
        case Architecture::Logistic: {
            double g = p[input_dim_];
            for (std::size_t i = 0; i < input_dim_; ++i) g += p[i] * features[i];
            return g;
        }
        case Architecture::Mlp: {
            std::vector<double> cur(features.begin(), features.end());
            if (ws) {
                ws->acts.clear();
                ws->pres.clear();
                ws->acts.push_back(cur);
            }
            std::size_t off = 0;
            for (std::size_t l = 1; l < layer_sizes_.size(); ++l) {
                std::size_t in = layer_sizes_[l - 1], out = layer_sizes_[l];
                std::vector<double> pre(out);
                for (std::size_t o = 0; o < out; ++o) {
                    double acc = p[off + out * in + o];  // bias after weights
                    const double* w = p + off + o * in;
                    for (std::size_t i = 0; i < in; ++i) acc += w[i] * cur[i];
                    pre[o] = acc;
                }
                off += out * in + out;
                bool last = (l + 1 == layer_sizes_.size());
                std::vector<double> act(out);
                for (std::size_t o = 0; o < out; ++o)
                    act[o] = last ? pre[o] : std::max(0.0, pre[o]);
                if (ws) {
                    ws->pres.push_back(pre);
                    ws->acts.push_back(act);
                }
                cur = std::move(act);
            }
            return cur[0];
        }
        case Architecture::Conv1d: {
            const std::size_t k = spec_.kernel_size, f = spec_.filters;
            const std::size_t positions = input_dim_ - k + 1;
            const double* conv_w = p;
            const double* conv_b = p + f * k;
            const double* dense_w = conv_b + f;
            const double dense_b = dense_w[f];
            if (ws) {
                ws->conv_pre.assign(f, std::vector<double>(positions));
                ws->pooled.assign(f, 0.0);
            }
            double g = dense_b;
            for (std::size_t fi = 0; fi < f; ++fi) {
                double pooled = 0.0;
                for (std::size_t pos = 0; pos < positions; ++pos) {
                    double acc = conv_b[fi];
                    for (std::size_t t = 0; t < k; ++t)
                        acc += conv_w[fi * k + t] * features[pos + t];
                    if (ws) ws->conv_pre[fi][pos] = acc;
                    pooled += std::max(0.0, acc);
                }
                pooled /= static_cast<double>(positions);
                if (ws) ws->pooled[fi] = pooled;
                g += dense_w[fi] * pooled;
            }
            return g;
        }
    }
    return 0.0;
}

double Model::preactivation(std::span<const double> features) const {
    return forward_pass(features, nullptr);
}

double Model::forward(std::span<const double> features) const {
    return sigmoid(preactivation(features));
}

std::vector<double> Model::preactivation_input_gradient(std::span<const double> features) const {
    const double* p = params_.data();
    std::vector<double> grad(input_dim_, 0.0);

    switch (spec_.arch) {
        case Architecture::Logistic:
            grad.assign(p, p + input_dim_);
            return grad;
        case Architecture::Mlp: {
            Workspace ws;
            forward_pass(features, &ws);
            // Backprop a unit signal from g through the ReLU masks.
            std::vector<double> delta{1.0};
            std::vector<std::size_t> offsets;
            std::size_t off = 0;
            for (std::size_t l = 1; l < layer_sizes_.size(); ++l) {
                offsets.push_back(off);
                off += layer_sizes_[l] * layer_sizes_[l - 1] + layer_sizes_[l];
            }
            for (std::size_t l = layer_sizes_.size() - 1; l >= 1; --l) {
                std::size_t in = layer_sizes_[l - 1], out = layer_sizes_[l];
                const double* w = p + offsets[l - 1];
                std::vector<double> prev(in, 0.0);
                for (std::size_t o = 0; o < out; ++o)
                    for (std::size_t i = 0; i < in; ++i) prev[i] += delta[o] * w[o * in + i];
                if (l >= 2)
                    for (std::size_t i = 0; i < in; ++i)
                        if (ws.pres[l - 2][i] <= 0.0) prev[i] = 0.0;
                delta = std::move(prev);
            }
            return delta;
        }
        case Architecture::Conv1d: {
            Workspace ws;
            forward_pass(features, &ws);
            const std::size_t k = spec_.kernel_size, f = spec_.filters;
            const std::size_t positions = input_dim_ - k + 1;
            const double* conv_w = p;
            const double* dense_w = p + f * k + f;
            const double inv = 1.0 / static_cast<double>(positions);
            for (std::size_t fi = 0; fi < f; ++fi)
                for (std::size_t pos = 0; pos < positions; ++pos) {
                    if (ws.conv_pre[fi][pos] <= 0.0) continue;
                    double s = dense_w[fi] * inv;
                    for (std::size_t t = 0; t < k; ++t)
                        grad[pos + t] += s * conv_w[fi * k + t];
                }
            return grad;
        }
    }
    return grad;
}

std::vector<double> Model::loss_gradient(std::span<const double> features, int label) const {
    if (label != 0 && label != 1) throw std::invalid_argument("binary label expected");
    std::vector<double> grad(params_.size(), 0.0);
    const double* p = params_.data();
    Workspace ws;
    double g = forward_pass(features, &ws);
    double delta = sigmoid(g) - static_cast<double>(label);  // dl/dg

    switch (spec_.arch) {
        case Architecture::Logistic: {
            for (std::size_t i = 0; i < input_dim_; ++i) grad[i] = delta * features[i];
            grad[input_dim_] = delta;
            return grad;
        }
        case Architecture::Mlp: {
            std::vector<std::size_t> offsets;
            std::size_t off = 0;
            for (std::size_t l = 1; l < layer_sizes_.size(); ++l) {
                offsets.push_back(off);
                off += layer_sizes_[l] * layer_sizes_[l - 1] + layer_sizes_[l];
            }
            std::vector<double> dcur{delta};
            for (std::size_t l = layer_sizes_.size() - 1; l >= 1; --l) {
                std::size_t in = layer_sizes_[l - 1], out = layer_sizes_[l];
                std::size_t base = offsets[l - 1];
                const std::vector<double>& act_in = ws.acts[l - 1];
                for (std::size_t o = 0; o < out; ++o) {
                    for (std::size_t i = 0; i < in; ++i)
                        grad[base + o * in + i] = dcur[o] * act_in[i];
                    grad[base + out * in + o] = dcur[o];
                }
                if (l >= 2) {
                    std::vector<double> prev(in, 0.0);
                    const double* w = p + base;
                    for (std::size_t o = 0; o < out; ++o)
                        for (std::size_t i = 0; i < in; ++i)
                            prev[i] += dcur[o] * w[o * in + i];
                    for (std::size_t i = 0; i < in; ++i)
                        if (ws.pres[l - 2][i] <= 0.0) prev[i] = 0.0;
                    dcur = std::move(prev);
                }
            }
            return grad;
        }
        case Architecture::Conv1d: {
            const std::size_t k = spec_.kernel_size, f = spec_.filters;
            const std::size_t positions = input_dim_ - k + 1;
            const double* dense_w = p + f * k + f;
            const std::size_t dense_w_off = f * k + f;
            const double inv = 1.0 / static_cast<double>(positions);
            for (std::size_t fi = 0; fi < f; ++fi) {
                grad[dense_w_off + fi] = delta * ws.pooled[fi];
                double dpool = delta * dense_w[fi] * inv;
                for (std::size_t pos = 0; pos < positions; ++pos) {
                    if (ws.conv_pre[fi][pos] <= 0.0) continue;
                    for (std::size_t t = 0; t < k; ++t)
                        grad[fi * k + t] += dpool * features[pos + t];
                    grad[f * k + fi] += dpool;  // conv bias
                }
            }
            grad[dense_w_off + f] = delta;  // dense bias
            return grad;
        }
    }
    return grad;
}

namespace {

struct AdamState {
    std::vector<double> m, v;
    std::size_t t = 0;
};

void apply_update(std::vector<double>& params, const std::vector<double>& grad,
                  const TrainConfig& config, AdamState& adam) {
    if (config.optimizer == Optimizer::Sgd) {
        for (std::size_t i = 0; i < params.size(); ++i)
            params[i] -= config.learning_rate * grad[i];
        return;
    }
    constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
    if (adam.m.empty()) {
        adam.m.assign(params.size(), 0.0);
        adam.v.assign(params.size(), 0.0);
    }
    ++adam.t;
    double c1 = 1.0 - std::pow(b1, static_cast<double>(adam.t));
    double c2 = 1.0 - std::pow(b2, static_cast<double>(adam.t));
    for (std::size_t i = 0; i < params.size(); ++i) {
        adam.m[i] = b1 * adam.m[i] + (1.0 - b1) * grad[i];
        adam.v[i] = b2 * adam.v[i] + (1.0 - b2) * grad[i] * grad[i];
        params[i] -= config.learning_rate * (adam.m[i] / c1) /
                     (std::sqrt(adam.v[i] / c2) + eps);
    }
}

struct EvalResult {
    double loss = 0.0;
    double accuracy = 0.0;
};

EvalResult evaluate(const Model& model, const Dataset& data) {
    EvalResult out;
    std::size_t correct = 0;
    for (const auto& s : data.samples) {
        double prob = model.forward(s.features);
        out.loss += cross_entropy_loss(prob, s.label);
        if ((prob >= 0.5) == (s.label == 1)) ++correct;
    }
    out.loss /= static_cast<double>(data.size());
    out.accuracy = static_cast<double>(correct) / static_cast<double>(data.size());
    return out;
}

EpochCurve run_single_seed(const Dataset& train_set, const Dataset& test_set,
                           const ModelSpec& model_spec, const TrainConfig& config,
                           std::size_t seed_index) {
    Rng root = Rng(config.seed).split(seed_index);
    Rng init_rng = root.split(0);
    Rng aug_rng = root.split(1);
    Rng shuffle_rng = root.split(2);

    std::size_t input_dim = train_set.samples.front().features.size();
    Model model = Model::init(model_spec, input_dim, init_rng);

    Dataset working = train_set;
    if (config.augmentation && !config.augmentation->redraw_per_epoch)
        working = augment_dataset(train_set, config.augmentation->spec,
                                  config.augmentation->factor, aug_rng.next_u64());

    EpochCurve curve;
    auto record = [&]() {
        EvalResult tr = evaluate(model, working);
        EvalResult te = evaluate(model, test_set);
        curve.train_loss.push_back(tr.loss);
        curve.test_loss.push_back(te.loss);
        curve.test_accuracy.push_back(te.accuracy);
    };
    record();  // initialization-only metrics

    AdamState adam;
    std::vector<std::size_t> order;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        if (config.augmentation && config.augmentation->redraw_per_epoch)
            working = augment_dataset(train_set, config.augmentation->spec,
                                      config.augmentation->factor, aug_rng.next_u64());
        order.resize(working.size());
        std::iota(order.begin(), order.end(), 0);
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[shuffle_rng.next_u64() % i]);

        std::vector<double> batch_grad(model.parameters().size());
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            std::size_t end = std::min(start + config.batch_size, order.size());
            std::fill(batch_grad.begin(), batch_grad.end(), 0.0);
            for (std::size_t idx = start; idx < end; ++idx) {
                const auto& s = working.samples[order[idx]];
                std::vector<double> g = model.loss_gradient(s.features, s.label);
                for (std::size_t i = 0; i < g.size(); ++i) batch_grad[i] += g[i];
            }
            double scale = 1.0 / static_cast<double>(end - start);
            for (double& v : batch_grad) v *= scale;
            apply_update(model.parameters(), batch_grad, config, adam);
        }
        record();
        if (!std::isfinite(curve.train_loss.back()))
            throw std::runtime_error("training diverged at epoch " + std::to_string(epoch));
    }
    return curve;
}

void aggregate(TrainReport& report) {
    std::size_t points = report.runs.front().test_accuracy.size();
    report.mean_test_accuracy.assign(points, 0.0);
    report.std_test_accuracy.assign(points, 0.0);
    double n = static_cast<double>(report.runs.size());
    for (std::size_t e = 0; e < points; ++e) {
        double sum = 0.0, sumsq = 0.0;
        for (const auto& run : report.runs) {
            sum += run.test_accuracy[e];
            sumsq += run.test_accuracy[e] * run.test_accuracy[e];
        }
        double mean = sum / n;
        report.mean_test_accuracy[e] = mean;
        report.std_test_accuracy[e] = std::sqrt(std::max(0.0, sumsq / n - mean * mean));
    }
    report.final_accuracy_mean = report.mean_test_accuracy.back();
    report.final_accuracy_std = report.std_test_accuracy.back();
}

}  // namespace

TrainReport train(const Dataset& train_set, const Dataset& test_set, const ModelSpec& model_spec,
                  const TrainConfig& config) {
    validate_dataset(train_set);
    validate_dataset(test_set);
    if (config.batch_size < 1 || config.num_seeds < 1)
        throw std::invalid_argument("batch size and seed count must be positive");
    if (!(config.learning_rate > 0.0))
        throw std::invalid_argument("learning rate must be positive");

    TrainReport report;
    for (std::size_t s = 0; s < config.num_seeds; ++s)
        report.runs.push_back(run_single_seed(train_set, test_set, model_spec, config, s));
    aggregate(report);
    return report;
}

CompareReport compare_experiment(const Dataset& train_set, const Dataset& test_set,
                                 const ModelSpec& model_spec, const TrainConfig& base_config,
                                 const AugmentationConfig& augmentation) {
    TrainConfig plain_cfg = base_config;
    plain_cfg.augmentation.reset();
    TrainConfig aug_cfg = base_config;
    aug_cfg.augmentation = augmentation;

    CompareReport out;
    out.plain = train(train_set, test_set, model_spec, plain_cfg);
    out.augmented = train(train_set, test_set, model_spec, aug_cfg);
    out.accuracy_delta = out.augmented.final_accuracy_mean - out.plain.final_accuracy_mean;
    return out;
}

double variance_experiment_analytic_trace(const VarianceConfig& config) {
    double e = config.spec.mean();
    double e2 = config.spec.second_moment();
    double q = 1.0 - 2.0 * e + e2;  // E[(1-lambda)^2]
    double s2 = config.latent_sigma * config.latent_sigma;
    double trace = 1.0;  // coordinate 0 passes through
    for (std::size_t n = 1; n <= config.dim; ++n) {
        double pn = std::pow(e2, static_cast<double>(n));
        double geo = (e2 < 1.0) ? (1.0 - pn) / (1.0 - e2) : static_cast<double>(n);
        trace += pn + q * geo;
    }
    return s2 * trace;
}

VarianceReport variance_experiment(const VarianceConfig& config) {
    config.spec.validate();
    if (config.replications < 500)
        throw std::invalid_argument("at least 500 replications required");
    if (config.replications < config.dim + 1)
        throw std::invalid_argument("replications must exceed the parameter dimension");
    if (config.samples < 1 || config.mc_lambda < 1)
        throw std::invalid_argument("samples and mc_lambda must be positive");

    const std::size_t len = config.dim + 1;
    const double n = static_cast<double>(config.samples);
    Rng root(config.seed);

    // theta* is the latent level vector: a constant series is a fixed point of
    // the augmentation, so the observation mean equals the latent mean.
    std::vector<double> a(config.replications), b(config.replications);
    for (std::size_t r = 0; r < config.replications; ++r) {
        Rng rep = root.split(r);
        std::vector<double> mean_plain(len, 0.0), mean_aug(len, 0.0);
        for (std::size_t i = 0; i < config.samples; ++i) {
            Rng stream = rep.split(i);
            TimeSeriesSample latent;
            latent.features.resize(len);
            for (double& v : latent.features)
                v = config.latent_mean + config.latent_sigma * stream.normal();
            LambdaVector obs_lambda = sample_lambda(config.spec, config.dim, stream);
            AugmentedSample obs = augment_recursive(latent, obs_lambda);

            for (std::size_t c = 0; c < len; ++c) mean_plain[c] += obs.features[c];

            TimeSeriesSample obs_sample{obs.features, 0};
            // Running mean: exact when every draw coincides with the sample,
            // so a degenerate lambda distribution is bitwise neutral.
            std::vector<double> avg(len, 0.0);
            for (std::size_t j = 0; j < config.mc_lambda; ++j) {
                LambdaVector lam = sample_lambda(config.spec, config.dim, stream);
                AugmentedSample re = augment_recursive(obs_sample, lam);
                double w = 1.0 / static_cast<double>(j + 1);
                for (std::size_t c = 0; c < len; ++c)
                    avg[c] += (re.features[c] - avg[c]) * w;
            }
            for (std::size_t c = 0; c < len; ++c) mean_aug[c] += avg[c];
        }
        double da = 0.0, db = 0.0;
        for (std::size_t c = 0; c < len; ++c) {
            double p = mean_plain[c] / n - config.latent_mean;
            double g = mean_aug[c] / n - config.latent_mean;
            da += p * p;
            db += g * g;
        }
        a[r] = n * da;
        b[r] = n * db;
    }

    const double rr = static_cast<double>(config.replications);
    auto mean_of = [rr](const std::vector<double>& v) {
        return std::accumulate(v.begin(), v.end(), 0.0) / rr;
    };
    VarianceReport report;
    report.replications = config.replications;
    report.trace_sigma0 = mean_of(a);
    report.trace_sigma_aug = mean_of(b);
    double va = 0.0, vb = 0.0, cab = 0.0;
    for (std::size_t r = 0; r < config.replications; ++r) {
        double xa = a[r] - report.trace_sigma0;
        double xb = b[r] - report.trace_sigma_aug;
        va += xa * xa;
        vb += xb * xb;
        cab += xa * xb;
    }
    va /= rr;
    vb /= rr;
    cab /= rr;
    report.trace_sigma0_se = std::sqrt(va / rr);
    report.trace_sigma_aug_se = std::sqrt(vb / rr);
    double ta = report.trace_sigma0, tb = report.trace_sigma_aug;
    report.relative_efficiency = ta / tb;
    // Delta method for the paired ratio.
    double var_re = (va / (tb * tb) + ta * ta * vb / (tb * tb * tb * tb) -
                     2.0 * ta * cab / (tb * tb * tb)) / rr;
    report.relative_efficiency_se = std::sqrt(std::max(0.0, var_re));
    report.trace_sigma0_analytic = variance_experiment_analytic_trace(config);
    return report;
}

}  // namespace rim
