// Command-line driver for the recursive interpolation toolkit: dataset
// generation, augmentation, bound verification, derivative checks, and the
// training / variance experiments. Every run is a pure function of its flags
// and --seed; repeated invocations produce byte-identical output.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rim/bounds.hpp"
#include "rim/core.hpp"
#include "rim/dataio.hpp"
#include "rim/distributions.hpp"
#include "rim/learner.hpp"
#include "rim/rng.hpp"
#include "rim/structure.hpp"
#include "rim/synthgen.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitVerifyFail = 2;

// Stage ids for deriving per-stage seeds from the single --seed.
constexpr std::uint64_t kStageData = 0;
constexpr std::uint64_t kStageLambda = 1;
constexpr std::uint64_t kStageInit = 2;

std::uint64_t stage_seed(std::uint64_t seed, std::uint64_t stage) {
    return rim::Rng(seed).split(stage).seed();
}

struct GlobalOpts {
    std::uint64_t seed = 0;
    std::string out;
    std::string format = "text";
};

// Reports go to stdout unless --out is given.
class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw std::runtime_error("cannot open output file: " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int cmd_generate(const GlobalOpts& g, int task, std::size_t n, const rim::OdeSpec& ode) {
    rim::Dataset ds = rim::generate_dataset(task, n, ode, stage_seed(g.seed, kStageData));
    if (g.out.empty()) throw std::runtime_error("generate requires --out <file>");
    rim::write_dataset(ds, g.out);
    return kExitOk;
}

int cmd_augment(const GlobalOpts& g, const std::string& in, const std::string& dist,
                std::size_t k) {
    rim::Dataset ds = rim::read_dataset(in);
    auto spec = rim::LambdaDistributionSpec::parse(dist);
    rim::Dataset aug = rim::augment_dataset(ds, spec, k, stage_seed(g.seed, kStageLambda));
    if (g.out.empty()) throw std::runtime_error("augment requires --out <file>");
    rim::write_dataset(aug, g.out);
    return kExitOk;
}

int cmd_bounds(const GlobalOpts& g, const std::string& in, const std::string& dist,
               std::size_t trials, double min_pass_rate) {
    rim::Dataset ds = rim::read_dataset(in);
    auto spec = rim::LambdaDistributionSpec::parse(dist);
    rim::Rng rng(stage_seed(g.seed, kStageLambda));
    rim::BoundsSummary summary = rim::verify_bounds(ds, spec, trials, rng);

    Output output(g.out);
    std::ostream& os = output.stream();
    for (std::size_t i = 0; i < summary.reports.size(); ++i) {
        const auto& r = summary.reports[i];
        double worst_dev = 0.0, worst_se = 0.0;
        for (const auto& est : r.mc_mean_dev)
            if (est.estimate > worst_dev) {
                worst_dev = est.estimate;
                worst_se = est.std_error;
            }
        if (g.format == "json") {
            json rec{{"sample", i},
                     {"m", r.extrema.magnitude},
                     {"m_prime", r.extrema.step},
                     {"e", r.e},
                     {"bound_mean_dev", r.bound_mean_dev},
                     {"bound_sample_distance", r.bound_sample_distance},
                     {"max_mean_dev_estimate", worst_dev},
                     {"max_mean_dev_se", worst_se},
                     {"sample_distance_estimate", r.mc_sample_distance.estimate},
                     {"sample_distance_se", r.mc_sample_distance.std_error},
                     {"mean_dev_pass", r.mean_dev_pass},
                     {"distance_pass", r.distance_pass},
                     {"pass", r.pass}};
            os << rec.dump() << '\n';
        } else {
            os << "sample " << i << " m " << fmt(r.extrema.magnitude) << " m' "
               << fmt(r.extrema.step) << " e " << fmt(r.e) << " bound_mean_dev "
               << fmt(r.bound_mean_dev) << " bound_distance "
               << fmt(r.bound_sample_distance) << " max_dev " << fmt(worst_dev) << " se "
               << fmt(worst_se) << " distance " << fmt(r.mc_sample_distance.estimate)
               << " se " << fmt(r.mc_sample_distance.std_error) << " pass "
               << (r.pass ? "true" : "false") << '\n';
        }
    }
    if (g.format == "json") {
        os << json{{"pass_rate", summary.pass_rate}}.dump() << '\n';
    } else {
        os << "pass_rate " << fmt(summary.pass_rate) << '\n';
    }
    return summary.pass_rate >= min_pass_rate ? kExitOk : kExitVerifyFail;
}

// Central finite differences on the recursive operator, independent of the
// analytic derivative path.
double fd_partial(const rim::TimeSeriesSample& sample, const rim::LambdaVector& lambda,
                  std::size_t i, std::size_t j, double h) {
    rim::LambdaVector hi = lambda, lo = lambda;
    hi.values[j - 1] = std::min(lambda.values[j - 1] + h, 1.0 - 1e-9);
    lo.values[j - 1] = std::max(lambda.values[j - 1] - h, 0.0);
    double span = hi.values[j - 1] - lo.values[j - 1];
    double up = rim::augment_recursive(sample, hi).features[i];
    double dn = rim::augment_recursive(sample, lo).features[i];
    return (up - dn) / span;
}

int cmd_derivs(const GlobalOpts& g, const std::string& in, bool fd_check, bool dump_matrices) {
    rim::Dataset ds = rim::read_dataset(in);
    rim::Rng rng(stage_seed(g.seed, kStageLambda));
    Output output(g.out);
    std::ostream& os = output.stream();

    bool all_ok = true;
    for (std::size_t s = 0; s < ds.size(); ++s) {
        const auto& sample = ds.samples[s];
        rim::StructureMatrices m = rim::structure_matrices_at_zero(sample);
        double sum_b = 0.0;
        for (const auto& b : m.acceleration) sum_b += b.frobenius_norm();

        double max_rel = 0.0;
        if (fd_check) {
            rim::Rng stream = rng.split(s);
            const std::size_t d = sample.dim();
            for (int t = 0; t < 32; ++t) {
                rim::LambdaVector lambda;
                lambda.values.resize(d);
                for (double& v : lambda.values) v = 0.9 * stream.uniform();
                std::size_t i = 1 + stream.next_u64() % d;
                std::size_t j = 1 + stream.next_u64() % d;
                double analytic = rim::partial_derivative(sample, lambda, i, j);
                double numeric = fd_partial(sample, lambda, i, j, 1e-5);
                double scale = std::max(1e-4, std::fabs(numeric));
                max_rel = std::max(max_rel, std::fabs(analytic - numeric) / scale);
            }
            if (max_rel > 1e-4) all_ok = false;
        }

        if (g.format == "json") {
            json rec{{"sample", s},
                     {"fro_A", m.velocity.frobenius_norm()},
                     {"sum_fro_B", sum_b}};
            if (fd_check) rec["fd_max_rel_error"] = max_rel;
            os << rec.dump() << '\n';
        } else {
            os << "sample " << s << " fro_A " << fmt(m.velocity.frobenius_norm())
               << " sum_fro_B " << fmt(sum_b);
            if (fd_check) os << " fd_max_rel_error " << fmt(max_rel);
            os << '\n';
        }
        if (dump_matrices) os << m.velocity.to_text();
    }
    return all_ok ? kExitOk : kExitVerifyFail;
}

void emit_train_report(std::ostream& os, const std::string& format, const std::string& arm,
                       const rim::TrainReport& report) {
    for (std::size_t e = 0; e < report.mean_test_accuracy.size(); ++e) {
        if (format == "json") {
            json rec{{"arm", arm},
                     {"epoch", e},
                     {"test_accuracy_mean", report.mean_test_accuracy[e]},
                     {"test_accuracy_std", report.std_test_accuracy[e]}};
            os << rec.dump() << '\n';
        } else {
            os << arm << " epoch " << e << " acc_mean " << fmt(report.mean_test_accuracy[e])
               << " acc_std " << fmt(report.std_test_accuracy[e]) << '\n';
        }
    }
}

struct TrainFlags {
    std::string in, test, model = "logistic", aug;
    std::size_t k = 1, epochs = 30, batch = 16, seeds = 1;
    double lr = 0.01;
    std::string optimizer = "adam";
    bool redraw = false;
};

rim::TrainConfig make_config(const GlobalOpts& g, const TrainFlags& f) {
    rim::TrainConfig cfg;
    cfg.epochs = f.epochs;
    cfg.batch_size = f.batch;
    cfg.learning_rate = f.lr;
    cfg.optimizer = f.optimizer == "sgd" ? rim::Optimizer::Sgd : rim::Optimizer::Adam;
    cfg.num_seeds = f.seeds;
    cfg.seed = stage_seed(g.seed, kStageInit);
    if (!f.aug.empty()) {
        rim::AugmentationConfig aug;
        aug.spec = rim::LambdaDistributionSpec::parse(f.aug);
        aug.factor = f.k;
        aug.redraw_per_epoch = f.redraw;
        cfg.augmentation = aug;
    }
    return cfg;
}

int cmd_train(const GlobalOpts& g, const TrainFlags& f) {
    rim::Dataset train_set = rim::read_dataset(f.in);
    rim::Dataset test_set = rim::read_dataset(f.test);
    rim::ModelSpec spec = rim::ModelSpec::parse(f.model);
    rim::TrainReport report = rim::train(train_set, test_set, spec, make_config(g, f));

    Output output(g.out);
    emit_train_report(output.stream(), g.format, "train", report);
    return kExitOk;
}

int cmd_compare(const GlobalOpts& g, const TrainFlags& f) {
    if (f.aug.empty()) throw std::runtime_error("compare requires --aug <spec>");
    rim::Dataset train_set = rim::read_dataset(f.in);
    rim::Dataset test_set = rim::read_dataset(f.test);
    rim::ModelSpec spec = rim::ModelSpec::parse(f.model);
    rim::TrainConfig cfg = make_config(g, f);
    rim::CompareReport report =
        rim::compare_experiment(train_set, test_set, spec, cfg, *cfg.augmentation);

    Output output(g.out);
    std::ostream& os = output.stream();
    emit_train_report(os, g.format, "plain", report.plain);
    emit_train_report(os, g.format, "augmented", report.augmented);
    if (g.format == "json") {
        os << json{{"accuracy_delta", report.accuracy_delta}}.dump() << '\n';
    } else {
        os << "accuracy_delta " << fmt(report.accuracy_delta) << '\n';
    }
    return kExitOk;
}

int cmd_variance(const GlobalOpts& g, std::size_t dim, std::size_t n, std::size_t reps,
                 const std::string& dist, std::size_t mc_lambda) {
    rim::VarianceConfig cfg;
    cfg.dim = dim;
    cfg.samples = n;
    cfg.replications = reps;
    cfg.spec = rim::LambdaDistributionSpec::parse(dist);
    cfg.mc_lambda = mc_lambda;
    cfg.seed = stage_seed(g.seed, kStageData);
    rim::VarianceReport report = rim::variance_experiment(cfg);

    Output output(g.out);
    std::ostream& os = output.stream();
    if (g.format == "json") {
        json rec{{"trace_sigma0", report.trace_sigma0},
                 {"trace_sigma0_se", report.trace_sigma0_se},
                 {"trace_sigma_aug", report.trace_sigma_aug},
                 {"trace_sigma_aug_se", report.trace_sigma_aug_se},
                 {"relative_efficiency", report.relative_efficiency},
                 {"relative_efficiency_se", report.relative_efficiency_se},
                 {"trace_sigma0_analytic", report.trace_sigma0_analytic},
                 {"replications", report.replications}};
        os << rec.dump() << '\n';
    } else {
        os << "trace_sigma0 " << fmt(report.trace_sigma0) << " se "
           << fmt(report.trace_sigma0_se) << '\n'
           << "trace_sigma_aug " << fmt(report.trace_sigma_aug) << " se "
           << fmt(report.trace_sigma_aug_se) << '\n'
           << "relative_efficiency " << fmt(report.relative_efficiency) << " se "
           << fmt(report.relative_efficiency_se) << '\n'
           << "trace_sigma0_analytic " << fmt(report.trace_sigma0_analytic) << '\n';
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Recursive interpolation time-series augmentation toolkit"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--seed", g.seed, "Master seed; per-stage seeds are derived from it");
    app.add_option("--out", g.out, "Write reports or datasets to this file");
    app.add_option("--format", g.format, "Report format")
        ->check(CLI::IsMember({"text", "json"}));

    // generate
    auto* gen = app.add_subcommand("generate", "Generate a synthetic ODE dataset");
    int task = 1;
    std::size_t n_per_class = 25;
    rim::OdeSpec ode;
    gen->add_option("--task", task, "Task number")->check(CLI::IsMember({1, 2}));
    gen->add_option("--n", n_per_class, "Series per class");
    gen->add_option("--length", ode.length, "Points per series");
    gen->add_option("--step", ode.step, "Integration step");
    gen->add_option("--noise", ode.noise_sigma, "Observation noise std");
    gen->add_option("--y0-min", ode.y0_min, "Initial value lower bound");
    gen->add_option("--y0-max", ode.y0_max, "Initial value upper bound");

    // augment
    auto* aug = app.add_subcommand("augment", "Augment a dataset file");
    std::string aug_in, aug_dist = "uniform";
    std::size_t aug_k = 1;
    aug->add_option("--in", aug_in, "Input dataset")->required();
    aug->add_option("--dist", aug_dist, "Lambda distribution (uniform|beta:a,b|constant:c)");
    aug->add_option("--k", aug_k, "Augmented copies per sample");

    // bounds
    auto* bnd = app.add_subcommand("bounds", "Verify deviation and distance bounds");
    std::string bnd_in, bnd_dist = "uniform";
    std::size_t bnd_trials = 100000;
    double min_pass_rate = 1.0;
    bnd->add_option("--in", bnd_in, "Input dataset")->required();
    bnd->add_option("--dist", bnd_dist, "Lambda distribution");
    bnd->add_option("--trials", bnd_trials, "Monte Carlo trials per sample");
    bnd->add_option("--min-pass-rate", min_pass_rate, "Exit 2 below this pass rate");

    // derivs
    auto* der = app.add_subcommand("derivs", "Structure matrices and derivative checks");
    std::string der_in;
    bool fd_check = false, dump_matrices = false;
    der->add_option("--in", der_in, "Input dataset")->required();
    der->add_flag("--fd-check", fd_check, "Compare analytic derivatives to finite differences");
    der->add_flag("--matrices", dump_matrices, "Print the velocity matrix per sample");

    // train / compare
    TrainFlags tf;
    auto add_train_flags = [&](CLI::App* cmd, bool aug_required) {
        cmd->add_option("--in", tf.in, "Training dataset")->required();
        cmd->add_option("--test", tf.test, "Test dataset")->required();
        cmd->add_option("--model", tf.model, "Model spec (logistic|mlp:h,..|conv1d:k,f)");
        auto* a = cmd->add_option("--aug", tf.aug, "Lambda distribution for augmentation");
        if (aug_required) a->required();
        cmd->add_option("--k", tf.k, "Augmented copies per sample");
        cmd->add_option("--epochs", tf.epochs, "Training epochs");
        cmd->add_option("--batch", tf.batch, "Batch size");
        cmd->add_option("--lr", tf.lr, "Learning rate");
        cmd->add_option("--optimizer", tf.optimizer, "Optimizer")
            ->check(CLI::IsMember({"sgd", "adam"}));
        cmd->add_option("--seeds", tf.seeds, "Number of repeated runs");
        cmd->add_flag("--redraw", tf.redraw, "Redraw the augmented set every epoch");
    };
    auto* trn = app.add_subcommand("train", "Train a classifier");
    add_train_flags(trn, false);
    auto* cmp = app.add_subcommand("compare", "Augmented vs plain training arms");
    add_train_flags(cmp, true);

    // variance
    auto* var = app.add_subcommand("variance", "Location-estimation variance experiment");
    std::size_t v_dim = 8, v_n = 50, v_reps = 2000, v_mc = 64;
    std::string v_dist = "uniform";
    var->add_option("--dim", v_dim, "Series dimension d");
    var->add_option("--n", v_n, "Samples per replication");
    var->add_option("--reps", v_reps, "Replications");
    var->add_option("--dist", v_dist, "Lambda distribution");
    var->add_option("--mc-lambda", v_mc, "Lambda draws per averaged-loss evaluation");

    // Global options (--seed/--out/--format) may appear after the subcommand.
    for (CLI::App* sc : app.get_subcommands([](const CLI::App*) { return true; }))
        sc->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_generate(g, task, n_per_class, ode);
        if (aug->parsed()) return cmd_augment(g, aug_in, aug_dist, aug_k);
        if (bnd->parsed()) return cmd_bounds(g, bnd_in, bnd_dist, bnd_trials, min_pass_rate);
        if (der->parsed()) return cmd_derivs(g, der_in, fd_check, dump_matrices);
        if (trn->parsed()) return cmd_train(g, tf);
        if (cmp->parsed()) return cmd_compare(g, tf);
        if (var->parsed()) return cmd_variance(g, v_dim, v_n, v_reps, v_dist, v_mc);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
