#include "rim/synthgen.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rim {

void OdeSpec::validate() const {
    if (!(step > 0.0)) throw std::invalid_argument("ODE step must be positive");
    if (length < 2) throw std::invalid_argument("ODE length must be at least 2");
    if (noise_sigma < 0.0) throw std::invalid_argument("noise sigma must be non-negative");
    if (!(y0_min <= y0_max)) throw std::invalid_argument("empty y0 range");
}

double ode_rhs(OdeClass cls, double y) {
    switch (cls) {
        case OdeClass::Task1Class1: return -0.5 * y * y + std::exp(-y);
        case OdeClass::Task1Class2: return -0.3 * y * y + 1.5 * std::exp(-y);
        case OdeClass::Task2Class1: return 0.6 + 0.5 * std::sin(y);
        case OdeClass::Task2Class2: return 1.0 + std::cos(y);
    }
    return 0.0;
}

OdeClass ode_class(int task, int cls) {
    if (task == 1 && cls == 1) return OdeClass::Task1Class1;
    if (task == 1 && cls == 2) return OdeClass::Task1Class2;
    if (task == 2 && cls == 1) return OdeClass::Task2Class1;
    if (task == 2 && cls == 2) return OdeClass::Task2Class2;
    throw std::invalid_argument("task must be 1 or 2, class 1 or 2");
}

std::vector<double> integrate_ode(const OdeSpec& spec, double y0, Rng& rng) {
    spec.validate();
    std::vector<double> out(spec.length);
    double y = y0;
    out[0] = y;
    const double h = spec.step;
    for (std::size_t i = 1; i < spec.length; ++i) {
        double k1 = ode_rhs(spec.rhs, y);
        double k2 = ode_rhs(spec.rhs, y + 0.5 * h * k1);
        double k3 = ode_rhs(spec.rhs, y + 0.5 * h * k2);
        double k4 = ode_rhs(spec.rhs, y + h * k3);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!std::isfinite(y))
            throw std::runtime_error("ODE state became non-finite at step " + std::to_string(i));
        out[i] = y;
    }
    if (spec.noise_sigma > 0.0)
        for (double& v : out) v += rng.normal(0.0, spec.noise_sigma);
    return out;
}

Dataset generate_dataset(int task, std::size_t n_per_class, const OdeSpec& overrides,
                         std::uint64_t seed) {
    if (n_per_class < 1) throw std::invalid_argument("n_per_class must be at least 1");
    ode_class(task, 1);  // validates task
    overrides.validate();

    Dataset dataset;
    Rng root(seed);
    for (int cls = 1; cls <= 2; ++cls) {
        OdeSpec spec = overrides;
        spec.rhs = ode_class(task, cls);
        for (std::size_t i = 0; i < n_per_class; ++i) {
            Rng stream = root.split(static_cast<std::uint64_t>(cls - 1) * n_per_class + i);
            double y0 = stream.uniform(spec.y0_min, spec.y0_max);
            TimeSeriesSample s;
            s.features = integrate_ode(spec, y0, stream);
            s.label = cls - 1;
            dataset.samples.push_back(std::move(s));
        }
    }
    return dataset;
}

}  // namespace rim
