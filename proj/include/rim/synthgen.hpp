#ifndef RIM_SYNTHGEN_HPP
#define RIM_SYNTHGEN_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rim/rng.hpp"
#include "rim/sample.hpp"

namespace rim {

/// The four scalar ODE right-hand sides used by the two synthetic tasks.
enum class OdeClass {
    Task1Class1,  // dy/dt = -0.5 y^2 + exp(-y)
    Task1Class2,  // dy/dt = -0.3 y^2 + 1.5 exp(-y)
    Task2Class1,  // dy/dt = 0.6 + 0.5 sin(y)
    Task2Class2,  // dy/dt = 1 + cos(y)
};

struct OdeSpec {
    OdeClass rhs = OdeClass::Task1Class1;
    double y0_min = 0.0;
    double y0_max = 1.0;
    double step = 0.1;
    std::size_t length = 100;
    double noise_sigma = 0.05;

    void validate() const;
};

double ode_rhs(OdeClass cls, double y);

OdeClass ode_class(int task, int cls);

/// Fixed-step RK4 trajectory of `length` points starting at y0, with i.i.d.
/// Gaussian observation noise of std noise_sigma added afterwards.
std::vector<double> integrate_ode(const OdeSpec& spec, double y0, Rng& rng);

/// Balanced two-class dataset for task 1 or 2; labels 0/1, one random y0
/// per series, reproducible by seed.
Dataset generate_dataset(int task, std::size_t n_per_class, const OdeSpec& overrides,
                         std::uint64_t seed);

}  // namespace rim

#endif  // RIM_SYNTHGEN_HPP
