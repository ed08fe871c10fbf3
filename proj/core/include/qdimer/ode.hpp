#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace qdimer::ode {

using Complex = std::complex<double>;

// Right-hand side of y' = f(t, y); writes the derivative into dydt.
using Rhs = std::function<void(double t, std::span<const Complex> y, std::span<Complex> dydt)>;

// Called once per requested sample time, in order.
using Sink = std::function<void(std::size_t index, double t, std::span<const Complex> y)>;

struct Options {
    double rtol = 1e-10;
    double atol = 1e-12;
    double max_step = 0.0;       // 0 = unlimited
    long max_steps = 50'000'000;
};

struct Stats {
    long accepted = 0;
    long rejected = 0;
    long rhs_evaluations = 0;
};

// Adaptive Dormand-Prince 5(4) embedded pair with fourth-order dense
// output. Integrates from t0 through the last entry of sample_times
// (strictly increasing, all >= t0), emitting interpolated states at each
// sample. Throws IntegrationError on step-size underflow or step budget
// exhaustion.
Stats integrate_dopri5(const Rhs& rhs, std::span<const Complex> y0, double t0,
                       std::span<const double> sample_times, const Sink& sink,
                       const Options& options = {});

} // namespace qdimer::ode
