#include "qdimer/ode.hpp"

#include "qdimer/errors.hpp"

#include <algorithm>
#include <cmath>

namespace qdimer::ode {

namespace {

constexpr double kUround = 2.220446049250313e-16;

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;

// Error weights (5th order minus embedded 4th order solution).
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

// Dense-output weights.
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

using Vec = std::vector<Complex>;

double error_norm(const Vec& err, const Vec& y0, const Vec& y1, double atol, double rtol) {
    double acc = 0.0;
    for (std::size_t i = 0; i < err.size(); ++i) {
        const double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        const double q = std::abs(err[i]) / sc;
        acc += q * q;
    }
    return std::sqrt(acc / static_cast<double>(err.size()));
}

double scaled_norm(const Vec& v, const Vec& ref, double atol, double rtol) {
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double sc = atol + rtol * std::abs(ref[i]);
        const double q = std::abs(v[i]) / sc;
        acc += q * q;
    }
    return std::sqrt(acc / static_cast<double>(v.size()));
}

} // namespace

Stats integrate_dopri5(const Rhs& rhs, std::span<const Complex> y0_in, double t0,
                       std::span<const double> sample_times, const Sink& sink,
                       const Options& options) {
    Stats stats;
    const std::size_t n = y0_in.size();
    if (n == 0) throw ContractViolation("integrate_dopri5: empty state");
    for (std::size_t i = 0; i < sample_times.size(); ++i) {
        if (sample_times[i] < t0)
            throw ContractViolation("integrate_dopri5: sample time before t0");
        if (i > 0 && sample_times[i] <= sample_times[i - 1])
            throw ContractViolation("integrate_dopri5: sample times not strictly increasing");
    }
    if (sample_times.empty()) return stats;

    Vec y(y0_in.begin(), y0_in.end());
    double t = t0;
    std::size_t next = 0;
    while (next < sample_times.size() && sample_times[next] <= t0) {
        sink(next, t0, y);
        ++next;
    }
    if (next == sample_times.size()) return stats;
    const double t_end = sample_times.back();

    Vec k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
    Vec ytmp(n), y1(n), err(n), ycont(n);

    rhs(t, y, k1);
    ++stats.rhs_evaluations;

    // Initial step size heuristic.
    const double dn0 = scaled_norm(y, y, options.atol, options.rtol);
    const double dn1 = scaled_norm(k1, y, options.atol, options.rtol);
    double h = (dn0 < 1e-10 || dn1 < 1e-10) ? 1e-6 : 0.01 * dn0 / dn1;
    h = std::min(h, t_end - t);
    {
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * k1[i];
        rhs(t + h, ytmp, k2);
        ++stats.rhs_evaluations;
        for (std::size_t i = 0; i < n; ++i) err[i] = k2[i] - k1[i];
        const double dn2 = scaled_norm(err, y, options.atol, options.rtol) / h;
        double h1;
        if (std::max(dn1, dn2) <= 1e-15)
            h1 = std::max(1e-6, h * 1e-3);
        else
            h1 = std::pow(0.01 / std::max(dn1, dn2), 0.2);
        h = std::min({100.0 * h, h1, t_end - t});
    }
    if (options.max_step > 0.0) h = std::min(h, options.max_step);

    bool last_rejected = false;
    while (t < t_end) {
        if (stats.accepted + stats.rejected >= options.max_steps)
            throw IntegrationError("integrate_dopri5: step budget exhausted");
        if (h <= std::abs(t) * kUround * 4.0)
            throw IntegrationError("integrate_dopri5: step size underflow (stiff problem?)");
        h = std::min(h, t_end - t);

        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a21 * k1[i]);
        rhs(t + c2 * h, ytmp, k2);
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(t + c3 * h, ytmp, k3);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(t + c4 * h, ytmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(t + c5 * h, ytmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                  a65 * k5[i]);
        rhs(t + h, ytmp, k6);
        for (std::size_t i = 0; i < n; ++i)
            y1[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] +
                                a76 * k6[i]);
        rhs(t + h, y1, k7);
        stats.rhs_evaluations += 6;

        for (std::size_t i = 0; i < n; ++i)
            err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                          e7 * k7[i]);
        const double errn = error_norm(err, y, y1, options.atol, options.rtol);

        if (errn <= 1.0) {
            // Emit dense output for samples inside (t, t+h].
            const bool have_samples =
                next < sample_times.size() && sample_times[next] <= t + h;
            if (have_samples) {
                Vec rc2(n), rc3(n), rc4(n), rc5(n);
                for (std::size_t i = 0; i < n; ++i) {
                    const Complex dy = y1[i] - y[i];
                    rc2[i] = dy;
                    rc3[i] = h * k1[i] - dy;
                    rc4[i] = dy - h * k7[i] - rc3[i];
                    rc5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                                  d6 * k6[i] + d7 * k7[i]);
                }
                while (next < sample_times.size() && sample_times[next] <= t + h) {
                    const double ts = sample_times[next];
                    const double theta = (ts - t) / h;
                    for (std::size_t i = 0; i < n; ++i)
                        ycont[i] = y[i] + theta * (rc2[i] + (1.0 - theta) *
                                   (rc3[i] + theta * (rc4[i] + (1.0 - theta) * rc5[i])));
                    sink(next, ts, ycont);
                    ++next;
                }
            }

            t += h;
            std::swap(y, y1);
            std::swap(k1, k7);  // FSAL
            ++stats.accepted;

            double fac = 0.9 * std::pow(std::max(errn, 1e-30), -0.2);
            fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 5.0);
            h *= fac;
            if (options.max_step > 0.0) h = std::min(h, options.max_step);
            last_rejected = false;
        } else {
            const double fac = std::clamp(0.9 * std::pow(errn, -0.2), 0.2, 1.0);
            h *= fac;
            ++stats.rejected;
            last_rejected = true;
        }
    }
    return stats;
}

} // namespace qdimer::ode
