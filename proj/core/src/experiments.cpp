#include "qdimer/experiments.hpp"

#include "qdimer/entanglement.hpp"
#include "qdimer/errors.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

namespace qdimer::experiments {

using numerics::Complex;

namespace {

void check_axis(std::span<const double> values, const char* name) {
    if (values.empty()) throw ValidationError(std::string(name) + " grid is empty");
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] <= values[i - 1])
            throw ValidationError(std::string(name) + " grid is not strictly increasing");
}

// Index-ordered concurrent map: tasks pull indices from a counter and
// write into preassigned slots, so results do not depend on scheduling.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body) {
    if (count == 0) return;
    unsigned n = threads == 0 ? std::thread::hardware_concurrency() : threads;
    n = std::max(1u, std::min<unsigned>(n, static_cast<unsigned>(count)));

    if (n == 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace

DensityMatrix make_initial_state(const InitialStateSpec& spec, const model::EigenSystem& es) {
    std::array<Complex, 4> ket{};
    switch (spec.family) {
        case StateFamily::onebit: {
            if (spec.weight < 0.0 || spec.weight > 1.0)
                throw ValidationError("state weight p must lie in [0, 1]");
            ket[1] = std::sqrt(spec.weight);
            ket[2] = std::sqrt(1.0 - spec.weight);
            break;
        }
        case StateFamily::twobit: {
            if (spec.weight < 0.0 || spec.weight > 1.0)
                throw ValidationError("state weight p must lie in [0, 1]");
            ket[0] = std::sqrt(spec.weight);
            ket[3] = std::sqrt(1.0 - spec.weight);
            break;
        }
        case StateFamily::basis: {
            if (spec.basis_index < 0 || spec.basis_index > 3)
                throw ValidationError("basis index out of range");
            ket[static_cast<std::size_t>(spec.basis_index)] = 1.0;
            break;
        }
        case StateFamily::eigen: {
            if (spec.level < 0 || spec.level > 3)
                throw ValidationError("eigenstate label out of range");
            ket = es.kets[static_cast<std::size_t>(spec.level)];
            break;
        }
        case StateFamily::ket: {
            double norm2 = 0.0;
            for (const Complex& c : spec.amplitudes) norm2 += std::norm(c);
            if (norm2 < 1e-24) throw ValidationError("ket amplitudes have zero norm");
            const double inv = 1.0 / std::sqrt(norm2);
            for (std::size_t i = 0; i < 4; ++i) ket[i] = spec.amplitudes[i] * inv;
            break;
        }
    }
    return DensityMatrix::from_ket(ket, Basis::computational);
}

SweepGrid sweep_time_weight(StateFamily family, std::span<const double> weights,
                            std::span<const double> times_ns, const model::SystemParams& p,
                            const SweepOptions& options) {
    if (family != StateFamily::onebit && family != StateFamily::twobit)
        throw ValidationError("time-weight sweep requires the onebit or twobit family");
    check_axis(weights, "weight");
    check_axis(times_ns, "time");
    if (times_ns.front() < 0.0) throw ValidationError("time grid starts before 0");

    const dynamics::Liouvillian liouv = dynamics::build_liouvillian(p);

    SweepGrid grid;
    grid.axes = {{"p", "", {weights.begin(), weights.end()}},
                 {"t", "ns", {times_ns.begin(), times_ns.end()}}};
    grid.params = p;
    grid.initial_family = family == StateFamily::onebit ? "onebit" : "twobit";
    grid.values.resize(weights.size() * times_ns.size());

    parallel_for(weights.size(), options.threads, [&](std::size_t i) {
        InitialStateSpec spec;
        spec.family = family;
        spec.weight = weights[i];
        const DensityMatrix rho0 = make_initial_state(spec, liouv.eigen);
        const dynamics::Trajectory tr = dynamics::evolve(liouv, rho0, times_ns, options.evolve);
        for (std::size_t j = 0; j < times_ns.size(); ++j)
            grid.values[i * times_ns.size() + j] = tr.concurrence[j];
    });
    return grid;
}

SweepGrid sweep_temperature_coupling(std::span<const double> temps_mk,
                                     std::span<const double> lambdas_rad_ns,
                                     const model::SystemParams& p,
                                     const SweepOptions& options) {
    check_axis(temps_mk, "temperature");
    check_axis(lambdas_rad_ns, "coupling");
    if (temps_mk.front() < 0.0) throw ValidationError("temperatures must be non-negative");

    SweepGrid grid;
    grid.axes = {{"T", "mK", {temps_mk.begin(), temps_mk.end()}},
                 {"lambda", "rad_ns", {lambdas_rad_ns.begin(), lambdas_rad_ns.end()}}};
    grid.params = p;
    grid.values.resize(temps_mk.size() * lambdas_rad_ns.size());

    parallel_for(temps_mk.size(), options.threads, [&](std::size_t i) {
        for (std::size_t j = 0; j < lambdas_rad_ns.size(); ++j) {
            model::SystemParams q = p;
            q.t1_mk = temps_mk[i];
            q.t2_mk = temps_mk[i];
            q.lambda = lambdas_rad_ns[j];
            grid.values[i * lambdas_rad_ns.size() + j] = entanglement::stationary_concurrence(q);
        }
    });
    return grid;
}

SweepGrid sweep_two_temperatures(std::span<const double> t1_mk, std::span<const double> t2_mk,
                                 const model::SystemParams& p, const SweepOptions& options) {
    check_axis(t1_mk, "T1");
    check_axis(t2_mk, "T2");
    if (t1_mk.front() < 0.0 || t2_mk.front() < 0.0)
        throw ValidationError("temperatures must be non-negative");

    SweepGrid grid;
    grid.axes = {{"T1", "mK", {t1_mk.begin(), t1_mk.end()}},
                 {"T2", "mK", {t2_mk.begin(), t2_mk.end()}}};
    grid.params = p;
    grid.values.resize(t1_mk.size() * t2_mk.size());

    parallel_for(t1_mk.size(), options.threads, [&](std::size_t i) {
        for (std::size_t j = 0; j < t2_mk.size(); ++j) {
            model::SystemParams q = p;
            q.t1_mk = t1_mk[i];
            q.t2_mk = t2_mk[j];
            grid.values[i * t2_mk.size() + j] = entanglement::stationary_concurrence(q);
        }
    });
    return grid;
}

double default_time_horizon_ns(const model::SystemParams& p) {
    const model::EigenSystem es = model::eigensystem(p);
    const bath::RateSet r = bath::rate_set(p, es);
    const double pair_lo = r.decay_lo + r.excite_lo;
    if (pair_lo <= 0.0)
        throw ValidationError("cannot derive a time horizon for undamped dynamics; set one explicitly");
    return 10.0 / pair_lo;
}

} // namespace qdimer::experiments
