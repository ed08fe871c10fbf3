#pragma once

#include "qdimer/dynamics.hpp"

#include <array>
#include <span>
#include <string>
#include <vector>

namespace qdimer::experiments {

struct Axis {
    std::string name;
    std::string unit;  // empty when dimensionless
    std::vector<double> values;
};

// Scalar field sampled over a rectangular grid; values in row-major order
// with the first axis outermost. Metadata carries the parameter template
// only (nothing time- or host-dependent, so output stays reproducible).
struct SweepGrid {
    std::vector<Axis> axes;
    std::vector<double> values;
    model::SystemParams params;
    std::string initial_family;  // time sweeps only

    std::size_t size() const { return values.size(); }
    double at(std::size_t outer, std::size_t inner) const {
        return values[outer * axes[1].values.size() + inner];
    }
};

enum class StateFamily { onebit, twobit, basis, eigen, ket };

struct InitialStateSpec {
    StateFamily family = StateFamily::onebit;
    double weight = 0.5;    // p for onebit / twobit
    int basis_index = 0;    // 0..3 over |00>,|01>,|10>,|11>
    int level = 0;          // 0..3 over eigenstates a..d
    std::array<numerics::Complex, 4> amplitudes{};  // normalized, family ket
};

// Builds the density matrix of the requested pure state in the
// computational basis (eigenstates are expanded through es).
DensityMatrix make_initial_state(const InitialStateSpec& spec, const model::EigenSystem& es);

struct SweepOptions {
    unsigned threads = 0;  // 0 = hardware concurrency
    dynamics::EvolveOptions evolve;
};

// Concurrence over (weight, time) for the one- or two-excitation
// superposition families; one propagation per weight value.
SweepGrid sweep_time_weight(StateFamily family, std::span<const double> weights,
                            std::span<const double> times_ns, const model::SystemParams& p,
                            const SweepOptions& options = {});

// Stationary concurrence over (T, lambda) at T1 = T2 = T; closed form, no
// time integration.
SweepGrid sweep_temperature_coupling(std::span<const double> temps_mk,
                                     std::span<const double> lambdas_rad_ns,
                                     const model::SystemParams& p,
                                     const SweepOptions& options = {});

// Stationary concurrence over (T1, T2).
SweepGrid sweep_two_temperatures(std::span<const double> t1_mk, std::span<const double> t2_mk,
                                 const model::SystemParams& p,
                                 const SweepOptions& options = {});

// Default time horizon 10 / (decay_lo + excite_lo): long enough for the
// slow channel to reach its stationary plateau.
double default_time_horizon_ns(const model::SystemParams& p);

} // namespace qdimer::experiments
