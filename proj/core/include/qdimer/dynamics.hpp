#pragma once

#include "qdimer/bath.hpp"
#include "qdimer/density_matrix.hpp"
#include "qdimer/model.hpp"

#include <array>
#include <span>
#include <string>
#include <vector>

namespace qdimer::dynamics {

// Secular Markovian generator in the energy eigenbasis. The 16x16 matrix
// acts on column-stacked density matrices (numerics::vectorize); the 4x4
// population rate matrix acts on the diagonal alone, which decouples from
// the coherences by the secular structure.
struct Liouvillian {
    numerics::ComplexMatrix generator;                      // 16x16
    std::array<std::array<double, 4>, 4> population_rates{};  // row k: d/dt pop_k
    bath::RateSet rates;
    model::EigenSystem eigen;
    model::SystemParams params;
    bool secular_warning = false;  // channel rates not well separated from Bohr gaps
    std::string secular_note;
};

// Assembles the generator from the eigenoperators of the qubit-reservoir
// couplings: downward channels weighted by gamma, upward by gamma_bar.
Liouvillian build_liouvillian(const model::SystemParams& p);

struct Trajectory {
    std::vector<double> times_ns;
    std::vector<DensityMatrix> states;                // computational basis
    std::vector<std::array<double, 4>> populations;   // eigenbasis diagonal
    std::vector<double> concurrence;

    // Applies the full physical-state checks to every sample.
    void validate(const StateTolerances& tol = {}) const;
};

struct EvolveOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double trace_tol = 1e-8;  // check-only; never rescaled
};

// Adaptive propagation of an arbitrary initial state, sampled at the
// requested times (ns, strictly increasing, >= 0, state given at t = 0).
Trajectory evolve(const Liouvillian& liouv, const DensityMatrix& rho0,
                  std::span<const double> times_ns, const EvolveOptions& options = {});

// Closed-form population propagator: stationary part plus three relaxation
// modes with rates (lo+hi+both excitations), (hi pair), (lo pair).
std::array<double, 4> propagate_populations_analytic(const bath::RateSet& r,
                                                     const std::array<double, 4>& pops0,
                                                     double t_ns);

// t -> infinity limit of the propagator above.
std::array<double, 4> stationary_populations(const bath::RateSet& r);

// Stationary state: diagonal in the eigenbasis with the populations above,
// verified to be annihilated by the generator.
DensityMatrix steady_state(const Liouvillian& liouv);

} // namespace qdimer::dynamics
