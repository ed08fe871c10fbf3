#pragma once

#include "qdimer/density_matrix.hpp"
#include "qdimer/model.hpp"

#include <array>
#include <span>

namespace qdimer::entanglement {

struct ConcurrenceResult {
    double value = 0.0;                        // max(0, l1 - l2 - l3 - l4), in [0, 1]
    std::array<double, 4> sqrt_eigenvalues{};  // descending, >= 0
};

// Wootters concurrence of a two-qubit state given in the computational
// basis: square roots of the spectrum of rho (sy x sy) rho* (sy x sy).
ConcurrenceResult concurrence(const DensityMatrix& rho);

// Pure-state shortcut 2 |c00 c11 - c01 c10| for a normalized ket.
double concurrence_pure(std::span<const numerics::Complex, 4> ket);

// Concurrence of the unique stationary state; independent of any initial
// state by construction (closed-form populations, no time marching).
double stationary_concurrence(const model::SystemParams& p);

} // namespace qdimer::entanglement
