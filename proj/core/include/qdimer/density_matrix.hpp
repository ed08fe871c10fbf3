#pragma once

#include "qdimer/numerics.hpp"

#include <array>
#include <span>

namespace qdimer {

enum class Basis { computational, eigen };

// Tolerances for physical-state checks.
struct StateTolerances {
    double hermiticity = 1e-10;
    double trace = 1e-10;
    double positivity = 1e-9;  // eigenvalues >= -positivity
};

// 4x4 two-qubit density matrix with an explicit basis tag. Computational
// basis order is |00>, |01>, |10>, |11>. Construction does not validate;
// validate() applies the checks so integrator output can be verified
// rather than silently rescaled.
class DensityMatrix {
public:
    DensityMatrix(numerics::ComplexMatrix m, Basis basis);

    static DensityMatrix from_ket(std::span<const numerics::Complex, 4> amplitudes, Basis basis);
    static DensityMatrix from_populations(std::span<const double, 4> populations, Basis basis);

    const numerics::ComplexMatrix& matrix() const { return m_; }
    Basis basis() const { return basis_; }

    double population(int k) const { return m_(k, k).real(); }
    std::array<double, 4> populations() const;

    double trace_defect() const;  // |tr - 1|
    double purity() const;        // Re tr(rho^2)

    // Throws ValidationError when Hermiticity, unit trace, or positivity
    // fail their tolerances.
    void validate(const StateTolerances& tol = {}) const;

private:
    numerics::ComplexMatrix m_;
    Basis basis_;
};

} // namespace qdimer
