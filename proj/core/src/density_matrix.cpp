#include "qdimer/density_matrix.hpp"

#include "qdimer/errors.hpp"

#include <cmath>
#include <string>

namespace qdimer {

DensityMatrix::DensityMatrix(numerics::ComplexMatrix m, Basis basis)
    : m_(std::move(m)), basis_(basis) {
    if (m_.dim() != 4) throw ContractViolation("DensityMatrix: dimension must be 4");
}

DensityMatrix DensityMatrix::from_ket(std::span<const numerics::Complex, 4> amplitudes,
                                      Basis basis) {
    numerics::ComplexMatrix m(4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            m(i, j) = amplitudes[static_cast<std::size_t>(i)] *
                      std::conj(amplitudes[static_cast<std::size_t>(j)]);
    return {std::move(m), basis};
}

DensityMatrix DensityMatrix::from_populations(std::span<const double, 4> populations,
                                              Basis basis) {
    numerics::ComplexMatrix m(4);
    for (int i = 0; i < 4; ++i) m(i, i) = populations[static_cast<std::size_t>(i)];
    return {std::move(m), basis};
}

std::array<double, 4> DensityMatrix::populations() const {
    return {m_(0, 0).real(), m_(1, 1).real(), m_(2, 2).real(), m_(3, 3).real()};
}

double DensityMatrix::trace_defect() const { return std::abs(m_.trace() - 1.0); }

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

void DensityMatrix::validate(const StateTolerances& tol) const {
    if (!m_.all_finite()) throw ValidationError("density matrix has non-finite entries");
    const double herm = m_.hermiticity_defect();
    if (herm > tol.hermiticity)
        throw ValidationError("density matrix not Hermitian (defect " + std::to_string(herm) + ")");
    const double tr = trace_defect();
    if (tr > tol.trace)
        throw ValidationError("density matrix trace differs from 1 by " + std::to_string(tr));
    const auto eig = numerics::hermitian_eigen(m_, 10.0 * tol.hermiticity);
    if (eig.values.front() < -tol.positivity)
        throw ValidationError("density matrix has negative eigenvalue " +
                              std::to_string(eig.values.front()));
}

} // namespace qdimer
