#include "qdimer/entanglement.hpp"

#include "qdimer/dynamics.hpp"
#include "qdimer/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qdimer::entanglement {

using numerics::Complex;
using numerics::ComplexMatrix;

namespace {

// Spin-flipped matrix (sy x sy) rho* (sy x sy): index reversal with the
// antidiagonal sign pattern (-1, 1, 1, -1).
ComplexMatrix spin_flip(const ComplexMatrix& rho) {
    static constexpr double sign[4] = {-1.0, 1.0, 1.0, -1.0};
    ComplexMatrix out(4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            out(i, j) = sign[i] * sign[j] * std::conj(rho(3 - i, 3 - j));
    return out;
}

} // namespace

ConcurrenceResult concurrence(const DensityMatrix& rho) {
    if (rho.basis() != Basis::computational)
        throw ContractViolation("concurrence: state must be in the computational basis");

    const ComplexMatrix product = rho.matrix() * spin_flip(rho.matrix());
    const std::vector<Complex> spectrum = numerics::general_eigenvalues(product);

    std::array<double, 4> mu{};
    for (std::size_t k = 0; k < 4; ++k) {
        const Complex z = spectrum[k];
        // The product has real non-negative spectrum in exact arithmetic.
        if (std::abs(z.imag()) > 1e-9)
            throw NumericalError("concurrence: complex eigenvalue of rho rho~ (imag " +
                                 std::to_string(z.imag()) + ")");
        double v = z.real();
        if (v < -1e-8)
            throw NumericalError("concurrence: negative eigenvalue of rho rho~ (" +
                                 std::to_string(v) + ")");
        // Zero out the round-off floor: the square root would otherwise
        // inflate eigenvalue noise of order eps into ~1e-8 contributions.
        mu[k] = v < 1e-13 ? 0.0 : v;
    }
    std::sort(mu.begin(), mu.end(), std::greater<>());

    ConcurrenceResult res;
    for (std::size_t k = 0; k < 4; ++k) res.sqrt_eigenvalues[k] = std::sqrt(mu[k]);
    const double c = res.sqrt_eigenvalues[0] - res.sqrt_eigenvalues[1] -
                     res.sqrt_eigenvalues[2] - res.sqrt_eigenvalues[3];
    res.value = std::clamp(c, 0.0, 1.0);
    return res;
}

double concurrence_pure(std::span<const Complex, 4> ket) {
    double norm2 = 0.0;
    for (const Complex& c : ket) norm2 += std::norm(c);
    if (std::abs(norm2 - 1.0) > 1e-10)
        throw ContractViolation("concurrence_pure: ket is not normalized");
    return 2.0 * std::abs(ket[0] * ket[3] - ket[1] * ket[2]);
}

double stationary_concurrence(const model::SystemParams& p) {
    const dynamics::Liouvillian liouv = dynamics::build_liouvillian(p);
    const DensityMatrix rho = dynamics::steady_state(liouv);
    return concurrence(model::to_computational(rho, liouv.eigen)).value;
}

} // namespace qdimer::entanglement
