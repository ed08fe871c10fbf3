#include "qdimer/model.hpp"

#include "qdimer/errors.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace qdimer::model {

double UnitSystem::thermal_exponent(double omega_rad_ns, double t_mk) {
    if (omega_rad_ns <= 0.0)
        throw ContractViolation("thermal_exponent: frequency must be positive");
    if (t_mk < 0.0) throw ContractViolation("thermal_exponent: negative temperature");
    if (t_mk == 0.0) return std::numeric_limits<double>::infinity();
    return theta_mk_ns * omega_rad_ns / t_mk;
}

void SystemParams::validate() const {
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(omega1) || !finite(omega2) || !finite(lambda) || !finite(alpha1) ||
        !finite(alpha2) || !finite(t1_mk) || !finite(t2_mk))
        throw ValidationError("system parameters must be finite");
    if (omega1 <= 0.0 || omega2 <= 0.0)
        throw ValidationError("qubit frequencies must be positive");
    if (alpha1 < 0.0 || alpha2 < 0.0)
        throw ValidationError("reservoir coupling strengths must be non-negative");
    if (t1_mk < 0.0 || t2_mk < 0.0)
        throw ValidationError("reservoir temperatures must be non-negative");
    if (lambda == 0.0 && omega1 == omega2)
        throw ValidationError(
            "degenerate spectrum: lambda = 0 with omega1 = omega2 is not supported");
}

numerics::ComplexMatrix EigenSystem::basis_matrix() const {
    numerics::ComplexMatrix u(4);
    for (int level = 0; level < 4; ++level)
        for (int i = 0; i < 4; ++i)
            u(i, level) = kets[static_cast<std::size_t>(level)][static_cast<std::size_t>(i)];
    return u;
}

numerics::ComplexMatrix build_hamiltonian(const SystemParams& p) {
    p.validate();
    numerics::ComplexMatrix h(4);
    // Basis order |00>, |01>, |10>, |11>; index = 2*q1 + q2.
    h(1, 1) = p.omega2;
    h(2, 2) = p.omega1;
    h(3, 3) = p.omega1 + p.omega2;
    const double g = 0.5 * p.lambda;
    if (p.variant == Variant::full) {
        // sx(1) sx(2) couples |00><11| + |01><10| + h.c.
        h(0, 3) = g;
        h(3, 0) = g;
        h(1, 2) = g;
        h(2, 1) = g;
    } else {
        h(1, 2) = g;
        h(2, 1) = g;
    }
    return h;
}

EigenSystem eigensystem(const SystemParams& p) {
    p.validate();

    // Canonical frame: relabel qubits so omega2c >= omega1c; swap back on
    // computational-basis outputs below.
    const bool swapped = p.omega1 > p.omega2;
    const double w1 = swapped ? p.omega2 : p.omega1;
    const double w2 = swapped ? p.omega1 : p.omega2;
    const double lam = std::abs(p.lambda);

    const double sum = w1 + w2;
    const double dif = w2 - w1;
    const double split_even = std::sqrt(sum * sum + lam * lam);
    const double split_odd = std::sqrt(dif * dif + lam * lam);

    EigenSystem es;
    es.variant = p.variant;
    es.qubits_swapped = swapped;
    es.theta_odd = std::atan2(lam, dif);

    if (p.variant == Variant::full) {
        es.theta_even = std::atan2(lam, sum);
        es.energies = {0.5 * (sum - split_even), 0.5 * (sum - split_odd),
                       0.5 * (sum + split_odd), 0.5 * (sum + split_even)};
    } else {
        if (lam * lam >= 4.0 * w1 * w2)
            throw ValidationError(
                "rwa variant requires lambda < 2 sqrt(omega1 omega2) to keep |00> the ground state");
        es.theta_even = 0.0;
        es.energies = {0.0, 0.5 * (sum - split_odd), 0.5 * (sum + split_odd), sum};
    }
    es.omega_lo = es.energies[1] - es.energies[0];
    es.omega_hi = es.energies[2] - es.energies[0];

    const double ce = std::cos(0.5 * es.theta_even), se = std::sin(0.5 * es.theta_even);
    const double co = std::cos(0.5 * es.theta_odd), so = std::sin(0.5 * es.theta_odd);
    // Canonical-frame components in the order |00>, |01>, |10>, |11>.
    es.kets[0] = {ce, 0.0, 0.0, -se};
    es.kets[1] = {0.0, -so, co, 0.0};
    es.kets[2] = {0.0, co, so, 0.0};
    es.kets[3] = {se, 0.0, 0.0, ce};

    if (swapped) {
        // Undo the relabeling: |01> <-> |10| in every ket.
        for (auto& ket : es.kets) std::swap(ket[1], ket[2]);
    }
    return es;
}

namespace {

numerics::ComplexMatrix transform(const numerics::ComplexMatrix& rho, const EigenSystem& es,
                                  bool to_eigen) {
    const numerics::ComplexMatrix u = es.basis_matrix();
    return to_eigen ? u.adjoint() * rho * u : u * rho * u.adjoint();
}

} // namespace

DensityMatrix to_eigenbasis(const DensityMatrix& rho, const EigenSystem& es) {
    if (rho.basis() != Basis::computational)
        throw ContractViolation("to_eigenbasis: state is not in the computational basis");
    return {transform(rho.matrix(), es, true), Basis::eigen};
}

DensityMatrix to_computational(const DensityMatrix& rho, const EigenSystem& es) {
    if (rho.basis() != Basis::eigen)
        throw ContractViolation("to_computational: state is not in the eigenbasis");
    return {transform(rho.matrix(), es, false), Basis::computational};
}

numerics::ComplexMatrix sigma_x_qubit(int l) {
    if (l != 1 && l != 2) throw ContractViolation("sigma_x_qubit: qubit index must be 1 or 2");
    numerics::ComplexMatrix m(4);
    if (l == 1) {
        m(0, 2) = 1.0;
        m(2, 0) = 1.0;
        m(1, 3) = 1.0;
        m(3, 1) = 1.0;
    } else {
        m(0, 1) = 1.0;
        m(1, 0) = 1.0;
        m(2, 3) = 1.0;
        m(3, 2) = 1.0;
    }
    return m;
}

} // namespace qdimer::model
