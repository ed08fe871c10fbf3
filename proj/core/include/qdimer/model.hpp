#pragma once

#include "qdimer/density_matrix.hpp"

#include <array>

namespace qdimer::model {

enum class Variant { full, rwa };

// Unit conventions used throughout: angular frequencies in rad/ns, times
// in ns, temperatures in mK. The thermal exponent entering Boltzmann and
// Bose factors is x = theta_mk_ns * omega / T.
struct UnitSystem {
    static constexpr double hbar_joule_second = 1.0545718e-34;
    static constexpr double boltzmann_joule_per_kelvin = 1.380649e-23;
    // mK per (rad/ns), approx 7.6382. Fixed, not user-tunable.
    static constexpr double theta_mk_ns =
        hbar_joule_second / boltzmann_joule_per_kelvin * 1e12;

    // x = theta * omega / T; +infinity at T = 0 so exp(-x) -> 0.
    static double thermal_exponent(double omega_rad_ns, double t_mk);
};

struct SystemParams {
    double omega1 = 5.0;   // qubit 1 frequency (rad/ns)
    double omega2 = 5.0;   // qubit 2 frequency (rad/ns)
    double lambda = 5.0;   // qubit-qubit coupling (rad/ns)
    double alpha1 = 5e-3;  // dimensionless Ohmic strength, reservoir 1
    double alpha2 = 5e-3;  // dimensionless Ohmic strength, reservoir 2
    double t1_mk = 0.0;    // reservoir 1 temperature (mK)
    double t2_mk = 0.0;    // reservoir 2 temperature (mK)
    Variant variant = Variant::full;

    void validate() const;  // throws ValidationError
};

// Energy-ordered eigensystem of the coupled-qubit Hamiltonian. Levels are
// labeled a..d (indices 0..3) by increasing energy; kets hold
// computational-basis amplitudes in the order |00>, |01>, |10>, |11>.
struct EigenSystem {
    std::array<double, 4> energies{};  // rad/ns, ascending
    double theta_even = 0.0;           // mixing angle of the {|00>,|11>} sector (rad)
    double theta_odd = 0.0;            // mixing angle of the {|01>,|10>} sector (rad)
    std::array<std::array<numerics::Complex, 4>, 4> kets{};  // kets[level][component]
    double omega_lo = 0.0;  // E_b - E_a = E_d - E_c (rad/ns)
    double omega_hi = 0.0;  // E_c - E_a = E_d - E_b (rad/ns)
    bool qubits_swapped = false;  // internal relabeling applied (omega1 > omega2)
    Variant variant = Variant::full;

    // Unitary U with columns = kets; U^+ H U is diagonal.
    numerics::ComplexMatrix basis_matrix() const;
};

// H = w1 s+s-(1) + w2 s+s-(2) + (lambda/2) sx(1) sx(2) in the computational
// basis; the rwa variant replaces the coupling by the excitation-conserving
// flip-flop (lambda/2)(s+(1)s-(2) + s-(1)s+(2)).
numerics::ComplexMatrix build_hamiltonian(const SystemParams& p);

// Closed-form eigensystem. For the rwa variant the labeling by increasing
// energy requires lambda^2 < 4 w1 w2 (else the one-excitation level dives
// below |00> and the two-channel structure breaks); violations throw.
EigenSystem eigensystem(const SystemParams& p);

DensityMatrix to_eigenbasis(const DensityMatrix& rho, const EigenSystem& es);
DensityMatrix to_computational(const DensityMatrix& rho, const EigenSystem& es);

// sigma_x of qubit l (1 or 2) as a 4x4 computational-basis matrix.
numerics::ComplexMatrix sigma_x_qubit(int l);

} // namespace qdimer::model
