#include "qdimer/bath.hpp"

#include "qdimer/errors.hpp"

#include <cmath>

namespace qdimer::bath {

double bose_occupation(double omega_rad_ns, double t_mk) {
    if (omega_rad_ns <= 0.0)
        throw ContractViolation("bose_occupation: frequency must be positive");
    if (t_mk < 0.0) throw ContractViolation("bose_occupation: negative temperature");
    if (t_mk == 0.0) return 0.0;
    return 1.0 / std::expm1(model::UnitSystem::theta_mk_ns * omega_rad_ns / t_mk);
}

GammaPair gamma(Channel ch, int reservoir, const model::SystemParams& p,
                const model::EigenSystem& es) {
    if (reservoir != 1 && reservoir != 2)
        throw ContractViolation("gamma: reservoir index must be 1 or 2");
    const double alpha = reservoir == 1 ? p.alpha1 : p.alpha2;
    const double t_mk = reservoir == 1 ? p.t1_mk : p.t2_mk;
    const double omega = ch == Channel::lo ? es.omega_lo : es.omega_hi;

    GammaPair g;
    g.decay = alpha * omega * (1.0 + bose_occupation(omega, t_mk));
    // Defined through the Boltzmann substitution so that excite/decay is
    // exp(-x) exactly in floating point.
    g.excite = t_mk == 0.0
                   ? 0.0
                   : g.decay * std::exp(-model::UnitSystem::thermal_exponent(omega, t_mk));
    return g;
}

RateSet rate_set(const model::SystemParams& p, const model::EigenSystem& es) {
    RateSet r;
    for (int ch = 0; ch < 2; ++ch)
        for (int l = 0; l < 2; ++l) {
            const GammaPair g = gamma(static_cast<Channel>(ch), l + 1, p, es);
            r.gamma_decay[ch][l] = g.decay;
            r.gamma_excite[ch][l] = g.excite;
        }

    const double ce = std::cos(0.5 * es.theta_even), se = std::sin(0.5 * es.theta_even);
    const double co = std::cos(0.5 * es.theta_odd), so = std::sin(0.5 * es.theta_odd);

    // Squared sigma_x matrix elements per canonical reservoir: index 0 is
    // the reservoir of the lower-frequency qubit in the canonical frame.
    const double b_lo[2] = {(ce * co + se * so) * (ce * co + se * so),
                            (ce * so + se * co) * (ce * so + se * co)};
    const double b_hi[2] = {(ce * so - se * co) * (ce * so - se * co),
                            (ce * co - se * so) * (ce * co - se * so)};
    const double sign_lo[2] = {1.0, -1.0};
    const double sign_hi[2] = {-1.0, 1.0};

    // Physical reservoir l couples to canonical slot l unless the qubit
    // labels were swapped during canonicalization.
    const int slot_of_phys[2] = {es.qubits_swapped ? 1 : 0, es.qubits_swapped ? 0 : 1};

    for (int l = 0; l < 2; ++l) {
        const int s = slot_of_phys[l];
        r.decay_lo += r.gamma_decay[0][l] * b_lo[s];
        r.excite_lo += r.gamma_excite[0][l] * b_lo[s];
        r.decay_hi += r.gamma_decay[1][l] * b_hi[s];
        r.excite_hi += r.gamma_excite[1][l] * b_hi[s];
        r.cross_decay_lo += sign_lo[s] * r.gamma_decay[0][l] * b_lo[s];
        r.cross_excite_lo += sign_lo[s] * r.gamma_excite[0][l] * b_lo[s];
        r.cross_decay_hi += sign_hi[s] * r.gamma_decay[1][l] * b_hi[s];
        r.cross_excite_hi += sign_hi[s] * r.gamma_excite[1][l] * b_hi[s];
    }
    return r;
}

} // namespace qdimer::bath
