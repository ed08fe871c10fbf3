#pragma once

#include "qdimer/model.hpp"

namespace qdimer::bath {

// The two secular transition frequencies of the four-level diamond:
// lo pairs the b->a and d->c channels, hi pairs c->a and d->b.
enum class Channel { lo = 0, hi = 1 };

// Ohmic zero-temperature spectral density J(w) = alpha * w, defined for
// w > 0 (the Markovian rates only sample it at the two channel frequencies).
struct SpectralDensity {
    double alpha = 0.0;
    double operator()(double omega) const { return alpha * omega; }
};

// Mean thermal occupation 1/(exp(theta w / T) - 1); zero at T = 0.
double bose_occupation(double omega_rad_ns, double t_mk);

struct GammaPair {
    double decay = 0.0;   // J(w) (1 + N)
    double excite = 0.0;  // decay * exp(-x) = J(w) N
};

// Microscopic rates of physical reservoir l (1 or 2) at a channel frequency.
GammaPair gamma(Channel ch, int reservoir, const model::SystemParams& p,
                const model::EigenSystem& es);

// Aggregate channel coefficients (all rad/ns) plus the per-reservoir rates
// they are built from, indexed [channel][reservoir-1] with physical labels.
struct RateSet {
    double decay_lo = 0.0, decay_hi = 0.0;
    double excite_lo = 0.0, excite_hi = 0.0;
    double cross_decay_lo = 0.0, cross_decay_hi = 0.0;
    double cross_excite_lo = 0.0, cross_excite_hi = 0.0;
    double gamma_decay[2][2]{};
    double gamma_excite[2][2]{};
};

// Channel coefficients from the half-angle closed forms, with the barred
// (excitation) set obtained by the gamma -> gamma_bar substitution.
RateSet rate_set(const model::SystemParams& p, const model::EigenSystem& es);

} // namespace qdimer::bath
