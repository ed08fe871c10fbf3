#include "qdimer/dynamics.hpp"

#include "qdimer/entanglement.hpp"
#include "qdimer/errors.hpp"
#include "qdimer/ode.hpp"

#include <cmath>
#include <sstream>

namespace qdimer::dynamics {

using numerics::Complex;
using numerics::ComplexMatrix;

namespace {

// Superoperator of D[A] rho = A rho A^+ - 1/2 {A^+A, rho} in the
// column-stacking convention vec(A X B) = (B^T (x) A) vec(X).
ComplexMatrix dissipator_superop(const ComplexMatrix& a) {
    const int n = a.dim();
    const ComplexMatrix ident = ComplexMatrix::identity(n);
    const ComplexMatrix ada = a.adjoint() * a;
    ComplexMatrix d = numerics::kron(a.conjugate(), a);
    d -= Complex(0.5) * numerics::kron(ident, ada);
    d -= Complex(0.5) * numerics::kron(ada.transpose(), ident);
    return d;
}

constexpr int vec_index(int i, int j) { return i + 4 * j; }

} // namespace

Liouvillian build_liouvillian(const model::SystemParams& p) {
    Liouvillian l;
    l.params = p;
    l.eigen = model::eigensystem(p);
    l.rates = bath::rate_set(p, l.eigen);

    const ComplexMatrix u = l.eigen.basis_matrix();

    // Unitary part: H is diagonal in its own eigenbasis.
    l.generator = ComplexMatrix(16);
    const Complex minus_i(0.0, -1.0);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            l.generator(vec_index(i, j), vec_index(i, j)) =
                minus_i * (l.eigen.energies[static_cast<std::size_t>(i)] -
                           l.eigen.energies[static_cast<std::size_t>(j)]);

    for (int res = 1; res <= 2; ++res) {
        const ComplexMatrix sx_eig =
            u.adjoint() * model::sigma_x_qubit(res) * u;

        // The coupling connects levels only across the two channel
        // frequencies; the (a,d) and (b,c) elements vanish structurally.
        if (std::abs(sx_eig(0, 3)) > 1e-10 || std::abs(sx_eig(1, 2)) > 1e-10)
            throw NumericalError("build_liouvillian: unexpected eigenoperator structure");

        for (int ch = 0; ch < 2; ++ch) {
            ComplexMatrix a(4);
            if (ch == 0) {
                a(0, 1) = sx_eig(0, 1);  // b -> a
                a(2, 3) = sx_eig(2, 3);  // d -> c
            } else {
                a(0, 2) = sx_eig(0, 2);  // c -> a
                a(1, 3) = sx_eig(1, 3);  // d -> b
            }
            const double g = l.rates.gamma_decay[ch][res - 1];
            const double gbar = l.rates.gamma_excite[ch][res - 1];
            if (g != 0.0) l.generator += Complex(g) * dissipator_superop(a);
            if (gbar != 0.0) l.generator += Complex(gbar) * dissipator_superop(a.adjoint());
        }
    }

    const auto& r = l.rates;
    l.population_rates = {{{-(r.excite_lo + r.excite_hi), r.decay_lo, r.decay_hi, 0.0},
                           {r.excite_lo, -(r.decay_lo + r.excite_hi), 0.0, r.decay_hi},
                           {r.excite_hi, 0.0, -(r.excite_lo + r.decay_hi), r.decay_lo},
                           {0.0, r.excite_hi, r.excite_lo, -(r.decay_lo + r.decay_hi)}}};

    const double max_rate =
        std::max(r.decay_lo + r.excite_lo, r.decay_hi + r.excite_hi);
    const double min_gap = std::min(l.eigen.omega_lo, l.eigen.omega_hi - l.eigen.omega_lo);
    if (max_rate > 0.1 * min_gap) {
        l.secular_warning = true;
        std::ostringstream os;
        os << "secular approximation marginal: channel rate " << max_rate
           << " rad/ns exceeds 10% of the smallest Bohr gap " << min_gap << " rad/ns";
        l.secular_note = os.str();
    }
    return l;
}

void Trajectory::validate(const StateTolerances& tol) const {
    for (const DensityMatrix& s : states) s.validate(tol);
}

Trajectory evolve(const Liouvillian& liouv, const DensityMatrix& rho0,
                  std::span<const double> times_ns, const EvolveOptions& options) {
    for (std::size_t i = 0; i < times_ns.size(); ++i) {
        if (times_ns[i] < 0.0) throw ContractViolation("evolve: negative sample time");
        if (i > 0 && times_ns[i] <= times_ns[i - 1])
            throw ContractViolation("evolve: sample times not strictly increasing");
    }

    const DensityMatrix rho_eigen =
        rho0.basis() == Basis::eigen ? rho0 : model::to_eigenbasis(rho0, liouv.eigen);
    const std::vector<Complex> y0 = numerics::vectorize(rho_eigen.matrix());

    Trajectory tr;
    tr.times_ns.assign(times_ns.begin(), times_ns.end());
    tr.states.reserve(times_ns.size());
    tr.populations.resize(times_ns.size());
    tr.concurrence.resize(times_ns.size());

    const ComplexMatrix& gen = liouv.generator;
    auto rhs = [&gen](double, std::span<const Complex> y, std::span<Complex> dydt) {
        for (int i = 0; i < 16; ++i) {
            Complex acc = 0.0;
            for (int j = 0; j < 16; ++j) acc += gen(i, j) * y[static_cast<std::size_t>(j)];
            dydt[static_cast<std::size_t>(i)] = acc;
        }
    };

    // Collect samples in order; convert and check each one.
    std::vector<std::vector<Complex>> raw(times_ns.size());
    ode::Options opts;
    opts.rtol = options.rtol;
    opts.atol = options.atol;
    ode::integrate_dopri5(
        rhs, y0, 0.0, times_ns,
        [&raw](std::size_t index, double, std::span<const Complex> y) {
            raw[index].assign(y.begin(), y.end());
        },
        opts);

    for (std::size_t k = 0; k < times_ns.size(); ++k) {
        DensityMatrix state_eigen(numerics::devectorize(raw[k], 4), Basis::eigen);
        const double tr_defect = state_eigen.trace_defect();
        if (tr_defect > options.trace_tol)
            throw IntegrationError("evolve: trace drifted by " + std::to_string(tr_defect) +
                                   " at t = " + std::to_string(times_ns[k]) + " ns");
        if (state_eigen.matrix().hermiticity_defect() > options.trace_tol)
            throw IntegrationError("evolve: state lost Hermiticity at t = " +
                                   std::to_string(times_ns[k]) + " ns");
        tr.populations[k] = state_eigen.populations();
        DensityMatrix state_comp = model::to_computational(state_eigen, liouv.eigen);
        tr.concurrence[k] = entanglement::concurrence(state_comp).value;
        tr.states.push_back(std::move(state_comp));
    }
    return tr;
}

std::array<double, 4> propagate_populations_analytic(const bath::RateSet& r,
                                                     const std::array<double, 4>& pops0,
                                                     double t_ns) {
    double sum = 0.0;
    for (double p : pops0) {
        if (p < -1e-9) throw ContractViolation("propagate_populations_analytic: negative population");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw ContractViolation("propagate_populations_analytic: populations do not sum to 1");

    const double dlo = r.decay_lo, dhi = r.decay_hi;
    const double elo = r.excite_lo, ehi = r.excite_hi;
    const double pair_lo = dlo + elo, pair_hi = dhi + ehi;
    const double denom = pair_lo * pair_hi;
    if (denom <= 0.0)
        throw ContractViolation("propagate_populations_analytic: vanishing relaxation rate");

    const double e_all = std::exp(-(pair_lo + pair_hi) * t_ns);
    const double e_hi = std::exp(-pair_hi * t_ns);
    const double e_lo = std::exp(-pair_lo * t_ns);
    const double pa = pops0[0], pb = pops0[1], pc = pops0[2], pd = pops0[3];

    std::array<double, 4> out{};
    out[0] = (dlo * dhi +
              (elo * ehi * pa - dlo * ehi * pb - elo * dhi * pc + dlo * dhi * pd) * e_all +
              (dlo * ehi * (pa + pb) - dlo * dhi * (pc + pd)) * e_hi +
              (elo * dhi * (pa + pc) - dlo * dhi * (pb + pd)) * e_lo) /
             denom;
    out[1] = (elo * dhi +
              (-elo * ehi * pa + dlo * ehi * pb + elo * dhi * pc - dlo * dhi * pd) * e_all +
              (elo * ehi * (pa + pb) - elo * dhi * (pc + pd)) * e_hi +
              (-elo * dhi * (pa + pc) + dlo * dhi * (pb + pd)) * e_lo) /
             denom;
    out[2] = (dlo * ehi +
              (-elo * ehi * pa + dlo * ehi * pb + elo * dhi * pc - dlo * dhi * pd) * e_all +
              (-dlo * ehi * (pa + pb) + dlo * dhi * (pc + pd)) * e_hi +
              (elo * ehi * (pa + pc) - dlo * ehi * (pb + pd)) * e_lo) /
             denom;
    out[3] = (elo * ehi +
              (elo * ehi * pa - dlo * ehi * pb - elo * dhi * pc + dlo * dhi * pd) * e_all +
              (-elo * ehi * (pa + pb) + elo * dhi * (pc + pd)) * e_hi +
              (-elo * ehi * (pa + pc) + dlo * ehi * (pb + pd)) * e_lo) /
             denom;
    return out;
}

std::array<double, 4> stationary_populations(const bath::RateSet& r) {
    const double denom = (r.decay_lo + r.excite_lo) * (r.decay_hi + r.excite_hi);
    if (denom <= 0.0)
        throw ContractViolation("stationary_populations: vanishing relaxation rate");
    return {r.decay_lo * r.decay_hi / denom, r.excite_lo * r.decay_hi / denom,
            r.decay_lo * r.excite_hi / denom, r.excite_lo * r.excite_hi / denom};
}

DensityMatrix steady_state(const Liouvillian& liouv) {
    const std::array<double, 4> pops = stationary_populations(liouv.rates);
    DensityMatrix rho = DensityMatrix::from_populations(pops, Basis::eigen);

    const std::vector<Complex> residual = liouv.generator * numerics::vectorize(rho.matrix());
    double worst = 0.0;
    for (const Complex& z : residual) worst = std::max(worst, std::abs(z));
    if (worst > 1e-10)
        throw NumericalError("steady_state: generator residual " + std::to_string(worst));
    return rho;
}

} // namespace qdimer::dynamics
