#include "qdimer/dynamics.hpp"

#include "qdimer/entanglement.hpp"
#include "qdimer/errors.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace qdimer;
using numerics::Complex;
using numerics::ComplexMatrix;

namespace {

constexpr int vec_index(int i, int j) { return i + 4 * j; }

model::SystemParams preset() { return {}; }

model::SystemParams warm_preset(double t_mk) {
    model::SystemParams p;
    p.t1_mk = t_mk;
    p.t2_mk = t_mk;
    return p;
}

} // namespace

TEST_CASE("liouvillian: zero-temperature generator annihilates the ground projector") {
    const auto liouv = dynamics::build_liouvillian(preset());
    std::vector<Complex> ground(16, 0.0);
    ground[vec_index(0, 0)] = 1.0;
    const auto image = liouv.generator * std::span<const Complex>(ground);
    for (const Complex& z : image) CHECK(std::abs(z) < 1e-14);
}

TEST_CASE("liouvillian: population block equals the rate-equation matrix") {
    std::mt19937 rng(141);
    for (int trial = 0; trial < 25; ++trial) {
        const model::SystemParams p = oracle::random_params(rng);
        const auto liouv = dynamics::build_liouvillian(p);

        // Diagonal-to-diagonal entries reproduce the rate matrix.
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                const Complex entry = liouv.generator(vec_index(i, i), vec_index(j, j));
                CHECK(std::abs(entry - liouv.population_rates[i][j]) < 1e-12);
            }

        // Populations decouple from coherences both ways (secular structure).
        for (int i = 0; i < 4; ++i)
            for (int m = 0; m < 4; ++m)
                for (int n = 0; n < 4; ++n) {
                    if (m == n) continue;
                    CHECK(std::abs(liouv.generator(vec_index(i, i), vec_index(m, n))) < 1e-14);
                    CHECK(std::abs(liouv.generator(vec_index(m, n), vec_index(i, i))) < 1e-14);
                }

        // Columns of the rate matrix sum to zero; off-diagonals non-negative.
        for (int j = 0; j < 4; ++j) {
            double col = 0.0;
            for (int i = 0; i < 4; ++i) {
                col += liouv.population_rates[i][j];
                if (i != j) CHECK(liouv.population_rates[i][j] >= 0.0);
            }
            CHECK(std::abs(col) < 1e-16);
        }

        // Row for the second level: gain excite_lo from the ground state,
        // loss (decay_lo + excite_hi), gain decay_hi from the top level.
        const auto& r = liouv.rates;
        CHECK(liouv.population_rates[1][0] == doctest::Approx(r.excite_lo).epsilon(1e-14));
        CHECK(liouv.population_rates[1][1] ==
              doctest::Approx(-(r.decay_lo + r.excite_hi)).epsilon(1e-14));
        CHECK(liouv.population_rates[1][2] == 0.0);
        CHECK(liouv.population_rates[1][3] == doctest::Approx(r.decay_hi).epsilon(1e-14));
    }
}

TEST_CASE("liouvillian: trace preservation and Hermiticity preservation") {
    std::mt19937 rng(151);
    const auto liouv = dynamics::build_liouvillian(oracle::random_params(rng));

    // tr(L rho) = 0 for every basis element: population rows of each column
    // sum to zero.
    for (int col = 0; col < 16; ++col) {
        Complex acc = 0.0;
        for (int i = 0; i < 4; ++i) acc += liouv.generator(vec_index(i, i), col);
        CHECK(std::abs(acc) < 1e-14);
    }

    // L(X^+) = (L(X))^+ on random non-Hermitian X.
    for (int trial = 0; trial < 10; ++trial) {
        const ComplexMatrix x = oracle::random_matrix(rng, 4);
        const auto lx = numerics::devectorize(liouv.generator * numerics::vectorize(x), 4);
        const auto lxd = numerics::devectorize(liouv.generator * numerics::vectorize(x.adjoint()), 4);
        CHECK((lx.adjoint() - lxd).max_abs() < 1e-12);
    }
}

TEST_CASE("liouvillian: isolated top-bottom coherence and cross-term coupling") {
    model::SystemParams p;
    p.omega1 = 4.0;
    p.omega2 = 6.5;
    p.lambda = 3.0;
    p.alpha1 = 2e-3;
    p.alpha2 = 8e-3;  // asymmetric so the cross terms survive
    p.t1_mk = 12.0;
    p.t2_mk = 4.0;
    const auto liouv = dynamics::build_liouvillian(p);
    const auto& r = liouv.rates;
    const auto& es = liouv.eigen;

    // (a,d) coherence: pure phase rotation plus decay, no couplings.
    const int ad = vec_index(0, 3);
    for (int col = 0; col < 16; ++col)
        if (col != ad) CHECK(std::abs(liouv.generator(ad, col)) < 1e-14);
    const Complex expected_ad =
        Complex(0.0, -(es.energies[0] - es.energies[3])) -
        Complex(0.5 * (r.decay_lo + r.decay_hi + r.excite_lo + r.excite_hi));
    CHECK(std::abs(liouv.generator(ad, ad) - expected_ad) < 1e-12);

    // Cross terms couple the equal-frequency coherence pairs.
    CHECK(std::abs(liouv.generator(vec_index(0, 2), vec_index(1, 3)) - r.cross_decay_lo) < 1e-13);
    CHECK(std::abs(liouv.generator(vec_index(1, 3), vec_index(0, 2)) - r.cross_excite_lo) < 1e-13);
    CHECK(std::abs(liouv.generator(vec_index(0, 1), vec_index(2, 3)) - r.cross_decay_hi) < 1e-13);
    CHECK(std::abs(liouv.generator(vec_index(2, 3), vec_index(0, 1)) - r.cross_excite_hi) < 1e-13);
}

TEST_CASE("secular-validity diagnostic") {
    CHECK_FALSE(dynamics::build_liouvillian(preset()).secular_warning);
    model::SystemParams strong = preset();
    strong.alpha1 = 0.5;
    strong.alpha2 = 0.5;
    const auto liouv = dynamics::build_liouvillian(strong);
    CHECK(liouv.secular_warning);
    CHECK_FALSE(liouv.secular_note.empty());
}

TEST_CASE("evolve: stationary start stays put") {
    const auto liouv = dynamics::build_liouvillian(warm_preset(10.0));
    const DensityMatrix rho_ss = dynamics::steady_state(liouv);
    const std::vector<double> times = {0.0, 5.0, 20.0, 80.0, 200.0};
    const auto tr = dynamics::evolve(liouv, rho_ss, times);
    for (std::size_t k = 0; k < times.size(); ++k)
        for (int i = 0; i < 4; ++i)
            CHECK(std::abs(tr.populations[k][i] - rho_ss.population(i)) < 1e-9);
}

TEST_CASE("evolve: undamped limit keeps populations and coherence moduli") {
    model::SystemParams p = preset();
    p.alpha1 = 0.0;
    p.alpha2 = 0.0;
    const auto liouv = dynamics::build_liouvillian(p);

    std::mt19937 rng(161);
    const DensityMatrix rho0(oracle::random_density(rng), Basis::computational);
    const DensityMatrix rho0_eigen = model::to_eigenbasis(rho0, liouv.eigen);
    const std::vector<double> times = {0.0, 1.3, 4.7, 11.0};
    const auto tr = dynamics::evolve(liouv, rho0, times);

    for (std::size_t k = 0; k < times.size(); ++k) {
        const DensityMatrix in_eigen = model::to_eigenbasis(tr.states[k], liouv.eigen);
        for (int i = 0; i < 4; ++i) {
            CHECK(std::abs(in_eigen.population(i) - rho0_eigen.population(i)) < 1e-9);
            for (int j = 0; j < 4; ++j) {
                // moduli constant; phases rotate at the Bohr frequencies
                CHECK(std::abs(std::abs(in_eigen.matrix()(i, j)) -
                               std::abs(rho0_eigen.matrix()(i, j))) < 1e-9);
                const Complex phase = std::exp(
                    Complex(0.0, -(liouv.eigen.energies[i] - liouv.eigen.energies[j]) * times[k]));
                CHECK(std::abs(in_eigen.matrix()(i, j) - phase * rho0_eigen.matrix()(i, j)) <
                      1e-8);
            }
        }
    }
}

TEST_CASE("evolve: top-level decay is a single exponential at T = 0") {
    const auto liouv = dynamics::build_liouvillian(preset());
    const DensityMatrix rho0 =
        DensityMatrix::from_ket(std::span<const Complex, 4>(liouv.eigen.kets[3]),
                                Basis::computational);
    std::vector<double> times;
    for (int k = 0; k <= 20; ++k) times.push_back(4.0 * k);
    const auto tr = dynamics::evolve(liouv, rho0, times);
    const double total = liouv.rates.decay_lo + liouv.rates.decay_hi;
    for (std::size_t k = 0; k < times.size(); ++k)
        CHECK(std::abs(tr.populations[k][3] - std::exp(-total * times[k])) < 1e-9);
}

TEST_CASE("analytic propagator: identity at t = 0 and probability conservation") {
    std::mt19937 rng(171);
    for (int trial = 0; trial < 20; ++trial) {
        const model::SystemParams p = oracle::random_params(rng);
        const auto es = model::eigensystem(p);
        const auto r = bath::rate_set(p, es);

        std::uniform_real_distribution<double> u(0.0, 1.0);
        std::array<double, 4> pops{u(rng), u(rng), u(rng), u(rng)};
        const double sum = pops[0] + pops[1] + pops[2] + pops[3];
        for (double& x : pops) x /= sum;

        const auto back = dynamics::propagate_populations_analytic(r, pops, 0.0);
        for (int i = 0; i < 4; ++i) CHECK(std::abs(back[i] - pops[i]) < 1e-14);

        for (double t : {0.7, 13.0, 250.0}) {
            const auto pt = dynamics::propagate_populations_analytic(r, pops, t);
            CHECK(std::abs(pt[0] + pt[1] + pt[2] + pt[3] - 1.0) < 1e-12);
            for (double x : pt) CHECK(x >= -1e-12);
        }
    }
}

TEST_CASE("analytic propagator matches the tensor-product two-level kernel") {
    std::mt19937 rng(181);
    std::uniform_real_distribution<double> ur(1e-4, 0.3), u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        bath::RateSet r;
        r.decay_lo = ur(rng);
        r.decay_hi = ur(rng);
        r.excite_lo = trial % 3 == 0 ? 0.0 : ur(rng) * 0.5;
        r.excite_hi = trial % 4 == 0 ? 0.0 : ur(rng) * 0.5;

        std::array<double, 4> pops{u(rng), u(rng), u(rng), u(rng)};
        const double sum = pops[0] + pops[1] + pops[2] + pops[3];
        for (double& x : pops) x /= sum;

        for (double t : {0.0, 2.5, 40.0, 900.0}) {
            const auto direct = dynamics::propagate_populations_analytic(r, pops, t);
            const auto via_product = oracle::product_propagator(
                r.decay_lo, r.excite_lo, r.decay_hi, r.excite_hi, pops, t);
            for (int i = 0; i < 4; ++i) CHECK(std::abs(direct[i] - via_product[i]) < 1e-12);
        }
    }
}

TEST_CASE("analytic propagator satisfies the population rate equations") {
    // Central finite differences of the closed form against M p(t); this
    // discharges the intermediate transform-domain algebra as a check.
    std::mt19937 rng(191);
    for (int trial = 0; trial < 10; ++trial) {
        const model::SystemParams p = oracle::random_params(rng);
        const auto liouv = dynamics::build_liouvillian(p);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        std::array<double, 4> pops{u(rng), u(rng), u(rng), u(rng)};
        const double sum = pops[0] + pops[1] + pops[2] + pops[3];
        for (double& x : pops) x /= sum;

        const double h = 1e-4;
        for (double t : {0.5, 7.0, 90.0}) {
            const auto plus = dynamics::propagate_populations_analytic(liouv.rates, pops, t + h);
            const auto minus = dynamics::propagate_populations_analytic(liouv.rates, pops, t - h);
            const auto at = dynamics::propagate_populations_analytic(liouv.rates, pops, t);
            for (int i = 0; i < 4; ++i) {
                const double lhs = (plus[i] - minus[i]) / (2.0 * h);
                double rhs = 0.0;
                for (int j = 0; j < 4; ++j) rhs += liouv.population_rates[i][j] * at[j];
                CHECK(std::abs(lhs - rhs) < 1e-6);
            }
        }
    }
}

TEST_CASE("analytic propagator: stationary limit and zero-temperature endpoint") {
    const auto liouv = dynamics::build_liouvillian(warm_preset(14.0));
    const std::array<double, 4> start{0.1, 0.2, 0.3, 0.4};
    const auto limit = dynamics::propagate_populations_analytic(liouv.rates, start, 1e9);
    const auto stat = dynamics::stationary_populations(liouv.rates);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(limit[i] - stat[i]) < 1e-12);

    const auto& r = liouv.rates;
    const double denom = (r.decay_lo + r.excite_lo) * (r.decay_hi + r.excite_hi);
    CHECK(stat[0] == doctest::Approx(r.decay_lo * r.decay_hi / denom).epsilon(1e-14));
    CHECK(stat[1] == doctest::Approx(r.excite_lo * r.decay_hi / denom).epsilon(1e-14));
    CHECK(stat[2] == doctest::Approx(r.decay_lo * r.excite_hi / denom).epsilon(1e-14));
    CHECK(stat[3] == doctest::Approx(r.excite_lo * r.excite_hi / denom).epsilon(1e-14));

    const auto cold = dynamics::build_liouvillian(preset());
    const auto ground = dynamics::propagate_populations_analytic(cold.rates, start, 1e9);
    CHECK(ground[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("evolve populations agree with the closed form (diagonal and full starts)") {
    std::mt19937 rng(201);
    for (int trial = 0; trial < 6; ++trial) {
        const model::SystemParams p = oracle::random_params(rng, 20.0);
        const auto liouv = dynamics::build_liouvillian(p);
        const double span = 3.0 / (liouv.rates.decay_lo + liouv.rates.excite_lo);

        DensityMatrix rho0 = [&]() {
            if (trial % 2 == 0) {
                std::uniform_real_distribution<double> u(0.0, 1.0);
                std::array<double, 4> pops{u(rng), u(rng), u(rng), u(rng)};
                const double sum = pops[0] + pops[1] + pops[2] + pops[3];
                for (double& x : pops) x /= sum;
                return DensityMatrix::from_populations(pops, Basis::eigen);
            }
            return DensityMatrix(oracle::random_density(rng), Basis::computational);
        }();

        std::vector<double> times;
        for (int k = 1; k <= 8; ++k) times.push_back(span * k / 8.0);
        const auto tr = dynamics::evolve(liouv, rho0, times);

        const DensityMatrix rho0_eigen =
            rho0.basis() == Basis::eigen ? rho0 : model::to_eigenbasis(rho0, liouv.eigen);
        for (std::size_t k = 0; k < times.size(); ++k) {
            const auto expect = dynamics::propagate_populations_analytic(
                liouv.rates, rho0_eigen.populations(), times[k]);
            for (int i = 0; i < 4; ++i) CHECK(std::abs(tr.populations[k][i] - expect[i]) < 1e-7);
        }
        tr.validate();  // Hermitian, unit trace, positive along the way
    }
}

TEST_CASE("matrix exponential of the generator agrees with adaptive integration") {
    std::mt19937 rng(211);
    const auto liouv = dynamics::build_liouvillian(warm_preset(8.0));
    const DensityMatrix rho0(oracle::random_density(rng), Basis::eigen);
    const std::vector<double> times = {1.0, 10.0, 100.0};
    const auto tr = dynamics::evolve(liouv, rho0, times);

    for (std::size_t k = 0; k < times.size(); ++k) {
        ComplexMatrix scaled = liouv.generator;
        scaled *= Complex(times[k]);
        const auto prop = numerics::expm(scaled);
        const auto direct = prop * numerics::vectorize(rho0.matrix());
        const auto integrated =
            numerics::vectorize(model::to_eigenbasis(tr.states[k], liouv.eigen).matrix());
        for (int e = 0; e < 16; ++e) CHECK(std::abs(direct[e] - integrated[e]) < 1e-7);
    }
}

TEST_CASE("steady state: zero temperature, Gibbs weights, mixed temperatures") {
    const auto cold = dynamics::build_liouvillian(preset());
    const DensityMatrix ground = dynamics::steady_state(cold);
    CHECK(ground.population(0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(ground.population(1) + ground.population(2) + ground.population(3) < 1e-14);

    const auto warm = dynamics::build_liouvillian(warm_preset(10.0));
    const DensityMatrix gibbs = dynamics::steady_state(warm);
    // Frozen from the pre-build hand oracle at T = 10 mK.
    CHECK(gibbs.population(0) == doctest::Approx(0.9118639222703689).epsilon(1e-9));
    CHECK(gibbs.population(1) == doctest::Approx(0.0860688136909928).epsilon(1e-9));
    CHECK(gibbs.population(2) == doctest::Approx(0.0018889684912733).epsilon(1e-7));
    CHECK(gibbs.population(3) == doctest::Approx(0.0001782955473650).epsilon(1e-7));
    const auto expect = oracle::gibbs_populations(warm.eigen, 10.0);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(gibbs.population(i) - expect[i]) < 1e-12);

    // Different bath temperatures: the level-occupation ratio is set by the
    // channel rates, not by a single Boltzmann factor.
    model::SystemParams mixed = preset();
    mixed.t1_mk = 18.0;
    mixed.t2_mk = 6.0;
    const auto liouv = dynamics::build_liouvillian(mixed);
    const DensityMatrix rho = dynamics::steady_state(liouv);
    CHECK(rho.population(1) / rho.population(0) ==
          doctest::Approx(liouv.rates.excite_lo / liouv.rates.decay_lo).epsilon(1e-12));
    const double single_bath =
        std::exp(-model::UnitSystem::theta_mk_ns * liouv.eigen.omega_lo / 18.0);
    CHECK(std::abs(rho.population(1) / rho.population(0) - single_bath) > 1e-3);
}

TEST_CASE("steady state is unique: long-time limits coincide from random starts") {
    std::mt19937 rng(221);
    const auto liouv = dynamics::build_liouvillian(warm_preset(12.0));
    const auto stat = dynamics::stationary_populations(liouv.rates);
    const double t_long =
        60.0 / std::min(liouv.rates.decay_lo + liouv.rates.excite_lo,
                        liouv.rates.decay_hi + liouv.rates.excite_hi);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        std::array<double, 4> pops{u(rng), u(rng), u(rng), u(rng)};
        const double sum = pops[0] + pops[1] + pops[2] + pops[3];
        for (double& x : pops) x /= sum;
        const auto limit = dynamics::propagate_populations_analytic(liouv.rates, pops, t_long);
        for (int i = 0; i < 4; ++i) CHECK(std::abs(limit[i] - stat[i]) < 1e-7);
    }
}

TEST_CASE("evolve rejects malformed time grids") {
    const auto liouv = dynamics::build_liouvillian(preset());
    std::mt19937 rng(231);
    const DensityMatrix rho0(oracle::random_density(rng), Basis::computational);
    CHECK_THROWS_AS((void)dynamics::evolve(liouv, rho0, std::vector<double>{-1.0, 2.0}),
                    ContractViolation);
    CHECK_THROWS_AS((void)dynamics::evolve(liouv, rho0, std::vector<double>{2.0, 2.0}),
                    ContractViolation);
}

TEST_CASE("undamped rates reject stationary queries") {
    model::SystemParams p = preset();
    p.alpha1 = 0.0;
    p.alpha2 = 0.0;
    const auto liouv = dynamics::build_liouvillian(p);
    CHECK_THROWS_AS((void)dynamics::stationary_populations(liouv.rates), ContractViolation);
}
