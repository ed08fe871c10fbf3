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

DensityMatrix ket_state(std::array<Complex, 4> amps) {
    double n2 = 0.0;
    for (const Complex& c : amps) n2 += std::norm(c);
    for (Complex& c : amps) c /= std::sqrt(n2);
    return DensityMatrix::from_ket(std::span<const Complex, 4>(amps), Basis::computational);
}

} // namespace

TEST_CASE("concurrence: Bell and product states") {
    const auto bell = entanglement::concurrence(ket_state({1.0, 0.0, 0.0, 1.0}));
    CHECK(bell.value == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(bell.sqrt_eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(bell.sqrt_eigenvalues[1] < 1e-6);

    CHECK(entanglement::concurrence(ket_state({0.0, 1.0, 0.0, 0.0})).value < 1e-12);
    CHECK(entanglement::concurrence(ket_state({0.0, 0.0, 0.0, 1.0})).value < 1e-12);
}

TEST_CASE("concurrence of the coupled ground state equals sin(theta_even)") {
    const model::SystemParams p;  // omega1 = omega2 = 5 = lambda
    const model::EigenSystem es = model::eigensystem(p);
    const DensityMatrix ground =
        DensityMatrix::from_ket(std::span<const Complex, 4>(es.kets[0]), Basis::computational);
    const double c = entanglement::concurrence(ground).value;
    CHECK(c == doctest::Approx(std::sin(es.theta_even)).epsilon(1e-10));
    CHECK(c == doctest::Approx(0.4472135954999579).epsilon(1e-9));
}

TEST_CASE("concurrence_pure: superposition families") {
    for (double p : {0.0, 0.2, 0.5, 0.9, 1.0}) {
        const std::array<Complex, 4> onebit{0.0, std::sqrt(p), std::sqrt(1.0 - p), 0.0};
        CHECK(entanglement::concurrence_pure(onebit) ==
              doctest::Approx(2.0 * std::sqrt(p * (1.0 - p))).epsilon(1e-12));
    }
    const std::array<Complex, 4> twobit{std::sqrt(0.2), 0.0, 0.0, std::sqrt(0.8)};
    CHECK(entanglement::concurrence_pure(twobit) == doctest::Approx(0.8).epsilon(1e-12));
    const std::array<Complex, 4> excited{0.0, 0.0, 0.0, 1.0};
    CHECK(entanglement::concurrence_pure(excited) == 0.0);

    const std::array<Complex, 4> unnormalized{1.0, 0.0, 0.0, 1.0};
    CHECK_THROWS_AS((void)entanglement::concurrence_pure(unnormalized), ContractViolation);
}

TEST_CASE("concurrence agrees with the pure-state shortcut on random kets") {
    std::mt19937 rng(241);
    for (int trial = 0; trial < 40; ++trial) {
        const auto ket = oracle::random_ket(rng);
        const DensityMatrix rho =
            DensityMatrix::from_ket(std::span<const Complex, 4>(ket), Basis::computational);
        CHECK(entanglement::concurrence(rho).value ==
              doctest::Approx(entanglement::concurrence_pure(ket)).epsilon(1e-10));
    }
}

TEST_CASE("concurrence is invariant under local unitaries") {
    std::mt19937 rng(251);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);

    auto random_su2 = [&]() {
        const double a = angle(rng), b = angle(rng), c = angle(rng);
        ComplexMatrix u(2);
        u(0, 0) = std::exp(Complex(0, a)) * std::cos(c);
        u(0, 1) = std::exp(Complex(0, b)) * std::sin(c);
        u(1, 0) = -std::exp(Complex(0, -b)) * std::sin(c);
        u(1, 1) = std::exp(Complex(0, -a)) * std::cos(c);
        return u;
    };

    for (int trial = 0; trial < 25; ++trial) {
        const ComplexMatrix rho = oracle::random_density(rng);
        const ComplexMatrix u = numerics::kron(random_su2(), random_su2());
        const ComplexMatrix rotated = u * rho * u.adjoint();
        const double c0 = entanglement::concurrence(DensityMatrix(rho, Basis::computational)).value;
        const double c1 =
            entanglement::concurrence(DensityMatrix(rotated, Basis::computational)).value;
        CHECK(std::abs(c0 - c1) < 1e-9);
    }
}

TEST_CASE("concurrence stays in [0, 1] on random mixed states") {
    std::mt19937 rng(261);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto res =
            entanglement::concurrence(DensityMatrix(oracle::random_density(rng), Basis::computational));
        CHECK(res.value >= 0.0);
        CHECK(res.value <= 1.0);
        for (int k = 0; k < 3; ++k) CHECK(res.sqrt_eigenvalues[k] >= res.sqrt_eigenvalues[k + 1]);
    }
}

TEST_CASE("concurrence matches the X-state closed form") {
    std::mt19937 rng(271);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        // Random X state: diagonal plus antidiagonal within positivity.
        double d[4] = {u(rng) + 0.05, u(rng) + 0.05, u(rng) + 0.05, u(rng) + 0.05};
        const double tr = d[0] + d[1] + d[2] + d[3];
        for (double& x : d) x /= tr;
        const double m14 = u(rng) * std::sqrt(d[0] * d[3]);
        const double m23 = u(rng) * std::sqrt(d[1] * d[2]);
        const double ph1 = 2.0 * M_PI * u(rng), ph2 = 2.0 * M_PI * u(rng);

        ComplexMatrix rho(4);
        for (int i = 0; i < 4; ++i) rho(i, i) = d[i];
        rho(0, 3) = m14 * std::exp(Complex(0, ph1));
        rho(3, 0) = std::conj(rho(0, 3));
        rho(1, 2) = m23 * std::exp(Complex(0, ph2));
        rho(2, 1) = std::conj(rho(1, 2));

        const double expect = oracle::xstate_concurrence(rho);
        const double got =
            entanglement::concurrence(DensityMatrix(rho, Basis::computational)).value;
        CHECK(std::abs(got - expect) < 1e-10);
    }
}

TEST_CASE("concurrence rejects basis mismatch and unphysical spectra") {
    std::mt19937 rng(281);
    const DensityMatrix eig(oracle::random_density(rng), Basis::eigen);
    CHECK_THROWS_AS((void)entanglement::concurrence(eig), ContractViolation);

    // Hermitian, unit trace, but strongly indefinite: the flipped product
    // acquires a genuinely negative spectrum.
    ComplexMatrix indefinite(4);
    indefinite(0, 0) = 1.2;
    indefinite(1, 1) = 0.3;
    indefinite(2, 2) = -0.25;
    indefinite(3, 3) = -0.25;
    CHECK_THROWS_AS(
        (void)entanglement::concurrence(DensityMatrix(indefinite, Basis::computational)),
        NumericalError);
}

TEST_CASE("stationary concurrence: closed-form anchors") {
    model::SystemParams p;  // T = 0 preset
    CHECK(entanglement::stationary_concurrence(p) ==
          doctest::Approx(0.4472135954999579).epsilon(1e-10));

    // Strong coupling at T = 0 approaches maximal entanglement.
    model::SystemParams strong;
    strong.lambda = 500.0;
    const double c_strong = entanglement::stationary_concurrence(strong);
    const model::EigenSystem es = model::eigensystem(strong);
    CHECK(c_strong == doctest::Approx(std::sin(es.theta_even)).epsilon(1e-9));
    CHECK(c_strong == doctest::Approx(0.999800059980007).epsilon(1e-9));
    CHECK(c_strong > 0.999);

    // Frozen thermal anchors from the pre-build hand oracle.
    model::SystemParams warm10;
    warm10.t1_mk = warm10.t2_mk = 10.0;
    CHECK(entanglement::stationary_concurrence(warm10) ==
          doctest::Approx(0.3197604249101611).epsilon(1e-9));
    model::SystemParams warm20;
    warm20.t1_mk = warm20.t2_mk = 20.0;
    CHECK(entanglement::stationary_concurrence(warm20) ==
          doctest::Approx(0.0645485026310163).epsilon(1e-9));
}
